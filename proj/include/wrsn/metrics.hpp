#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wrsn/attack.hpp"
#include "wrsn/trace.hpp"

namespace wrsn {

/// 100 * received / (travel energy + energy sent). nullopt when the chargers
/// never moved nor sent anything.
std::optional<double> energy_usage_efficiency(const TraceLog& trace);

/// Percent of nodes alive at time `at` (the horizon when omitted). Throws
/// std::invalid_argument when `at` is past the end of the trace.
double survival_rate(const TraceLog& trace, std::optional<double> at = std::nullopt);

struct DetectionRates {
    std::optional<double> detection;  // percent; nullopt without malicious nodes
    double false_positive = 0.0;      // percent
};

/// Node-level: a node counts as flagged if any score record flags it.
DetectionRates detection_rate(const std::vector<ScoreRecord>& flags, const GroundTruth& truth, int node_count);

struct TravelReport {
    double total = 0.0;
    std::vector<double> per_cycle;  // distance between consecutive depot refills, all chargers, in time order
};

TravelReport travel_distance(const TraceLog& trace);

struct ScenarioResult {
    int node_count = 0;
    AttackTier tier = AttackTier::None;
    std::uint64_t seed = 0;
    bool controller = false;
    std::optional<double> energy_usage_efficiency;
    double survival_rate = 100.0;
    std::optional<double> detection_rate;
    double false_positive_rate = 0.0;
    double travel_distance = 0.0;
    double attack_fraction = 0.0;
    std::string trace_hash;
};

/// Assembles every metric of one run.
ScenarioResult summarize_run(const TraceLog& trace, const GroundTruth& truth, AttackTier tier, bool controller);

inline constexpr const char* kUndefined = "undefined";

/// results.csv: header plus one row per result, in the given order.
void write_results_csv(const std::filesystem::path& file, const std::vector<ScenarioResult>& results);

/// Writes results.csv and one plot file per metric (efficiency.dat,
/// survival.dat, detection.dat, travel.dat). Plot rows are node counts; each
/// column is the mean over seeds for one (tier, controller) series. Throws
/// std::runtime_error when a file cannot be written.
void export_results(const std::vector<ScenarioResult>& results, const std::filesystem::path& out_dir);

/// "undefined" for nullopt, otherwise 17 significant digits.
std::string format_metric(std::optional<double> value);

}  // namespace wrsn
