#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wrsn/attack.hpp"
#include "wrsn/metrics.hpp"
#include "wrsn/trace.hpp"
#include "wrsn/twin.hpp"

namespace wrsn {

struct ScenarioConfig {
    NetworkConfig network;
    AttackSpec attack;
    ControllerConfig controller;
    /// Controller updates reach the physical plane. When off the queue stays
    /// FIFO and the detector only observes.
    bool controller_enabled = true;
    std::optional<double> calibrate_fpr;
    int calibration_seeds = 10;
    std::uint64_t calibration_seed_offset = 100000;
    int parallel = 1;
};

struct SweepConfig {
    ScenarioConfig base;
    std::vector<int> node_counts{100, 200, 300, 400, 500};
    std::vector<AttackTier> tiers{AttackTier::LAI, AttackTier::MAI, AttackTier::HAI};
    std::vector<bool> controller{true};
    int seeds = 5;
};

ValidationReport validate_scenario(const ScenarioConfig& config);

/// Fills `config` from the keys it recognizes, leaving the rest in `kv`.
void read_scenario(KeyValueFile& kv, ScenarioConfig& config);
/// Parses a whole scenario file; unknown keys are an error.
ScenarioConfig load_scenario(const std::filesystem::path& file);
SweepConfig load_sweep(const std::filesystem::path& file);

struct RunOutput {
    TraceLog trace;
    GroundTruth truth;
};

/// Runs one scenario to the horizon. Throws ConfigError on invalid input.
RunOutput run_simulation(const ScenarioConfig& config);

ScenarioResult evaluate(const ScenarioConfig& config, const RunOutput& run);

/// Runs every task index in [0, count) on up to `parallel` threads. Results
/// must be written to per-index slots; the first exception is rethrown.
void parallel_for(std::size_t count, int parallel, const std::function<void(std::size_t)>& task);

/// Scenario list of a sweep: node count x tier x controller x replicate, with
/// seed = base seed + replicate.
std::vector<ScenarioConfig> expand_sweep(const SweepConfig& sweep);
std::vector<ScenarioResult> run_sweep(const SweepConfig& sweep, int parallel);

/// Highest post-warm-up combined score of every node in a run, labeled.
std::vector<detect::CalibrationSample> calibration_samples(const RunOutput& run);

/// Runs `calibration_seeds` passive-controller traces starting at
/// rng_seed + calibration_seed_offset and calibrates the threshold at node
/// level. Throws std::invalid_argument when no samples are produced.
detect::CalibrationResult calibrate(const ScenarioConfig& config, double target_fpr, int parallel);

}  // namespace wrsn
