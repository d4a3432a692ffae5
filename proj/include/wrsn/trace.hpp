#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "wrsn/network.hpp"

namespace wrsn {

inline constexpr int kTraceFormatVersion = 1;

struct McvSnapshot {
    int id = -1;
    Point position;
    double residual = 0.0;
    double odometer = 0.0;
    double travel_energy = 0.0;
    double energy_sent = 0.0;
    McvMode mode = McvMode::Idle;
};

struct StepSummary {
    double clock = 0.0;
    int alive = 0;
    int queue_length = 0;
    std::vector<McvSnapshot> mcvs;
};

/// One controller evaluation of one node.
struct ScoreRecord {
    double clock = 0.0;
    int node = -1;
    double request = 0.0;
    double energy = 0.0;
    double reputation = 0.0;
    double efficiency = 0.0;
    double combined = 0.0;
    bool flagged = false;
};

struct QueueEntry {
    int node = -1;
    double reported_residual = 0.0;
    double issued_at = 0.0;
};

struct QueueRecord {
    double clock = 0.0;
    std::vector<QueueEntry> ordered;
    std::vector<QueueUpdate::Exclusion> excluded;
};

struct TraceLog {
    NetworkConfig config;
    int node_count = 0;
    std::vector<Event> events;
    std::vector<StepSummary> steps;  // steps[0] is the initial snapshot at clock 0
    std::vector<ScoreRecord> scores;
    std::vector<QueueRecord> queue_updates;
    double depot_energy_drawn = 0.0;
};

StepSummary summarize(const SimulationState& state);

/// Line-delimited text form. First line is "wrsn-trace <version>", then one
/// record per line:
///   S clock alive queue_len {mcv id x y residual odometer travel sent mode}
///   E clock kind fields...
///   F clock node request energy reputation efficiency combined flag
///   Q clock n {node residual issued_at} m {node reason}
///   T depot_energy_drawn
/// Records appear in simulation order. Reals use 17 significant digits so a
/// round trip through text is exact.
void write_trace(std::ostream& out, const TraceLog& trace);
std::string serialize_trace(const TraceLog& trace);

/// 64-bit FNV-1a of the serialized form, printed as 16 hex digits.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string trace_hash(const TraceLog& trace);

}  // namespace wrsn
