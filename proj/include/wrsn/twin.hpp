#pragma once

#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "wrsn/detection.hpp"
#include "wrsn/network.hpp"

namespace wrsn {

struct ControllerConfig {
    double interval = 50.0;      // s between controller ticks
    double sync_latency = 0.0;   // s the twin lags the physical plane
    int sticky_after = 0;        // permanent ban after this many consecutive flags; 0 = off
    detect::DetectorConfig detector;
};

ValidationReport validate_controller_config(const ControllerConfig& config);
void read_controller_config(KeyValueFile& kv, ControllerConfig& config);

/// Controller-side mirror of one node. Holds reported values only.
struct TwinNode {
    int id = -1;
    Point position;
    double reported_residual = 0.0;
    bool alive = true;
    bool pending_request = false;
    double request_issued_at = 0.0;
    double total_consumed = 0.0;
};

/// What the twin accumulates about one node between two window closes.
struct WindowAccumulator {
    long requests = 0;
    double sent = 0.0;
    double received = 0.0;
    double consumed_at_open = 0.0;
};

struct TwinState {
    double clock = 0.0;
    double window_opened_at = 0.0;
    ControllerConfig config;
    std::vector<TwinNode> nodes;
    std::vector<std::vector<int>> neighbors;  // live-or-dead nodes within comm range
    std::vector<detect::EstimatorState> estimators;
    std::vector<detect::ScoreVector> scores;  // latest per node
    std::vector<WindowAccumulator> windows;
    std::vector<int> consecutive_flags;
    std::vector<char> banned;
    double request_floor = 0.0;
    std::optional<detect::ReputationChain> chain;
    Rng chain_rng;
    bool fresh = false;  // a window closed since the last controller tick

    struct Pending {
        double clock = 0.0;
        std::vector<NodeReport> reports;
        std::vector<Event> events;
    };
    std::deque<Pending> backlog;  // physical snapshots not yet visible to the twin
};

/// Builds the twin from the initial physical state: positions, neighbor
/// lists, empty estimators. Throws ConfigError on an invalid config.
TwinState make_twin(const SimulationState& physical, const ControllerConfig& config);

/// Mirrors reported observables and the events emitted since the previous
/// call, delayed by the configured latency, and closes every observation
/// window that ended. Calling it again without new events changes nothing.
void sync_twin(const SimulationState& physical, std::span<const Event> new_events, TwinState& twin);

/// Flags nodes whose combined score exceeds `threshold` and returns the
/// unflagged pending requesters ordered by reported residual, then issue
/// time, then id.
QueueUpdate controller_tick(TwinState& twin, const Weights& weights, double threshold);

/// Total order used for queue updates.
bool queue_before(const TwinNode& a, const TwinNode& b);

}  // namespace wrsn
