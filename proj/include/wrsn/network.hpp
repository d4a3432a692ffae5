#pragma once

// Physical-plane state shared by the simulation engine, the attack injector,
// and the controller's queue interface.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "wrsn/config.hpp"

namespace wrsn {

using Rng = std::mt19937_64;

/// Adversarial behavior attached to a compromised node. All-neutral factors
/// (1, 1, 1) describe an honest node.
struct AttackProfile {
    int node_id = -1;
    double request_flood_factor = 1.0;   // >= 1, multiplies the honest request rate
    double energy_anomaly_factor = 1.0;  // > 0, multiplies physical drain
    double disruption_efficiency = 1.0;  // (0, 1], received / sent
    double active_from = 0.0;            // s

    bool active(double clock) const { return clock >= active_from; }
};

/// Next arrival of a node's fake-request Poisson process; negative when not
/// yet scheduled.
struct FloodProcess {
    double next_arrival = -1.0;
};

struct ChargingRequest {
    int node_id = -1;
    double issued_at = 0.0;
    double residual_at_issue = 0.0;
};

struct SensorNode {
    int id = -1;
    Point position;
    double residual = 0.0;
    double capacity = 0.0;
    double consumption_rate = 0.0;
    bool alive = true;
    bool pending_request = false;
    std::optional<AttackProfile> attack;

    // Residual the node claims while a forged request is outstanding.
    std::optional<double> forged_residual;
    double request_issued_at = 0.0;
    double total_drained = 0.0;
    double total_received = 0.0;
    FloodProcess flood;

    /// What the sink and the controller believe this node holds.
    double reported_residual() const { return forged_residual.value_or(residual); }
};

enum class McvMode { Idle, Roaming, Dispatched, Charging, Returning };

const char* to_string(McvMode mode);

struct Mcv {
    int id = -1;
    Point position;
    double residual = 0.0;
    McvMode mode = McvMode::Idle;
    std::optional<int> target;  // node id while Dispatched or Charging
    Point waypoint;
    double pause_left = 0.0;
    double odometer = 0.0;
    double energy_sent_total = 0.0;
    double travel_energy_total = 0.0;
    double initial_residual = 0.0;
};

/// Controller output consumed by the physical plane.
struct QueueUpdate {
    struct Exclusion {
        int node_id = -1;
        std::string reason;
    };
    std::vector<int> ordered;
    std::vector<Exclusion> excluded;
    double issued_at = 0.0;

    bool excludes(int node_id) const;
};

struct SimulationState {
    NetworkConfig config;
    double clock = 0.0;
    long step = 0;
    std::vector<SensorNode> nodes;
    std::vector<Mcv> mcvs;
    std::vector<ChargingRequest> request_queue;  // waiting, not yet assigned
    std::vector<int> excluded;                   // sorted ids barred by the last QueueUpdate
    double depot_energy_drawn = 0.0;             // refills after the initial charge
    double flood_baseline_rate = 0.0;            // 1/s; 0 disables fake-request sampling
    Rng mobility_rng;
    Rng flood_rng;

    bool is_excluded(int node_id) const;
};

// Events emitted by one step of the physical plane.
struct RequestEvent {
    int node = -1;
    double reported_residual = 0.0;
};
struct DeathEvent {
    int node = -1;
};
struct DispatchEvent {
    int mcv = -1;
    int node = -1;
};
struct ArrivalEvent {
    int mcv = -1;
    int node = -1;  // -1 for the depot
};
struct ChargeEvent {
    int mcv = -1;
    int node = -1;
    double sent = 0.0;
    double received = 0.0;
};
enum class SessionEnd { NodeFull, NodeDead, Revoked, McvLow };
const char* to_string(SessionEnd reason);
struct SessionEndEvent {
    int mcv = -1;
    int node = -1;
    SessionEnd reason = SessionEnd::NodeFull;
};
struct RefillEvent {
    int mcv = -1;
    double amount = 0.0;
};
struct WarningEvent {
    std::string message;
};

using EventPayload = std::variant<RequestEvent, DeathEvent, DispatchEvent, ArrivalEvent, ChargeEvent,
                                  SessionEndEvent, RefillEvent, WarningEvent>;

struct Event {
    double clock = 0.0;
    EventPayload payload;
};

using EventList = std::vector<Event>;

/// Node observables visible to the controller. Carries no ground truth.
struct NodeReport {
    int id = -1;
    Point position;
    double reported_residual = 0.0;
    bool alive = true;
    bool pending_request = false;
    bool queued = false;
    double request_issued_at = 0.0;
    double total_consumed = 0.0;
};

}  // namespace wrsn
