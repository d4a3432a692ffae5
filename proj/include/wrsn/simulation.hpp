#pragma once

#include <vector>

#include "wrsn/network.hpp"

namespace wrsn {

/// Position of MCV `j` (1-based) out of `m`, relative to the depot: evenly
/// spaced on a circle of radius C_c / 2 at angles pi (2j - 1) / m.
Point mcv_initial_position(int j, int m, double circumradius);

/// Uniform node deployment, depot at the centre, chargers on their initial
/// circle, every battery full. Throws ConfigError on an invalid config.
SimulationState initialize_network(const NetworkConfig& config);

struct MoveResult {
    double moved = 0.0;
    bool arrived = false;
};

/// Straight-line move of at most speed * dt toward `destination`; charges
/// travel energy and advances the odometer.
MoveResult mcv_move(Mcv& mcv, Point destination, double dt, const NetworkConfig& config);

struct TransferResult {
    double sent = 0.0;
    double received = 0.0;
};

/// One step of energy transfer. Honest nodes take exactly their deficit.
/// A node with an active attack profile receives disruption_efficiency * sent
/// and the charger keeps sending until the node's reported level is full.
TransferResult charge_transfer(Mcv& mcv, SensorNode& node, double clock, double dt, const NetworkConfig& config);

/// True once the node's reported level reaches capacity.
bool reports_full(const SensorNode& node);

/// Rebuilds the waiting queue from a controller update and records the
/// exclusion set for the following steps.
void apply_queue_update(SimulationState& state, const QueueUpdate& update);

/// One fixed step: drain, requests, queue, chargers, deaths.
EventList advance_step(SimulationState& state, const QueueUpdate* update = nullptr);

/// Controller-visible observables of every node.
std::vector<NodeReport> observe(const SimulationState& state);

}  // namespace wrsn
