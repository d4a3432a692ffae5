#pragma once

#include <span>
#include <vector>

#include "wrsn/network.hpp"

namespace wrsn {

struct Assignment {
    int mcv = -1;
    int node = -1;

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct DispatchPlan {
    std::vector<Assignment> assignments;
    std::vector<int> returning;  // chargers too drained to take the request they were offered
};

/// Energy an MCV must hold to serve `node` from where it stands and still
/// reach the depot with its minimum working reserve.
double dispatch_energy_need(const Mcv& mcv, const SensorNode& node, const NetworkConfig& config);

/// Greedy assignment in queue order: each request goes to the nearest
/// Idle/Roaming charger that can afford it (ties to the lower id). An
/// available charger that cannot afford a request it is offered is sent home.
/// Busy chargers are never preempted here; see revoke_flagged.
DispatchPlan dispatch_mcvs(std::span<const int> queue_order, std::span<const Mcv> mcvs,
                           std::span<const SensorNode> nodes, const NetworkConfig& config);

/// Chargers whose target sits in the exclusion set return to Idle. Returns
/// the ids of the aborted chargers.
std::vector<int> revoke_flagged(const QueueUpdate& update, std::vector<Mcv>& mcvs);

}  // namespace wrsn
