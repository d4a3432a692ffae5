#include "wrsn/dispatch.hpp"

#include <algorithm>
#include <limits>

namespace wrsn {

double dispatch_energy_need(const Mcv& mcv, const SensorNode& node, const NetworkConfig& config) {
    const double to_node = distance(mcv.position, node.position) * config.travel_cost;
    const double charge = std::max(0.0, node.capacity - node.reported_residual());
    const double home = distance(node.position, config.depot()) * config.travel_cost;
    return to_node + charge + home + config.mcv_reserve_base();
}

DispatchPlan dispatch_mcvs(std::span<const int> queue_order, std::span<const Mcv> mcvs,
                           std::span<const SensorNode> nodes, const NetworkConfig& config) {
    DispatchPlan plan;
    std::vector<char> taken(mcvs.size(), 0);
    for (std::size_t i = 0; i < mcvs.size(); ++i)
        if (mcvs[i].mode != McvMode::Idle && mcvs[i].mode != McvMode::Roaming) taken[i] = 1;

    for (int node_id : queue_order) {
        const SensorNode& node = nodes[node_id];
        int best = -1;
        double best_distance = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < mcvs.size(); ++i) {
            if (taken[i]) continue;
            if (mcvs[i].residual < dispatch_energy_need(mcvs[i], node, config)) {
                taken[i] = 1;
                plan.returning.push_back(mcvs[i].id);
                continue;
            }
            const double d = distance(mcvs[i].position, node.position);
            if (d < best_distance) {
                best_distance = d;
                best = static_cast<int>(i);
            }
        }
        if (best < 0) {
            if (std::all_of(taken.begin(), taken.end(), [](char t) { return t != 0; })) break;
            continue;
        }
        taken[best] = 1;
        plan.assignments.push_back({mcvs[best].id, node_id});
    }
    return plan;
}

std::vector<int> revoke_flagged(const QueueUpdate& update, std::vector<Mcv>& mcvs) {
    std::vector<int> aborted;
    for (auto& mcv : mcvs) {
        if ((mcv.mode == McvMode::Dispatched || mcv.mode == McvMode::Charging) && mcv.target &&
            update.excludes(*mcv.target)) {
            mcv.target.reset();
            mcv.mode = McvMode::Idle;
            mcv.pause_left = 0.0;
            aborted.push_back(mcv.id);
        }
    }
    return aborted;
}

}  // namespace wrsn
