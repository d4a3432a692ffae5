#include "wrsn/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wrsn/attack.hpp"
#include "wrsn/dispatch.hpp"

namespace wrsn {

const char* to_string(McvMode mode) {
    switch (mode) {
        case McvMode::Idle: return "idle";
        case McvMode::Roaming: return "roaming";
        case McvMode::Dispatched: return "dispatched";
        case McvMode::Charging: return "charging";
        case McvMode::Returning: return "returning";
    }
    return "?";
}

const char* to_string(SessionEnd reason) {
    switch (reason) {
        case SessionEnd::NodeFull: return "full";
        case SessionEnd::NodeDead: return "dead";
        case SessionEnd::Revoked: return "revoked";
        case SessionEnd::McvLow: return "mcv_low";
    }
    return "?";
}

bool QueueUpdate::excludes(int node_id) const {
    return std::any_of(excluded.begin(), excluded.end(), [&](const Exclusion& e) { return e.node_id == node_id; });
}

bool SimulationState::is_excluded(int node_id) const {
    return std::binary_search(excluded.begin(), excluded.end(), node_id);
}

Point mcv_initial_position(int j, int m, double circumradius) {
    if (m < 1 || j < 1 || j > m) throw std::out_of_range("mcv_initial_position: index out of range");
    if (!(circumradius > 0.0)) throw std::invalid_argument("mcv_initial_position: circumradius must be positive");
    const double angle = std::numbers::pi * (2.0 * j - 1.0) / m;
    return {circumradius / 2.0 * std::cos(angle), circumradius / 2.0 * std::sin(angle)};
}

SimulationState initialize_network(const NetworkConfig& config) {
    if (const auto report = validate_config(config); !report.ok())
        throw ConfigError("invalid network config: " + report.to_string());

    SimulationState state;
    state.config = config;
    // Independent streams so attack sampling never perturbs placement or mobility.
    Rng placement(config.rng_seed);
    state.mobility_rng.seed(config.rng_seed ^ 0xA5A5A5A5DEADBEEFULL);
    state.flood_rng.seed(config.rng_seed ^ 0x0F1E2D3C4B5A6978ULL);

    std::uniform_real_distribution<double> coord(0.0, config.area_side);
    state.nodes.reserve(config.node_count);
    for (int i = 0; i < config.node_count; ++i) {
        SensorNode n;
        n.id = i;
        n.position.x = coord(placement);
        n.position.y = coord(placement);
        n.capacity = config.node_capacity;
        n.residual = config.node_capacity;
        n.consumption_rate = config.node_consumption_rate;
        state.nodes.push_back(n);
    }

    const Point depot = config.depot();
    for (int j = 1; j <= config.mcv_count; ++j) {
        const Point offset = mcv_initial_position(j, config.mcv_count, config.effective_circumradius());
        Mcv mcv;
        mcv.id = j - 1;
        mcv.position = {depot.x + offset.x, depot.y + offset.y};
        mcv.residual = config.mcv_capacity;
        mcv.initial_residual = config.mcv_capacity;
        mcv.pause_left = config.roaming_pause;
        mcv.waypoint = mcv.position;
        state.mcvs.push_back(mcv);
    }
    return state;
}

MoveResult mcv_move(Mcv& mcv, Point destination, double dt, const NetworkConfig& config) {
    const double remaining = distance(mcv.position, destination);
    const double reach = config.mcv_speed * dt;
    MoveResult result;
    if (remaining <= reach) {
        result.moved = remaining;
        result.arrived = true;
        mcv.position = destination;
    } else {
        const double t = reach / remaining;
        mcv.position.x += (destination.x - mcv.position.x) * t;
        mcv.position.y += (destination.y - mcv.position.y) * t;
        result.moved = reach;
    }
    const double energy = result.moved * config.travel_cost;
    mcv.odometer += result.moved;
    mcv.residual -= energy;
    mcv.travel_energy_total += energy;
    return result;
}

namespace {

constexpr double kFullTolerance = 1e-12;

bool disrupted(const SensorNode& node, double clock) {
    return node.attack && node.attack->active(clock) && node.attack->disruption_efficiency < 1.0;
}

}  // namespace

bool reports_full(const SensorNode& node) {
    return node.reported_residual() >= node.capacity * (1.0 - kFullTolerance);
}

TransferResult charge_transfer(Mcv& mcv, SensorNode& node, double clock, double dt, const NetworkConfig& config) {
    TransferResult t;
    if (!node.alive || node.residual <= 0.0) return t;
    const double budget = std::min(config.charging_rate * dt, std::max(0.0, mcv.residual));
    if (!disrupted(node, clock) && !node.forged_residual) {
        t.sent = std::min(budget, std::max(0.0, node.capacity - node.residual));
        t.received = t.sent;
        node.residual = std::min(node.capacity, node.residual + t.received);
    } else {
        const double efficiency = node.attack && node.attack->active(clock) ? node.attack->disruption_efficiency : 1.0;
        const double claimed_deficit = std::max(0.0, node.capacity - node.reported_residual());
        t.sent = std::min(budget, claimed_deficit / efficiency);
        const double delivered =
            node.attack && node.attack->active(clock) ? apply_charging_disruption(*node.attack, t.sent) : t.sent;
        t.received = std::min(delivered, std::max(0.0, node.capacity - node.residual));
        node.residual = std::min(node.capacity, node.residual + t.received);
        if (node.forged_residual) {
            *node.forged_residual = std::min(node.capacity, *node.forged_residual + delivered);
            if (*node.forged_residual >= node.capacity * (1.0 - kFullTolerance)) *node.forged_residual = node.capacity;
        }
    }
    mcv.residual -= t.sent;
    mcv.energy_sent_total += t.sent;
    node.total_received += t.received;
    return t;
}

namespace {

ChargingRequest request_of(const SensorNode& node) {
    return {node.id, node.request_issued_at, node.reported_residual()};
}

bool is_targeted(const SimulationState& state, int node_id) {
    return std::any_of(state.mcvs.begin(), state.mcvs.end(), [&](const Mcv& m) {
        return m.target && *m.target == node_id &&
               (m.mode == McvMode::Dispatched || m.mode == McvMode::Charging);
    });
}

bool waiting_eligible(const SimulationState& state, const SensorNode& n) {
    return n.alive && n.pending_request && !state.is_excluded(n.id) && !is_targeted(state, n.id);
}

double return_cost(const Mcv& mcv, const NetworkConfig& config) {
    return distance(mcv.position, config.depot()) * config.travel_cost;
}

void finish_session(SimulationState& state, Mcv& mcv, SessionEnd reason, EventList& events) {
    const int node_id = mcv.target.value_or(-1);
    events.push_back({state.clock, SessionEndEvent{mcv.id, node_id, reason}});
    if (reason == SessionEnd::NodeFull && node_id >= 0) {
        SensorNode& node = state.nodes[node_id];
        node.pending_request = false;
        node.forged_residual.reset();
    }
    mcv.target.reset();
    mcv.mode = McvMode::Idle;
    mcv.pause_left = state.config.roaming_pause;
}

void release_to_queue(SimulationState& state, int node_id) {
    const SensorNode& node = state.nodes[node_id];
    if (node.alive && node.pending_request && !state.is_excluded(node_id)) {
        // Interrupted service goes back to the head of the line.
        state.request_queue.insert(state.request_queue.begin(), request_of(node));
    }
}

}  // namespace

void apply_queue_update(SimulationState& state, const QueueUpdate& update) {
    state.excluded.clear();
    for (const auto& e : update.excluded) state.excluded.push_back(e.node_id);
    std::sort(state.excluded.begin(), state.excluded.end());
    state.excluded.erase(std::unique(state.excluded.begin(), state.excluded.end()), state.excluded.end());

    std::vector<ChargingRequest> rebuilt;
    std::vector<char> placed(state.nodes.size(), 0);
    auto place = [&](int id) {
        if (id < 0 || id >= static_cast<int>(state.nodes.size()) || placed[id]) return;
        const SensorNode& n = state.nodes[id];
        if (!waiting_eligible(state, n)) return;
        placed[id] = 1;
        rebuilt.push_back(request_of(n));
    };
    for (int id : update.ordered) place(id);
    for (const auto& r : state.request_queue) place(r.node_id);

    std::vector<int> stragglers;
    for (const auto& n : state.nodes)
        if (!placed[n.id] && waiting_eligible(state, n)) stragglers.push_back(n.id);
    std::stable_sort(stragglers.begin(), stragglers.end(), [&](int a, int b) {
        return state.nodes[a].request_issued_at < state.nodes[b].request_issued_at;
    });
    for (int id : stragglers) place(id);
    state.request_queue = std::move(rebuilt);
}

EventList advance_step(SimulationState& state, const QueueUpdate* update) {
    const NetworkConfig& cfg = state.config;
    const double dt = cfg.time_step;
    const double e_th = cfg.energy_threshold();
    state.step += 1;
    state.clock = static_cast<double>(state.step) * dt;
    EventList events;

    // (1) drain
    for (auto& n : state.nodes) {
        if (!n.alive) continue;
        const double drain = n.attack && n.attack->active(state.clock)
                                 ? apply_energy_anomaly(*n.attack, n.consumption_rate, dt)
                                 : n.consumption_rate * dt;
        const double actual = std::min(drain, n.residual);
        n.residual -= actual;
        n.total_drained += actual;
    }

    // (2) requests
    auto enqueue = [&](SensorNode& n, double issued_at) {
        n.pending_request = true;
        n.request_issued_at = issued_at;
        if (!state.is_excluded(n.id)) state.request_queue.push_back(request_of(n));
    };
    for (auto& n : state.nodes) {
        if (!n.alive || n.residual <= 0.0) continue;
        if (!n.pending_request && n.residual < e_th) {
            events.push_back({state.clock, RequestEvent{n.id, n.residual}});
            enqueue(n, state.clock);
        }
        if (n.attack && state.flood_baseline_rate > 0.0) {
            const auto fakes = apply_request_flood(*n.attack, n.flood, state.clock, dt, state.flood_baseline_rate, e_th,
                                                   state.flood_rng);
            for (const auto& fake : fakes) {
                events.push_back({state.clock, RequestEvent{n.id, fake.residual_at_issue}});
                if (!n.pending_request) {
                    n.forged_residual = fake.residual_at_issue;
                    enqueue(n, state.clock);
                }
            }
        }
    }

    // (3) queue, revocation, dispatch
    if (update) {
        apply_queue_update(state, *update);
        for (auto& mcv : state.mcvs) {
            if (mcv.target && state.is_excluded(*mcv.target) &&
                (mcv.mode == McvMode::Dispatched || mcv.mode == McvMode::Charging)) {
                events.push_back({state.clock, SessionEndEvent{mcv.id, *mcv.target, SessionEnd::Revoked}});
                mcv.target.reset();
                mcv.mode = McvMode::Idle;
                mcv.pause_left = 0.0;
            }
        }
    }
    if (!state.request_queue.empty()) {
        std::vector<int> order;
        order.reserve(state.request_queue.size());
        for (const auto& r : state.request_queue) order.push_back(r.node_id);
        const DispatchPlan plan = dispatch_mcvs(order, state.mcvs, state.nodes, cfg);
        for (const auto& a : plan.assignments) {
            Mcv& mcv = state.mcvs[a.mcv];
            mcv.mode = McvMode::Dispatched;
            mcv.target = a.node;
            events.push_back({state.clock, DispatchEvent{a.mcv, a.node}});
            std::erase_if(state.request_queue, [&](const ChargingRequest& r) { return r.node_id == a.node; });
        }
        for (int id : plan.returning) state.mcvs[id].mode = McvMode::Returning;
    }

    // (4) chargers
    const Point depot = cfg.depot();
    const double step_travel_cost = cfg.mcv_speed * dt * cfg.travel_cost;
    for (auto& mcv : state.mcvs) {
        if ((mcv.mode == McvMode::Idle || mcv.mode == McvMode::Roaming) &&
            mcv.residual <= cfg.mcv_reserve_base() + return_cost(mcv, cfg) + step_travel_cost) {
            mcv.mode = McvMode::Returning;
        }
        switch (mcv.mode) {
            case McvMode::Idle:
                mcv.pause_left -= dt;
                if (mcv.pause_left <= 1e-12) {
                    std::uniform_real_distribution<double> coord(0.0, cfg.area_side);
                    mcv.waypoint.x = coord(state.mobility_rng);
                    mcv.waypoint.y = coord(state.mobility_rng);
                    mcv.mode = McvMode::Roaming;
                }
                break;
            case McvMode::Roaming:
                if (mcv_move(mcv, mcv.waypoint, dt, cfg).arrived) {
                    mcv.mode = McvMode::Idle;
                    mcv.pause_left = cfg.roaming_pause;
                }
                break;
            case McvMode::Dispatched: {
                SensorNode& node = state.nodes[*mcv.target];
                if (!node.alive || node.residual <= 0.0) {
                    finish_session(state, mcv, SessionEnd::NodeDead, events);
                    break;
                }
                if (mcv_move(mcv, node.position, dt, cfg).arrived) {
                    events.push_back({state.clock, ArrivalEvent{mcv.id, node.id}});
                    mcv.mode = McvMode::Charging;
                }
                break;
            }
            case McvMode::Charging: {
                SensorNode& node = state.nodes[*mcv.target];
                if (!node.alive || node.residual <= 0.0) {
                    finish_session(state, mcv, SessionEnd::NodeDead, events);
                    break;
                }
                const TransferResult t = charge_transfer(mcv, node, state.clock, dt, cfg);
                if (t.sent > 0.0) events.push_back({state.clock, ChargeEvent{mcv.id, node.id, t.sent, t.received}});
                if (reports_full(node)) {
                    finish_session(state, mcv, SessionEnd::NodeFull, events);
                } else if (mcv.residual <= cfg.mcv_reserve_base() + return_cost(mcv, cfg)) {
                    const int node_id = node.id;
                    finish_session(state, mcv, SessionEnd::McvLow, events);
                    mcv.mode = McvMode::Returning;
                    release_to_queue(state, node_id);
                }
                break;
            }
            case McvMode::Returning:
                if (mcv_move(mcv, depot, dt, cfg).arrived) {
                    events.push_back({state.clock, ArrivalEvent{mcv.id, -1}});
                    const double amount = cfg.mcv_capacity - mcv.residual;
                    state.depot_energy_drawn += amount;
                    mcv.residual = cfg.mcv_capacity;
                    events.push_back({state.clock, RefillEvent{mcv.id, amount}});
                    mcv.mode = McvMode::Idle;
                    mcv.pause_left = cfg.roaming_pause;
                }
                break;
        }
    }

    // (5) deaths
    for (auto& n : state.nodes) {
        if (!n.alive || n.residual > 0.0) continue;
        n.alive = false;
        n.residual = 0.0;
        n.pending_request = false;
        n.forged_residual.reset();
        std::erase_if(state.request_queue, [&](const ChargingRequest& r) { return r.node_id == n.id; });
        events.push_back({state.clock, DeathEvent{n.id}});
    }
    return events;
}

std::vector<NodeReport> observe(const SimulationState& state) {
    std::vector<char> queued(state.nodes.size(), 0);
    for (const auto& r : state.request_queue) queued[r.node_id] = 1;
    std::vector<NodeReport> out;
    out.reserve(state.nodes.size());
    for (const auto& n : state.nodes) {
        NodeReport r;
        r.id = n.id;
        r.position = n.position;
        r.reported_residual = n.reported_residual();
        r.alive = n.alive;
        r.pending_request = n.pending_request;
        r.queued = queued[n.id] != 0;
        r.request_issued_at = n.request_issued_at;
        r.total_consumed = n.total_drained;
        out.push_back(r);
    }
    return out;
}

}  // namespace wrsn
