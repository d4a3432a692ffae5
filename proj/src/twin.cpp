#include "wrsn/twin.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "wrsn/simulation.hpp"

namespace wrsn {

ValidationReport validate_controller_config(const ControllerConfig& c) {
    ValidationReport r = detect::validate_detector_config(c.detector);
    if (!(c.interval > 0.0 && std::isfinite(c.interval))) r.add("controller_interval must be positive");
    if (!(c.sync_latency >= 0.0 && std::isfinite(c.sync_latency))) r.add("sync_latency must be >= 0");
    if (c.sticky_after < 0) r.add("sticky_after must be >= 0");
    return r;
}

void read_controller_config(KeyValueFile& kv, ControllerConfig& c) {
    kv.take_double("controller_interval", c.interval);
    kv.take_double("sync_latency", c.sync_latency);
    kv.take_int("sticky_after", c.sticky_after);
    detect::read_detector_config(kv, c.detector);
}

bool queue_before(const TwinNode& a, const TwinNode& b) {
    if (a.reported_residual != b.reported_residual) return a.reported_residual < b.reported_residual;
    if (a.request_issued_at != b.request_issued_at) return a.request_issued_at < b.request_issued_at;
    return a.id < b.id;
}

TwinState make_twin(const SimulationState& physical, const ControllerConfig& config) {
    if (const auto report = validate_controller_config(config); !report.ok())
        throw ConfigError("invalid controller config: " + report.to_string());
    TwinState twin;
    twin.config = config;
    twin.clock = physical.clock;
    twin.window_opened_at = physical.clock;
    const auto reports = observe(physical);
    const std::size_t r = reports.size();
    twin.nodes.resize(r);
    for (std::size_t i = 0; i < r; ++i) {
        const auto& rep = reports[i];
        twin.nodes[i] = {rep.id, rep.position, rep.reported_residual, rep.alive, rep.pending_request,
                         rep.request_issued_at, rep.total_consumed};
    }
    twin.neighbors.resize(r);
    const double rc = physical.config.comm_range;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j)
            if (distance(twin.nodes[i].position, twin.nodes[j].position) <= rc) {
                twin.neighbors[i].push_back(static_cast<int>(j));
                twin.neighbors[j].push_back(static_cast<int>(i));
            }
    twin.estimators.resize(r);
    twin.scores.resize(r);
    twin.windows.resize(r);
    for (std::size_t i = 0; i < r; ++i) twin.windows[i].consumed_at_open = twin.nodes[i].total_consumed;
    twin.consecutive_flags.assign(r, 0);
    twin.banned.assign(r, 0);
    const auto& det = config.detector;
    twin.request_floor = det.request_rate_floor > 0.0
                             ? det.request_rate_floor
                             : detect::model_request_floor(physical.config, config.interval, det.request_window_ticks);
    if (det.chain_mode) twin.chain = detect::ReputationChain::sticky(det.chain_levels);
    twin.chain_rng.seed(physical.config.rng_seed ^ 0x5EED0C4A11ULL);
    return twin;
}

namespace {

void absorb_events(TwinState& twin, std::span<const Event> events) {
    const int r = static_cast<int>(twin.nodes.size());
    for (const auto& ev : events) {
        if (const auto* req = std::get_if<RequestEvent>(&ev.payload)) {
            if (req->node >= 0 && req->node < r) twin.windows[req->node].requests += 1;
        } else if (const auto* ch = std::get_if<ChargeEvent>(&ev.payload)) {
            if (ch->node >= 0 && ch->node < r) {
                twin.windows[ch->node].sent += ch->sent;
                twin.windows[ch->node].received += ch->received;
            }
        }
    }
}

void mirror(TwinState& twin, std::span<const NodeReport> reports) {
    for (const auto& rep : reports) {
        TwinNode& n = twin.nodes[rep.id];
        n.reported_residual = rep.reported_residual;
        n.alive = rep.alive;
        n.pending_request = rep.pending_request;
        n.request_issued_at = rep.request_issued_at;
        n.total_consumed = rep.total_consumed;
    }
}

bool has_live_neighbor(const TwinState& twin, int id) {
    return std::any_of(twin.neighbors[id].begin(), twin.neighbors[id].end(),
                       [&](int j) { return twin.nodes[j].alive; });
}

void close_window(TwinState& twin) {
    const auto& det = twin.config.detector;
    const detect::ReputationChain* chain = twin.chain ? &*twin.chain : nullptr;
    for (std::size_t i = 0; i < twin.nodes.size(); ++i) {
        TwinNode& n = twin.nodes[i];
        WindowAccumulator& acc = twin.windows[i];
        if (n.alive) {
            detect::WindowObservation obs;
            obs.requests = acc.requests;
            obs.consumption = n.total_consumed - acc.consumed_at_open;
            obs.efficiency = detect::charging_efficiency(acc.received, acc.sent);
            obs.witnessed = obs.efficiency.has_value() && has_live_neighbor(twin, n.id);
            twin.scores[i] =
                detect::score_window(twin.estimators[i], obs, det, twin.request_floor, chain, &twin.chain_rng);
        } else {
            twin.scores[i].flagged = false;
        }
        acc = WindowAccumulator{};
        acc.consumed_at_open = n.total_consumed;
    }
    twin.window_opened_at += twin.config.interval;
    twin.fresh = true;
}

void apply_snapshot(TwinState& twin, const TwinState::Pending& p) {
    absorb_events(twin, p.events);
    mirror(twin, p.reports);
    while (p.clock >= twin.window_opened_at + twin.config.interval - 1e-9) close_window(twin);
}

}  // namespace

void sync_twin(const SimulationState& physical, std::span<const Event> new_events, TwinState& twin) {
    const bool duplicate = new_events.empty() && !twin.backlog.empty() && twin.backlog.back().clock == physical.clock;
    if (!duplicate) {
        TwinState::Pending p;
        p.clock = physical.clock;
        p.reports = observe(physical);
        p.events.assign(new_events.begin(), new_events.end());
        twin.backlog.push_back(std::move(p));
    }
    const double visible = std::max(0.0, physical.clock - twin.config.sync_latency);
    while (!twin.backlog.empty() && twin.backlog.front().clock <= visible + 1e-9) {
        apply_snapshot(twin, twin.backlog.front());
        twin.backlog.pop_front();
    }
    twin.clock = std::max(twin.clock, visible);
}

QueueUpdate controller_tick(TwinState& twin, const Weights& weights, double threshold) {
    QueueUpdate update;
    update.issued_at = twin.clock;
    std::vector<char> flagged(twin.nodes.size(), 0);
    for (std::size_t i = 0; i < twin.nodes.size(); ++i) {
        auto& s = twin.scores[i];
        const bool scored = twin.nodes[i].alive && twin.estimators[i].warmed_up(twin.config.detector) &&
                            twin.estimators[i].windows_seen > twin.config.detector.warmup_windows;
        if (scored) {
            s.combined = detect::combined_score(s, weights);
            s.flagged = detect::detect(s.combined, threshold);
        } else {
            s.flagged = false;
        }
        if (twin.fresh) twin.consecutive_flags[i] = s.flagged ? twin.consecutive_flags[i] + 1 : 0;
        if (twin.config.sticky_after > 0 && twin.consecutive_flags[i] >= twin.config.sticky_after) twin.banned[i] = 1;
        if (s.flagged) {
            flagged[i] = 1;
            update.excluded.push_back({static_cast<int>(i), fmt::format("score {:.6f} > {:.6f}", s.combined, threshold)});
        } else if (twin.banned[i]) {
            flagged[i] = 1;
            update.excluded.push_back({static_cast<int>(i), "banned"});
        }
    }
    twin.fresh = false;

    std::vector<const TwinNode*> pending;
    for (const auto& n : twin.nodes)
        if (n.alive && n.pending_request && !flagged[n.id]) pending.push_back(&n);
    std::sort(pending.begin(), pending.end(), [](const TwinNode* a, const TwinNode* b) { return queue_before(*a, *b); });
    update.ordered.reserve(pending.size());
    for (const auto* n : pending) update.ordered.push_back(n->id);
    return update;
}

}  // namespace wrsn
