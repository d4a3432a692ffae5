#include "wrsn/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "wrsn/simulation.hpp"

namespace wrsn {

ValidationReport validate_scenario(const ScenarioConfig& c) {
    ValidationReport r = validate_config(c.network);
    r.merge(validate_attack_spec(c.attack));
    r.merge(validate_controller_config(c.controller));
    if (c.calibrate_fpr && !(*c.calibrate_fpr >= 0.0 && *c.calibrate_fpr <= 1.0))
        r.add("calibrate_fpr must lie in [0,1]");
    if (c.calibration_seeds < 1) r.add("calibration_seeds must be >= 1");
    if (c.parallel < 1) r.add("parallel must be >= 1");
    return r;
}

void read_scenario(KeyValueFile& kv, ScenarioConfig& c) {
    read_network_config(kv, c.network);
    read_attack_spec(kv, c.attack);
    read_controller_config(kv, c.controller);
    kv.take_bool("controller", c.controller_enabled);
    double fpr = 0.0;
    if (kv.take_double("calibrate_fpr", fpr)) c.calibrate_fpr = fpr;
    kv.take_int("calibration_seeds", c.calibration_seeds);
    kv.take_u64("calibration_seed_offset", c.calibration_seed_offset);
    kv.take_int("parallel", c.parallel);
}

ScenarioConfig load_scenario(const std::filesystem::path& file) {
    KeyValueFile kv = KeyValueFile::load(file.string());
    ScenarioConfig c;
    read_scenario(kv, c);
    kv.require_consumed();
    return c;
}

SweepConfig load_sweep(const std::filesystem::path& file) {
    KeyValueFile kv = KeyValueFile::load(file.string());
    SweepConfig s;
    read_scenario(kv, s.base);
    std::string list;
    if (kv.take("sweep_node_counts", list)) {
        s.node_counts.clear();
        for (const auto& item : split_list(list)) {
            try {
                std::size_t used = 0;
                const int n = std::stoi(item, &used);
                if (used != item.size()) throw std::invalid_argument(item);
                s.node_counts.push_back(n);
            } catch (const std::exception&) {
                throw ConfigError(fmt::format("{}: bad node count '{}'", kv.origin(), item));
            }
        }
    }
    if (kv.take("sweep_tiers", list)) {
        s.tiers.clear();
        for (const auto& item : split_list(list)) s.tiers.push_back(parse_attack_tier(item));
    }
    if (kv.take("sweep_controller", list)) {
        s.controller.clear();
        for (const auto& item : split_list(list)) {
            if (item == "on") {
                s.controller.push_back(true);
            } else if (item == "off") {
                s.controller.push_back(false);
            } else {
                throw ConfigError(fmt::format("{}: sweep_controller expects on|off, got '{}'", kv.origin(), item));
            }
        }
    }
    kv.take_int("sweep_seeds", s.seeds);
    kv.require_consumed();
    if (s.node_counts.empty() || s.tiers.empty() || s.controller.empty() || s.seeds < 1)
        throw ConfigError(fmt::format("{}: sweep grid is empty", file.string()));
    return s;
}

namespace {

std::vector<QueueEntry> queue_entries(const TwinState& twin, const QueueUpdate& update) {
    std::vector<QueueEntry> out;
    out.reserve(update.ordered.size());
    for (int id : update.ordered) {
        const TwinNode& n = twin.nodes[id];
        out.push_back({id, n.reported_residual, n.request_issued_at});
    }
    return out;
}

}  // namespace

RunOutput run_simulation(const ScenarioConfig& config) {
    if (const auto report = validate_scenario(config); !report.ok())
        throw ConfigError("invalid scenario: " + report.to_string());

    RunOutput out;
    SimulationState state = initialize_network(config.network);
    state.flood_baseline_rate =
        config.attack.baseline_request_rate > 0.0 ? config.attack.baseline_request_rate : honest_request_rate(config.network);
    std::vector<std::string> warnings;
    out.truth = assign_malicious_nodes(state, config.attack, &warnings);

    TraceLog& trace = out.trace;
    trace.config = config.network;
    trace.node_count = config.network.node_count;
    for (auto& w : warnings) trace.events.push_back({0.0, WarningEvent{std::move(w)}});
    trace.steps.push_back(summarize(state));

    TwinState twin = make_twin(state, config.controller);
    const auto& det = config.controller.detector;
    const double interval = config.controller.interval;
    double next_tick = interval;
    std::vector<Event> unseen;
    std::optional<QueueUpdate> update;

    const long steps = config.network.step_count();
    trace.steps.reserve(static_cast<std::size_t>(steps) + 1);
    for (long k = 0; k < steps; ++k) {
        EventList events = advance_step(state, update ? &*update : nullptr);
        update.reset();
        unseen.insert(unseen.end(), events.begin(), events.end());
        std::move(events.begin(), events.end(), std::back_inserter(trace.events));
        trace.steps.push_back(summarize(state));

        if (state.clock < next_tick - 1e-9) continue;
        next_tick += interval;
        sync_twin(state, unseen, twin);
        unseen.clear();
        const bool scored_window = twin.fresh;
        QueueUpdate q = controller_tick(twin, det.weights, det.threshold);
        if (scored_window) {
            for (std::size_t i = 0; i < twin.nodes.size(); ++i) {
                const auto& est = twin.estimators[i];
                if (!twin.nodes[i].alive || est.windows_seen <= det.warmup_windows) continue;
                const auto& s = twin.scores[i];
                trace.scores.push_back({state.clock, static_cast<int>(i), s.request, s.energy, s.reputation,
                                        s.efficiency, s.combined, s.flagged});
            }
        }
        if (config.controller_enabled) {
            q.issued_at = state.clock;
            trace.queue_updates.push_back({state.clock, queue_entries(twin, q), q.excluded});
            update = std::move(q);
        }
    }
    trace.depot_energy_drawn = state.depot_energy_drawn;
    return out;
}

ScenarioResult evaluate(const ScenarioConfig& config, const RunOutput& run) {
    return summarize_run(run.trace, run.truth, config.attack.tier, config.controller_enabled);
}

void parallel_for(std::size_t count, int parallel, const std::function<void(std::size_t)>& task) {
    const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, parallel)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<ScenarioConfig> expand_sweep(const SweepConfig& sweep) {
    std::vector<ScenarioConfig> out;
    for (int n : sweep.node_counts)
        for (AttackTier tier : sweep.tiers)
            for (bool ctl : sweep.controller)
                for (int rep = 0; rep < sweep.seeds; ++rep) {
                    ScenarioConfig c = sweep.base;
                    c.network.node_count = n;
                    c.network.rng_seed = sweep.base.network.rng_seed + static_cast<std::uint64_t>(rep);
                    AttackSpec spec = default_attack_spec(tier);
                    spec.active_from = sweep.base.attack.active_from;
                    spec.baseline_request_rate = sweep.base.attack.baseline_request_rate;
                    c.attack = spec;
                    c.controller_enabled = ctl;
                    out.push_back(std::move(c));
                }
    return out;
}

std::vector<ScenarioResult> run_sweep(const SweepConfig& sweep, int parallel) {
    const auto scenarios = expand_sweep(sweep);
    std::vector<ScenarioResult> results(scenarios.size());
    parallel_for(scenarios.size(), parallel, [&](std::size_t i) {
        results[i] = evaluate(scenarios[i], run_simulation(scenarios[i]));
    });
    return results;
}

std::vector<detect::CalibrationSample> calibration_samples(const RunOutput& run) {
    const int r = run.trace.node_count;
    std::vector<double> best(r, -1.0);
    for (const auto& s : run.trace.scores) best[s.node] = std::max(best[s.node], s.combined);
    std::vector<detect::CalibrationSample> out;
    for (int i = 0; i < r; ++i)
        if (best[i] >= 0.0) out.push_back({best[i], run.truth.contains(i)});
    return out;
}

detect::CalibrationResult calibrate(const ScenarioConfig& config, double target_fpr, int parallel) {
    std::vector<std::vector<detect::CalibrationSample>> per_run(config.calibration_seeds);
    parallel_for(per_run.size(), parallel, [&](std::size_t i) {
        ScenarioConfig c = config;
        c.controller_enabled = false;
        c.network.rng_seed = config.network.rng_seed + config.calibration_seed_offset + i;
        per_run[i] = calibration_samples(run_simulation(c));
    });
    std::vector<detect::CalibrationSample> all;
    for (auto& v : per_run) all.insert(all.end(), v.begin(), v.end());
    return detect::calibrate_threshold(all, target_fpr);
}

}  // namespace wrsn
