#include "wrsn/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

namespace wrsn {

std::optional<double> energy_usage_efficiency(const TraceLog& trace) {
    double received = 0.0;
    for (const auto& ev : trace.events)
        if (const auto* ch = std::get_if<ChargeEvent>(&ev.payload)) received += ch->received;
    double drawn = 0.0;
    if (!trace.steps.empty())
        for (const auto& m : trace.steps.back().mcvs) drawn += m.travel_energy + m.energy_sent;
    if (!(drawn > 0.0)) return std::nullopt;
    return std::clamp(100.0 * received / drawn, 0.0, 100.0);
}

double survival_rate(const TraceLog& trace, std::optional<double> at) {
    if (trace.steps.empty() || trace.node_count <= 0) throw std::invalid_argument("survival_rate: empty trace");
    const StepSummary* chosen = &trace.steps.back();
    if (at) {
        if (*at > trace.steps.back().clock + 1e-9) throw std::invalid_argument("survival_rate: time past horizon");
        auto it = std::upper_bound(trace.steps.begin(), trace.steps.end(), *at + 1e-9,
                                   [](double t, const StepSummary& s) { return t < s.clock; });
        chosen = it == trace.steps.begin() ? &trace.steps.front() : &*(it - 1);
    }
    return 100.0 * chosen->alive / trace.node_count;
}

DetectionRates detection_rate(const std::vector<ScoreRecord>& flags, const GroundTruth& truth, int node_count) {
    std::vector<char> flagged(node_count, 0);
    for (const auto& f : flags)
        if (f.flagged && f.node >= 0 && f.node < node_count) flagged[f.node] = 1;
    long tp = 0;
    long fp = 0;
    for (int i = 0; i < node_count; ++i) {
        if (!flagged[i]) continue;
        (truth.contains(i) ? tp : fp) += 1;
    }
    const long malicious = static_cast<long>(truth.malicious.size());
    const long honest = node_count - malicious;
    DetectionRates r;
    if (malicious > 0) r.detection = 100.0 * tp / malicious;
    r.false_positive = honest > 0 ? 100.0 * fp / honest : 0.0;
    return r;
}

TravelReport travel_distance(const TraceLog& trace) {
    TravelReport report;
    if (trace.steps.empty()) return report;
    for (const auto& m : trace.steps.back().mcvs) report.total += m.odometer;

    std::map<int, double> last_refill;
    for (const auto& m : trace.steps.front().mcvs) last_refill[m.id] = m.odometer;
    auto step_at = [&](double clock) {
        auto it = std::lower_bound(trace.steps.begin(), trace.steps.end(), clock,
                                   [](const StepSummary& s, double t) { return s.clock < t; });
        return it == trace.steps.end() ? &trace.steps.back() : &*it;
    };
    for (const auto& ev : trace.events) {
        const auto* refill = std::get_if<RefillEvent>(&ev.payload);
        if (!refill) continue;
        const StepSummary* s = step_at(ev.clock);
        for (const auto& m : s->mcvs) {
            if (m.id != refill->mcv) continue;
            report.per_cycle.push_back(m.odometer - last_refill[m.id]);
            last_refill[m.id] = m.odometer;
        }
    }
    return report;
}

ScenarioResult summarize_run(const TraceLog& trace, const GroundTruth& truth, AttackTier tier, bool controller) {
    ScenarioResult r;
    r.node_count = trace.node_count;
    r.tier = tier;
    r.seed = trace.config.rng_seed;
    r.controller = controller;
    r.energy_usage_efficiency = energy_usage_efficiency(trace);
    r.survival_rate = survival_rate(trace);
    const auto rates = detection_rate(trace.scores, truth, trace.node_count);
    r.detection_rate = rates.detection;
    r.false_positive_rate = rates.false_positive;
    r.travel_distance = travel_distance(trace).total;
    r.attack_fraction = truth.fraction;
    r.trace_hash = trace_hash(trace);
    return r;
}

std::string format_metric(std::optional<double> value) {
    return value ? fmt::format("{:.17g}", *value) : std::string(kUndefined);
}

namespace {

auto sort_key(const ScenarioResult& r) { return std::tuple(r.node_count, static_cast<int>(r.tier), r.controller, r.seed); }

std::ofstream open_output(const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", file.string()));
    return out;
}

std::string series_name(AttackTier tier, bool controller) {
    return fmt::format("{}_{}", to_string(tier), controller ? "on" : "off");
}

void write_plot(const std::filesystem::path& file, const char* metric, const char* unit,
                const std::vector<ScenarioResult>& sorted, std::optional<double> (*value)(const ScenarioResult&)) {
    std::vector<std::pair<int, bool>> series;  // (tier, controller)
    std::vector<int> counts;
    for (const auto& r : sorted) {
        series.emplace_back(static_cast<int>(r.tier), r.controller);
        counts.push_back(r.node_count);
    }
    std::sort(series.begin(), series.end());
    series.erase(std::unique(series.begin(), series.end()), series.end());
    std::sort(counts.begin(), counts.end());
    counts.erase(std::unique(counts.begin(), counts.end()), counts.end());

    std::map<std::tuple<int, int, bool>, std::pair<double, int>> cells;
    for (const auto& r : sorted) {
        const auto v = value(r);
        auto& cell = cells[{r.node_count, static_cast<int>(r.tier), r.controller}];
        if (v) {
            cell.first += *v;
            cell.second += 1;
        }
    }

    auto out = open_output(file);
    out << fmt::format("# {} ({}), mean over seeds\n", metric, unit);
    out << "node_count";
    for (const auto& [tier, ctl] : series) out << ' ' << series_name(static_cast<AttackTier>(tier), ctl);
    out << '\n';
    for (int n : counts) {
        out << n;
        for (const auto& [tier, ctl] : series) {
            auto it = cells.find({n, tier, ctl});
            if (it == cells.end() || it->second.second == 0) {
                out << ' ' << kUndefined;
            } else {
                out << ' ' << fmt::format("{:.17g}", it->second.first / it->second.second);
            }
        }
        out << '\n';
    }
}

}  // namespace

void write_results_csv(const std::filesystem::path& file, const std::vector<ScenarioResult>& results) {
    auto out = open_output(file);
    out << "node_count,tier,seed,controller,attack_fraction,energy_usage_efficiency,survival_rate,detection_rate,"
           "false_positive_rate,travel_distance,trace_hash\n";
    for (const auto& r : results) {
        out << fmt::format("{},{},{},{},{:.17g},{},{:.17g},{},{:.17g},{:.17g},{}\n", r.node_count, to_string(r.tier),
                           r.seed, r.controller ? "on" : "off", r.attack_fraction,
                           format_metric(r.energy_usage_efficiency), r.survival_rate, format_metric(r.detection_rate),
                           r.false_positive_rate, r.travel_distance, r.trace_hash);
    }
    if (!out) throw std::runtime_error(fmt::format("write failed for '{}'", file.string()));
}

void export_results(const std::vector<ScenarioResult>& results, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error(fmt::format("cannot create '{}': {}", out_dir.string(), ec.message()));
    std::vector<ScenarioResult> sorted = results;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const ScenarioResult& a, const ScenarioResult& b) { return sort_key(a) < sort_key(b); });
    write_results_csv(out_dir / "results.csv", sorted);
    write_plot(out_dir / "efficiency.dat", "energy_usage_efficiency", "percent", sorted,
               [](const ScenarioResult& r) { return r.energy_usage_efficiency; });
    write_plot(out_dir / "survival.dat", "survival_rate", "percent", sorted,
               [](const ScenarioResult& r) -> std::optional<double> { return r.survival_rate; });
    write_plot(out_dir / "detection.dat", "detection_rate", "percent", sorted,
               [](const ScenarioResult& r) { return r.detection_rate; });
    write_plot(out_dir / "travel.dat", "travel_distance", "meters", sorted,
               [](const ScenarioResult& r) -> std::optional<double> { return r.travel_distance; });
}

}  // namespace wrsn
