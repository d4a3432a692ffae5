// Scenario runner, sweep driver and threshold calibration front-end.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "wrsn/scenario.hpp"

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> controller;
    std::optional<std::string> score_mode;
    std::optional<double> calibrate_fpr;
    std::optional<int> parallel;
};

void apply(const Overrides& o, wrsn::ScenarioConfig& c) {
    if (o.seed) c.network.rng_seed = *o.seed;
    if (o.controller) c.controller_enabled = *o.controller == "on";
    if (o.score_mode) c.controller.detector.mode = wrsn::detect::parse_score_mode(*o.score_mode);
    if (o.calibrate_fpr) c.calibrate_fpr = *o.calibrate_fpr;
    if (o.parallel) c.parallel = *o.parallel;
}

int run_single(wrsn::ScenarioConfig config, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto run = wrsn::run_simulation(config);
    {
        std::ofstream trace(out_dir / "trace.log", std::ios::binary | std::ios::trunc);
        if (!trace) throw std::runtime_error(fmt::format("cannot write '{}'", (out_dir / "trace.log").string()));
        wrsn::write_trace(trace, run.trace);
    }
    const auto result = wrsn::evaluate(config, run);
    wrsn::write_results_csv(out_dir / "result.csv", {result});
    fmt::print("efficiency={} survival={:.4g} detection={} fpr={:.4g} travel={:.6g} hash={}\n",
               wrsn::format_metric(result.energy_usage_efficiency), result.survival_rate,
               wrsn::format_metric(result.detection_rate), result.false_positive_rate, result.travel_distance,
               result.trace_hash);
    return 0;
}

int run_calibration(const wrsn::ScenarioConfig& config, double target) {
    const auto r = wrsn::calibrate(config, target, config.parallel);
    fmt::print("threshold={:.3f} detection_rate={:.4f} false_positive_rate={:.4f}\n", r.threshold, r.detection_rate,
               r.false_positive_rate);
    if (r.warning) fmt::print(stderr, "warning: {}\n", *r.warning);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wireless rechargeable sensor network simulator under denial-of-charging attack"};
    std::string config_path;
    std::string sweep_path;
    std::string out_dir = "out";
    Overrides o;
    app.add_option("--config", config_path, "scenario file (key = value)");
    app.add_option("--sweep", sweep_path, "sweep file: scenario keys plus sweep_* grid keys");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", o.seed, "base rng seed (rng_seed)");
    app.add_option("--parallel", o.parallel, "scenario threads (parallel)")->check(CLI::PositiveNumber);
    app.add_option("--controller", o.controller, "controller updates reach the chargers (controller)")
        ->check(CLI::IsMember({"on", "off"}));
    app.add_option("--score-mode", o.score_mode, "scorer variant (score_mode)")
        ->check(CLI::IsMember({"literal", "tail"}));
    app.add_option("--calibrate-fpr", o.calibrate_fpr, "calibrate the threshold for this false-positive rate")
        ->check(CLI::Range(0.0, 1.0));
    CLI11_PARSE(app, argc, argv);

    try {
        if (!sweep_path.empty()) {
            auto sweep = wrsn::load_sweep(sweep_path);
            apply(o, sweep.base);
            if (sweep.base.calibrate_fpr) {
                const auto r = wrsn::calibrate(sweep.base, *sweep.base.calibrate_fpr, sweep.base.parallel);
                sweep.base.controller.detector.threshold = std::max(r.threshold, 1e-3);
                fmt::print("threshold={:.3f}\n", r.threshold);
            }
            const auto results = wrsn::run_sweep(sweep, sweep.base.parallel);
            wrsn::export_results(results, out_dir);
            fmt::print("{} scenarios written to {}\n", results.size(), out_dir);
            return 0;
        }
        if (config_path.empty()) {
            fmt::print(stderr, "error: one of --config or --sweep is required\n");
            return 2;
        }
        auto config = wrsn::load_scenario(config_path);
        apply(o, config);
        if (config.calibrate_fpr) return run_calibration(config, *config.calibrate_fpr);
        return run_single(config, out_dir);
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
}
