// Drives the wrsn_sim executable end to end.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int status = -1;
    std::string output;
};

Outcome run_cli(const std::string& args) {
    const std::string cmd = std::string(WRSN_SIM_PATH) + " " + args + " 2>&1";
    Outcome o;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return o;
    char buf[512];
    while (fgets(buf, sizeof buf, pipe)) o.output += buf;
    const int raw = pclose(pipe);
    o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return o;
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("wrsn_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kSmall = "node_count = 40\nmcv_count = 2\nhorizon = 1500\nattack_tier = MAI\n";

}  // namespace

TEST(Cli, ValidConfigWritesTraceAndResult) {
    const auto dir = scratch("ok");
    const auto cfg = write(dir / "s.cfg", kSmall);
    const auto o = run_cli("--config " + cfg.string() + " --out " + (dir / "out").string());
    EXPECT_EQ(o.status, 0) << o.output;
    EXPECT_TRUE(fs::exists(dir / "out" / "trace.log"));
    EXPECT_TRUE(fs::exists(dir / "out" / "result.csv"));
    EXPECT_NE(o.output.find("hash="), std::string::npos);
}

TEST(Cli, MissingConfigNamesThePath) {
    const auto o = run_cli("--config /nonexistent/run.cfg");
    EXPECT_NE(o.status, 0);
    EXPECT_NE(o.output.find("/nonexistent/run.cfg"), std::string::npos);
}

TEST(Cli, NoInputIsUsageError) { EXPECT_EQ(run_cli("").status, 2); }

TEST(Cli, BadFlagValueIsRejected) {
    const auto dir = scratch("bad");
    const auto cfg = write(dir / "s.cfg", kSmall);
    EXPECT_NE(run_cli("--config " + cfg.string() + " --controller maybe").status, 0);
}

TEST(Cli, FlagsAndFileKeysAreEquivalent) {
    const auto dir = scratch("equiv");
    const auto a = write(dir / "a.cfg", kSmall);
    const auto b = write(dir / "b.cfg", std::string(kSmall) + "rng_seed = 9\ncontroller = off\nscore_mode = literal\n");
    const auto oa = run_cli("--config " + a.string() + " --seed 9 --controller off --score-mode literal --out " +
                            (dir / "a").string());
    const auto ob = run_cli("--config " + b.string() + " --out " + (dir / "b").string());
    ASSERT_EQ(oa.status, 0) << oa.output;
    ASSERT_EQ(ob.status, 0) << ob.output;
    EXPECT_EQ(slurp(dir / "a" / "trace.log"), slurp(dir / "b" / "trace.log"));
    EXPECT_EQ(oa.output, ob.output);
}

TEST(Cli, CalibrationWithoutSamplesFails) {
    const auto dir = scratch("calib");
    const auto cfg = write(dir / "s.cfg", "node_count = 20\nmcv_count = 1\nhorizon = 100\ncalibration_seeds = 1\n");
    const auto o = run_cli("--config " + cfg.string() + " --calibrate-fpr 0.05");
    EXPECT_EQ(o.status, 1);
    EXPECT_NE(o.output.find("error:"), std::string::npos);
}

TEST(Cli, SweepWritesPlotFiles) {
    const auto dir = scratch("sweep");
    const auto cfg = write(dir / "sweep.cfg",
                           "horizon = 1500\nmcv_count = 2\nsweep_node_counts = 30, 60\nsweep_tiers = LAI\n"
                           "sweep_controller = on, off\nsweep_seeds = 1\n");
    const auto o = run_cli("--sweep " + cfg.string() + " --parallel 2 --out " + (dir / "out").string());
    ASSERT_EQ(o.status, 0) << o.output;
    for (const char* f : {"results.csv", "efficiency.dat", "survival.dat", "detection.dat", "travel.dat"})
        EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
}
