#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "wrsn/config.hpp"

using namespace wrsn;

TEST(Config, EvaluationDefaultsAreAdmissible) {
    NetworkConfig c;
    c.node_count = 100;
    c.comm_range = 50;
    c.sense_range = 25;
    c.node_capacity = 0.5;
    c.mcv_capacity = 10'000;
    c.charging_rate = 0.05;
    c.mcv_speed = 5;
    c.travel_cost = 5;
    const auto report = validate_config(c);
    EXPECT_TRUE(report.ok()) << report.to_string();
}

TEST(Config, EqualRangesGiveExactlyOneViolation) {
    NetworkConfig c;
    c.sense_range = c.comm_range;
    const auto report = validate_config(c);
    ASSERT_EQ(report.violations.size(), 1u);
    EXPECT_EQ(report.violations[0], "comm_range must exceed sense_range");
}

TEST(Config, WeightsSummingBelowOneAreRejected) {
    Weights w{0.3, 0.2, 0.2, 0.2};
    EXPECT_EQ(validate_weights(w).violations.size(), 1u);
    EXPECT_TRUE(validate_weights(Weights{}).ok());
    EXPECT_FALSE(validate_weights(Weights{1.1, -0.1, 0.0, 0.0}).ok());
}

TEST(Config, CountBounds) {
    NetworkConfig c;
    c.node_count = 0;
    EXPECT_FALSE(validate_config(c).ok());
    c.node_count = 100'001;
    EXPECT_FALSE(validate_config(c).ok());
    c.node_count = 5;
    c.mcv_count = 6;
    EXPECT_FALSE(validate_config(c).ok());
}

TEST(Config, CircumradiusBound) {
    NetworkConfig c;
    c.circumradius = c.area_side * std::sqrt(2.0) * 1.01;
    EXPECT_FALSE(validate_config(c).ok());
    c.circumradius = 0.0;
    EXPECT_DOUBLE_EQ(c.effective_circumradius(), c.area_side * std::sqrt(2.0));
}

TEST(Config, FractionsMustBeOpenUnit) {
    NetworkConfig c;
    c.energy_threshold_fraction = 1.0;
    EXPECT_FALSE(validate_config(c).ok());
    c.energy_threshold_fraction = 0.3;
    c.mcv_min_energy_fraction = 0.0;
    EXPECT_FALSE(validate_config(c).ok());
}

TEST(Distance, PythagoreanTriple) { EXPECT_DOUBLE_EQ(distance({0, 0}, {3, 4}), 5.0); }

TEST(Distance, Identity) { EXPECT_EQ(distance({7.5, -2}, {7.5, -2}), 0.0); }

TEST(Distance, UnitDiagonal) {
    const long double root2 = 1.41421356237309504880168872420969808L;
    EXPECT_NEAR(distance({0, 0}, {1, 1}), static_cast<double>(root2), 1e-16);
}

TEST(Distance, SymmetricAndTriangleInequality) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int i = 0; i < 10'000; ++i) {
        const Point a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
        EXPECT_EQ(distance(a, b), distance(b, a));
        EXPECT_LE(distance(a, c), distance(a, b) + distance(b, c) + 1e-9);
    }
}

TEST(KeyValueFile, ParsesCommentsAndTypes) {
    auto kv = KeyValueFile::parse("# header\nnode_count = 42\narea_side = 250.5  # m\n\nflag = on\n");
    int n = 0;
    double side = 0;
    bool flag = false;
    EXPECT_TRUE(kv.take_int("node_count", n));
    EXPECT_TRUE(kv.take_double("area_side", side));
    EXPECT_TRUE(kv.take_bool("flag", flag));
    EXPECT_EQ(n, 42);
    EXPECT_DOUBLE_EQ(side, 250.5);
    EXPECT_TRUE(flag);
    EXPECT_NO_THROW(kv.require_consumed());
}

TEST(KeyValueFile, DuplicateKeyIsAnError) {
    EXPECT_THROW(KeyValueFile::parse("a = 1\na = 2\n"), ConfigError);
}

TEST(KeyValueFile, UnknownKeysAreReported) {
    auto kv = KeyValueFile::parse("node_count = 3\nbogus = 1\n");
    NetworkConfig c;
    read_network_config(kv, c);
    try {
        kv.require_consumed();
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
    }
}

TEST(KeyValueFile, BadNumberIsAnError) {
    auto kv = KeyValueFile::parse("node_count = 3x\n");
    int n = 0;
    EXPECT_THROW(kv.take_int("node_count", n), ConfigError);
}

TEST(KeyValueFile, MissingFileNamesPath) {
    try {
        KeyValueFile::load("/nonexistent/scenario.cfg");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent/scenario.cfg"), std::string::npos);
    }
}

TEST(KeyValueFile, SplitList) {
    const auto items = split_list("100, 200,300 ");
    ASSERT_EQ(items.size(), 3u);
    EXPECT_EQ(items[0], "100");
    EXPECT_EQ(items[2], "300");
}
