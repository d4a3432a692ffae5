#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "wrsn/attack.hpp"
#include "wrsn/scenario.hpp"
#include "wrsn/simulation.hpp"

using namespace wrsn;

TEST(McvPlacement, MatchesLongDoubleTrig) {
    const long double pi = 3.14159265358979323846264338327950288L;
    for (int m = 1; m <= 12; ++m)
        for (int j = 1; j <= m; ++j) {
            const double cc = 141.4213562373095;
            const Point p = mcv_initial_position(j, m, cc);
            const long double angle = pi * (2.0L * j - 1.0L) / m;
            EXPECT_NEAR(p.x, static_cast<double>(cc / 2.0L * cosl(angle)), 1e-12);
            EXPECT_NEAR(p.y, static_cast<double>(cc / 2.0L * sinl(angle)), 1e-12);
        }
}

TEST(McvPlacement, RejectsBadIndex) {
    EXPECT_THROW(mcv_initial_position(0, 3, 10.0), std::out_of_range);
    EXPECT_THROW(mcv_initial_position(4, 3, 10.0), std::out_of_range);
    EXPECT_THROW(mcv_initial_position(1, 3, 0.0), std::invalid_argument);
}

TEST(Initialize, EveryBatteryFull) {
    NetworkConfig c;
    c.node_count = 250;
    const auto s = initialize_network(c);
    ASSERT_EQ(s.nodes.size(), 250u);
    for (const auto& n : s.nodes) {
        EXPECT_EQ(n.residual, c.node_capacity);
        EXPECT_GE(n.position.x, 0.0);
        EXPECT_LE(n.position.x, c.area_side);
    }
    for (const auto& m : s.mcvs) EXPECT_EQ(m.residual, c.mcv_capacity);
}

TEST(Initialize, InvalidConfigThrows) {
    NetworkConfig c;
    c.comm_range = 10;
    EXPECT_THROW(initialize_network(c), ConfigError);
}

TEST(Drain, LinearArithmetic) {
    NetworkConfig c;
    c.node_count = 1;
    c.mcv_count = 1;
    c.node_consumption_rate = 1e-3;
    c.roaming_pause = 1e9;
    c.energy_threshold_fraction = 0.01;
    auto s = initialize_network(c);
    for (int k = 0; k < 100; ++k) advance_step(s);
    EXPECT_NEAR(s.nodes[0].residual, 0.4, 1e-12);
}

TEST(McvMove, PartialStepCostsTravelEnergy) {
    NetworkConfig c;
    Mcv m;
    m.position = {0, 0};
    m.residual = 1000;
    const auto r = mcv_move(m, {100, 0}, 1.0, c);
    EXPECT_DOUBLE_EQ(r.moved, 5.0);
    EXPECT_FALSE(r.arrived);
    EXPECT_DOUBLE_EQ(m.residual, 975.0);
    EXPECT_DOUBLE_EQ(m.odometer, 5.0);
}

TEST(McvMove, ShortHopArrivesExactly) {
    NetworkConfig c;
    Mcv m;
    m.position = {10, 10};
    m.residual = 1000;
    const auto r = mcv_move(m, {13, 10}, 1.0, c);
    EXPECT_DOUBLE_EQ(r.moved, 3.0);
    EXPECT_TRUE(r.arrived);
    EXPECT_EQ(m.position, (Point{13, 10}));
    EXPECT_DOUBLE_EQ(m.residual, 985.0);
}

namespace {

struct ChargeCase {
    Mcv mcv;
    SensorNode node;
};

ChargeCase charge_case(double residual) {
    ChargeCase c;
    c.mcv.residual = 10'000;
    c.node.id = 0;
    c.node.capacity = 0.5;
    c.node.residual = residual;
    return c;
}

}  // namespace

TEST(ChargeTransfer, HonestRateTimesStep) {
    NetworkConfig cfg;
    auto c = charge_case(0.40);
    const auto t = charge_transfer(c.mcv, c.node, 10.0, 1.0, cfg);
    EXPECT_DOUBLE_EQ(t.sent, 0.05);
    EXPECT_DOUBLE_EQ(t.received, 0.05);
    EXPECT_NEAR(c.node.residual, 0.45, 1e-15);
}

TEST(ChargeTransfer, HonestClampedToDeficit) {
    NetworkConfig cfg;
    auto c = charge_case(0.48);
    const auto t = charge_transfer(c.mcv, c.node, 10.0, 1.0, cfg);
    EXPECT_NEAR(t.received, 0.02, 1e-15);
    EXPECT_EQ(t.sent, t.received);
    EXPECT_EQ(c.node.residual, 0.5);
}

TEST(ChargeTransfer, DisruptionHalvesDelivery) {
    NetworkConfig cfg;
    auto c = charge_case(0.10);
    c.node.attack = AttackProfile{0, 1.0, 1.0, 0.5, 0.0};
    const auto t = charge_transfer(c.mcv, c.node, 10.0, 1.0, cfg);
    EXPECT_DOUBLE_EQ(t.sent, 0.05);
    EXPECT_DOUBLE_EQ(t.received, 0.025);
    EXPECT_DOUBLE_EQ(c.mcv.residual, 10'000 - 0.05);
}

TEST(ChargeTransfer, DeadNodeTakesNothing) {
    NetworkConfig cfg;
    auto c = charge_case(0.0);
    c.node.alive = false;
    const auto t = charge_transfer(c.mcv, c.node, 10.0, 1.0, cfg);
    EXPECT_EQ(t.sent, 0.0);
    EXPECT_EQ(c.mcv.residual, 10'000);
}

// Two nodes, one charger, ten steps, every value worked out by hand:
// node 0 at (60,50) starts at 0.149 J (just under E_th = 0.15), node 1 full
// at (50,80), the charger parked on the depot (50,50) with roaming disabled.
TEST(HandFixture, TwoNodesOneChargerTenSteps) {
    NetworkConfig c;
    c.node_count = 2;
    c.mcv_count = 1;
    c.roaming_pause = 1e9;
    auto s = initialize_network(c);
    s.nodes[0].position = {60, 50};
    s.nodes[0].residual = 0.149;
    s.nodes[1].position = {50, 80};
    s.mcvs[0].position = {50, 50};

    struct Row {
        double node0, node1, mcv_x, mcv_energy;
        McvMode mode;
    };
    const Row expected[10] = {
        {0.1489, 0.4999, 55, 9975, McvMode::Dispatched},    {0.1488, 0.4998, 60, 9950, McvMode::Charging},
        {0.1987, 0.4997, 60, 9949.95, McvMode::Charging},   {0.2486, 0.4996, 60, 9949.90, McvMode::Charging},
        {0.2985, 0.4995, 60, 9949.85, McvMode::Charging},   {0.3484, 0.4994, 60, 9949.80, McvMode::Charging},
        {0.3983, 0.4993, 60, 9949.75, McvMode::Charging},   {0.4482, 0.4992, 60, 9949.70, McvMode::Charging},
        {0.4981, 0.4991, 60, 9949.65, McvMode::Charging},   {0.5, 0.4990, 60, 9949.648, McvMode::Idle},
    };
    std::vector<EventList> log;
    for (const auto& row : expected) {
        log.push_back(advance_step(s));
        SCOPED_TRACE(s.step);
        EXPECT_NEAR(s.nodes[0].residual, row.node0, 1e-12);
        EXPECT_NEAR(s.nodes[1].residual, row.node1, 1e-12);
        EXPECT_NEAR(s.mcvs[0].position.x, row.mcv_x, 1e-12);
        EXPECT_NEAR(s.mcvs[0].position.y, 50.0, 1e-12);
        EXPECT_NEAR(s.mcvs[0].residual, row.mcv_energy, 1e-9);
        EXPECT_EQ(s.mcvs[0].mode, row.mode);
    }
    ASSERT_EQ(log[0].size(), 2u);
    EXPECT_TRUE(std::holds_alternative<RequestEvent>(log[0][0].payload));
    EXPECT_NEAR(std::get<RequestEvent>(log[0][0].payload).reported_residual, 0.1489, 1e-12);
    EXPECT_TRUE(std::holds_alternative<DispatchEvent>(log[0][1].payload));
    ASSERT_EQ(log[1].size(), 1u);
    EXPECT_TRUE(std::holds_alternative<ArrivalEvent>(log[1][0].payload));
    for (int k = 2; k < 9; ++k) {
        ASSERT_EQ(log[k].size(), 1u);
        EXPECT_NEAR(std::get<ChargeEvent>(log[k][0].payload).sent, 0.05, 1e-15);
    }
    ASSERT_EQ(log[9].size(), 2u);
    EXPECT_NEAR(std::get<ChargeEvent>(log[9][0].payload).sent, 0.002, 1e-12);
    EXPECT_EQ(std::get<SessionEndEvent>(log[9][1].payload).reason, SessionEnd::NodeFull);
    EXPECT_FALSE(s.nodes[0].pending_request);
    EXPECT_NEAR(s.mcvs[0].odometer, 10.0, 1e-12);
}

TEST(Simulation, HorizonZeroKeepsOnlyInitialSnapshot) {
    ScenarioConfig c;
    c.network.horizon = 0;
    const auto run = run_simulation(c);
    EXPECT_EQ(run.trace.steps.size(), 1u);
    EXPECT_EQ(run.trace.steps[0].clock, 0.0);
    EXPECT_TRUE(run.trace.events.empty());
}

TEST(Simulation, NoDeathBeforeFirstPossibleStarvation) {
    // Nobody can die before capacity / drain = 5000 s whatever the queue does.
    ScenarioConfig c;
    c.network.node_count = 100;
    c.network.horizon = 4999;
    const auto run = run_simulation(c);
    EXPECT_EQ(run.trace.steps.back().alive, 100);
}

TEST(Simulation, EnergyLedgerBalancesAndResidualsStayInRange) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        NetworkConfig c;
        c.node_count = 120;
        c.mcv_count = 3;
        c.rng_seed = seed;
        auto s = initialize_network(c);
        s.flood_baseline_rate = honest_request_rate(c);
        assign_malicious_nodes(s, default_attack_spec(AttackTier::HAI));
        for (int k = 0; k < 6000; ++k) {
            advance_step(s);
            for (const auto& n : s.nodes) {
                ASSERT_GE(n.residual, 0.0);
                ASSERT_LE(n.residual, n.capacity);
            }
        }
        double spent = 0.0;
        for (const auto& m : s.mcvs) spent += m.travel_energy_total + m.energy_sent_total + (m.residual - m.initial_residual);
        EXPECT_NEAR(s.depot_energy_drawn, spent, 1e-9 * std::max(1.0, spent));
        for (const auto& n : s.nodes)
            EXPECT_NEAR(n.residual, n.capacity - n.total_drained + n.total_received, 1e-12);
    }
}

TEST(Simulation, OdometerEqualsSumOfStepDistances) {
    ScenarioConfig c;
    c.network.node_count = 80;
    c.network.horizon = 4000;
    const auto run = run_simulation(c);
    const auto& steps = run.trace.steps;
    for (std::size_t j = 0; j < steps[0].mcvs.size(); ++j) {
        long double total = 0.0L;
        for (std::size_t k = 1; k < steps.size(); ++k)
            total += distance(steps[k - 1].mcvs[j].position, steps[k].mcvs[j].position);
        const double odo = steps.back().mcvs[j].odometer;
        EXPECT_NEAR(odo, static_cast<double>(total), 1e-9 * std::max(1.0, odo));
    }
}

TEST(Simulation, RandomAdmissibleConfigsRunCleanly) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        NetworkConfig c;
        c.area_side = 10 + 490 * u(rng);
        c.node_count = 1 + static_cast<int>(150 * u(rng));
        c.mcv_count = 1 + static_cast<int>(u(rng) * std::min(8, c.node_count - 1 + 1));
        c.mcv_count = std::min(c.mcv_count, c.node_count);
        c.sense_range = 1 + 40 * u(rng);
        c.comm_range = c.sense_range + 1 + 60 * u(rng);
        c.node_capacity = 0.05 + u(rng);
        c.energy_threshold_fraction = 0.05 + 0.9 * u(rng);
        c.node_consumption_rate = 1e-5 + 1e-2 * u(rng);
        c.mcv_capacity = 100 + 2e4 * u(rng);
        c.mcv_min_energy_fraction = 0.01 + 0.5 * u(rng);
        c.charging_rate = 0.001 + 0.5 * u(rng);
        c.mcv_speed = 0.5 + 10 * u(rng);
        c.travel_cost = 0.1 + 10 * u(rng);
        c.roaming_pause = 50 * u(rng);
        c.rng_seed = trial;
        ASSERT_TRUE(validate_config(c).ok()) << validate_config(c).to_string();
        auto s = initialize_network(c);
        for (int k = 0; k < 100; ++k) {
            ASSERT_NO_THROW(advance_step(s));
            for (const auto& n : s.nodes) {
                ASSERT_GE(n.residual, 0.0);
                ASSERT_LE(n.residual, n.capacity);
            }
        }
    }
}

TEST(Simulation, SameSeedSameTraceHash) {
    ScenarioConfig c;
    c.network.node_count = 150;
    c.network.horizon = 5000;
    c.attack = default_attack_spec(AttackTier::MAI);
    const auto a = trace_hash(run_simulation(c).trace);
    const auto b = trace_hash(run_simulation(c).trace);
    EXPECT_EQ(a, b);
    c.network.rng_seed += 1;
    EXPECT_NE(a, trace_hash(run_simulation(c).trace));
}

TEST(Simulation, ForgedResidualIsWhatObserversSee) {
    NetworkConfig c;
    c.node_count = 3;
    c.mcv_count = 1;
    auto s = initialize_network(c);
    s.nodes[1].forged_residual = 0.1;
    const auto reports = observe(s);
    EXPECT_EQ(reports[1].reported_residual, 0.1);
    EXPECT_EQ(s.nodes[1].residual, 0.5);
}
