#include <cmath>

#include <gtest/gtest.h>

#include "netrate/io.hpp"
#include "netrate/simulator.hpp"
#include "oracles.hpp"

namespace netrate {
namespace {

TEST(SimulateCascade, ForcedDraw) {
    Network net(3);
    net.set_rate(0, 1, 0.5);
    const double u = std::exp(-1.0);
    const Cascade c = simulate_cascade(net.out_links(), TransmissionModel::exp(), 10, 0, [&](NodeId, NodeId) { return u; });
    EXPECT_EQ(c.time(0), 0.0);
    EXPECT_NEAR(c.time(1), 2.0, 1e-15);
    EXPECT_EQ(c.time(1), sample_delay(TransmissionModel::exp(), 0.5, u));
    EXPECT_FALSE(c.infected(2));
}

TEST(SimulateCascade, IsolatedRoot) {
    Network net(4);
    net.set_rate(1, 2, 1.0);
    Rng rng(1);
    const Cascade c = simulate_cascade(net, TransmissionModel::exp(), 10, 0, rng);
    EXPECT_EQ(c.infected_count(), 1u);
    EXPECT_TRUE(c.infected(0));
    EXPECT_THROW(simulate_cascade(net, TransmissionModel::exp(), 10, 4, rng), ParameterError);
}

TEST(SimulateCascade, LinePlusShortcut) {
    Network net(3);
    net.set_rate(0, 1, 1.0);
    net.set_rate(1, 2, 1.0);
    net.set_rate(0, 2, 0.3);
    for (std::uint64_t key = 0; key < 200; ++key) {
        const Cascade c = simulate_cascade(net.out_links(), TransmissionModel::exp(), 1e9, 0, KeyedDraws{key});
        const KeyedDraws d{key};
        const double d01 = sample_delay(TransmissionModel::exp(), 1.0, d(0, 1));
        const double d12 = sample_delay(TransmissionModel::exp(), 1.0, d(1, 2));
        const double d02 = sample_delay(TransmissionModel::exp(), 0.3, d(0, 2));
        EXPECT_EQ(c.time(1), d01);
        EXPECT_EQ(c.time(2), std::min(d01 + d12, d02));
    }
}

TEST(SimulateCascade, MatchesBruteForceOracle) {
    Rng rng(31);
    for (const auto& m : testing::all_models()) {
        for (int trial = 0; trial < 100; ++trial) {
            const Network net = testing::random_rates(10, rng, 0.25, 0.05, 1.5);
            const auto root = static_cast<NodeId>(rng.below(10));
            const std::uint64_t key = rng();
            const double T = rng.uniform(1, 8);
            const Cascade c = simulate_cascade(net.out_links(), m, T, root, KeyedDraws{key});
            EXPECT_EQ(c.times(), testing::earliest_arrival_bruteforce(net, m, T, root, key));
        }
    }
}

TEST(SimulateCascade, InfectionsHaveAnActiveParent) {
    Rng rng(32);
    for (int trial = 0; trial < 100; ++trial) {
        const Network net = testing::random_rates(12, rng, 0.2);
        const Cascade c = simulate_cascade(net, TransmissionModel::exp(), 5, static_cast<NodeId>(rng.below(12)), rng);
        const NodeId root = c.infection_order().front();
        for (NodeId i : c.infection_order()) {
            if (i == root) continue;
            bool found = false;
            for (NodeId j = 0; j < 12; ++j) found = found || (net.rate(j, i) > 0 && c.time(j) < c.time(i));
            EXPECT_TRUE(found) << "node " << i;
        }
    }
}

TEST(SimulateCascade, SingleEdgeDelayDistribution) {
    Network net(2);
    net.set_rate(0, 1, 0.5);
    const auto m = TransmissionModel::exp();
    const OutLinks out = net.out_links();
    Rng rng(2025);
    std::vector<double> d;
    for (int k = 0; k < 100000; ++k) {
        const Cascade c = simulate_cascade(out, m, 1e6, 0, KeyedDraws{rng()});
        d.push_back(c.time(1));
    }
    std::sort(d.begin(), d.end());
    double ks = 0;
    const double n = static_cast<double>(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) {
        const double cdf = 1 - std::exp(-0.5 * d[k]);
        ks = std::max({ks, std::abs(cdf - k / n), std::abs(cdf - (k + 1) / n)});
    }
    EXPECT_LT(ks, 0.01);
}

TEST(GenerateCascades, CountsAndFilter) {
    Rng rng(4);
    const Network net = testing::random_rates(20, rng, 0.1);
    SimConfig cfg;
    cfg.n_cascades = 300;
    cfg.horizon = 3;
    const CascadeSet cs = generate_cascades(net, cfg, 17);
    EXPECT_EQ(cs.size(), 300u);
    for (const auto& c : cs.cascades()) EXPECT_GE(c.infected_count(), 2u);
}

TEST(GenerateCascades, EmptyNetwork) {
    const Network net(5);
    SimConfig cfg;
    cfg.n_cascades = 10;
    cfg.min_infected = 1;
    const CascadeSet cs = generate_cascades(net, cfg, 1);
    EXPECT_EQ(cs.size(), 10u);
    for (const auto& c : cs.cascades()) EXPECT_EQ(c.infected_count(), 1u);
    cfg.min_infected = 2;
    cfg.max_attempts = 20;
    EXPECT_THROW(generate_cascades(net, cfg, 1), ParameterError);
}

TEST(GenerateCascades, DeterministicAndWorkerIndependent) {
    Rng rng(9);
    const Network net = testing::random_rates(30, rng, 0.08);
    SimConfig cfg;
    cfg.n_cascades = 500;
    auto render = [&](std::uint64_t seed, std::size_t workers) {
        SimConfig c = cfg;
        c.workers = workers;
        std::ostringstream out;
        write_cascades(generate_cascades(net, c, seed), out);
        return out.str();
    };
    const std::string base = render(5, 1);
    EXPECT_EQ(render(5, 1), base);
    EXPECT_EQ(render(5, 4), base);
    EXPECT_NE(render(6, 1), base);
}

}  // namespace
}  // namespace netrate
