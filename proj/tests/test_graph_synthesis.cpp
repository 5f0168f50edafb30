#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "netrate/graph_synthesis.hpp"
#include "netrate/io.hpp"

namespace netrate {
namespace {

bool has_self_loop(const EdgeList& edges) {
    return std::any_of(edges.begin(), edges.end(), [](const Edge& e) { return e.src == e.dst; });
}

bool has_duplicates(EdgeList edges) {
    std::sort(edges.begin(), edges.end());
    return std::adjacent_find(edges.begin(), edges.end()) != edges.end();
}

TEST(Kronecker, PowerEntries) {
    const auto seed = KroneckerSeed::hierarchical(2);
    EXPECT_NEAR(seed.probability(0, 3), 0.01, 1e-15);
    EXPECT_NEAR(seed.probability(0, 0), 0.81, 1e-15);
    EXPECT_NEAR(seed.probability(1, 2), 0.01, 1e-15);
    EXPECT_NEAR(seed.probability(0, 1), 0.09, 1e-15);
}

TEST(Kronecker, SeedOfOnes) {
    Rng rng(1);
    const KroneckerSeed ones{{{{1, 1}, {1, 1}}}, 1};
    auto edges = kronecker_graph(ones, 2, rng);
    std::sort(edges.begin(), edges.end());
    EXPECT_EQ(edges, (EdgeList{{0, 1}, {1, 0}}));
}

TEST(Kronecker, PaperScaleEdgeCount) {
    Rng rng(99);
    const auto edges = kronecker_graph(KroneckerSeed::random(10), 2048, rng);
    EXPECT_GE(edges.size(), 1900u);
    EXPECT_LE(edges.size(), 2200u);
    EXPECT_FALSE(has_self_loop(edges));
    EXPECT_FALSE(has_duplicates(edges));
}

TEST(Kronecker, MeanEdgeCountNearTarget) {
    for (const auto& seed : {KroneckerSeed::random(7), KroneckerSeed::hierarchical(7), KroneckerSeed::core_periphery(7)}) {
        double total = 0;
        for (int run = 0; run < 20; ++run) {
            Rng rng(1000 + run);
            const auto edges = kronecker_graph(seed, 256, rng);
            EXPECT_FALSE(has_self_loop(edges));
            total += static_cast<double>(edges.size());
        }
        EXPECT_NEAR(total / 20, 256.0, 25.6);
    }
}

TEST(Kronecker, Errors) {
    Rng rng(1);
    EXPECT_THROW(kronecker_graph(KroneckerSeed::random(2), 13, rng), ParameterError);
    // Mass concentrated on the diagonal cannot reach a dense target.
    const KroneckerSeed diag{{{{1, 0}, {0, 1}}}, 3};
    EXPECT_THROW(kronecker_graph(diag, 10, rng), ParameterError);
    EXPECT_THROW(kronecker_graph(KroneckerSeed{{{{1.5, 0}, {0, 1}}}, 2}, 1, rng), ParameterError);
    EXPECT_TRUE(kronecker_graph(KroneckerSeed::random(3), 0, rng).empty());
}

TEST(ForestFire, TwoNodes) {
    Rng rng(4);
    EXPECT_EQ(forest_fire_graph(2, 0.35, 0.32, rng), (EdgeList{{1, 0}}));
}

TEST(ForestFire, NoBurningIsATree) {
    Rng rng(4);
    const auto edges = forest_fire_graph(300, 0, 0, rng);
    EXPECT_EQ(edges.size(), 299u);
    for (const auto& e : edges) EXPECT_LT(e.dst, e.src);
}

TEST(ForestFire, DefaultDensity) {
    const NetworkSpec defaults;
    double ratio = 0;
    for (int run = 0; run < 5; ++run) {
        Rng rng(77 + run);
        const auto edges = forest_fire_graph(1024, defaults.p_forward, defaults.p_backward, rng);
        EXPECT_FALSE(has_self_loop(edges));
        EXPECT_FALSE(has_duplicates(edges));
        ratio += static_cast<double>(edges.size()) / 1024 / 5;
    }
    EXPECT_NEAR(ratio, 2.4, 0.5);
}

TEST(ForestFire, DensityGrowsWithBurning) {
    double last = 0;
    for (double pb : {0.0, 0.1, 0.2, 0.3}) {
        Rng rng(5);
        const double ratio = static_cast<double>(forest_fire_graph(1024, 0.35, pb, rng).size()) / 1024;
        EXPECT_GT(ratio, last);
        last = ratio;
    }
}

TEST(ForestFire, Errors) {
    Rng rng(1);
    EXPECT_THROW(forest_fire_graph(1, 0.3, 0.3, rng), ParameterError);
    EXPECT_THROW(forest_fire_graph(10, 1.0, 0.3, rng), ParameterError);
    EXPECT_THROW(forest_fire_graph(10, 0.3, -0.1, rng), ParameterError);
}

TEST(AssignRates, UniformMean) {
    Rng topo(5), rates(6);
    const auto edges = kronecker_graph(KroneckerSeed::random(10), 2048, topo);
    const Network net = assign_rates(1024, edges, {0.01, 1.0}, rates);
    double mean = 0;
    for (const auto& [e, r] : net.rates()) {
        EXPECT_GE(r, 0.01);
        EXPECT_LE(r, 1.0);
        mean += r;
    }
    mean /= static_cast<double>(net.edge_count());
    // 3 sigma of the mean of U(0.01, 1): 0.99 / sqrt(12 * |E|) * 3.
    EXPECT_NEAR(mean, 0.505, 3 * 0.99 / std::sqrt(12.0 * static_cast<double>(net.edge_count())));
}

TEST(AssignRates, EdgeCases) {
    Rng rng(1);
    EXPECT_TRUE(assign_rates(5, {}, {0.01, 1.0}, rng).empty());
    const Network net = assign_rates(3, {{0, 1}, {2, 1}}, {0.5, 0.5 + 1e-12}, rng);
    for (const auto& [e, r] : net.rates()) EXPECT_NEAR(r, 0.5, 1e-11);
    EXPECT_THROW(assign_rates(3, {{0, 1}}, {0.0, 1.0}, rng), ParameterError);
    EXPECT_EQ(RateRange::for_model(TransmissionModel::pow()).hi, 2.0);
    EXPECT_EQ(RateRange::for_model(TransmissionModel::ray()).hi, 1.0);
}

TEST(GenerateNetwork, DeterministicBySeed) {
    for (auto topo : {Topology::KroneckerRandom, Topology::KroneckerHierarchical, Topology::KroneckerCorePeriphery,
                      Topology::ForestFire}) {
        NetworkSpec spec;
        spec.topology = topo;
        const Network a = generate_network(spec, Rng(12));
        const Network b = generate_network(spec, Rng(12));
        const Network c = generate_network(spec, Rng(13));
        std::ostringstream sa, sb, sc;
        write_network(a, sa);
        write_network(b, sb);
        write_network(c, sc);
        EXPECT_EQ(sa.str(), sb.str());
        EXPECT_NE(sa.str(), sc.str());
        EXPECT_EQ(a.node_count(), 128u);
    }
}

TEST(GenerateNetwork, KroneckerNeedsPowerOfTwo) {
    NetworkSpec spec;
    spec.nodes = 100;
    EXPECT_THROW(generate_network(spec, Rng(1)), ParameterError);
    EXPECT_EQ(parse_topology("kronecker-core"), Topology::KroneckerCorePeriphery);
    EXPECT_THROW(parse_topology("smallworld"), ParameterError);
}

}  // namespace
}  // namespace netrate
