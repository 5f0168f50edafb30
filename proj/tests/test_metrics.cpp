#include <cmath>

#include <gtest/gtest.h>

#include "netrate/metrics.hpp"
#include "oracles.hpp"

namespace netrate {
namespace {

Network with_edges(std::size_t n, std::initializer_list<Edge> edges, double rate = 1.0) {
    Network net(n);
    for (const auto& e : edges) net.set_rate(e.src, e.dst, rate);
    return net;
}

// a = 0->1, b = 1->2, c = 2->3, d = 3->0, e = 0->2
const Network kTruth = with_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
const Network kInferred = with_edges(4, {{0, 1}, {1, 2}, {0, 2}});

TEST(PrecisionRecall, Examples) {
    const auto pr = precision_recall(kTruth, kInferred);
    EXPECT_DOUBLE_EQ(pr.precision, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(pr.recall, 0.5);
    EXPECT_FALSE(pr.precision_by_convention);
    const auto same = precision_recall(kTruth, kTruth);
    EXPECT_EQ(same.precision, 1.0);
    EXPECT_EQ(same.recall, 1.0);
    const auto disjoint = precision_recall(kTruth, with_edges(4, {{1, 0}, {2, 0}}));
    EXPECT_EQ(disjoint.precision, 0.0);
    EXPECT_EQ(disjoint.recall, 0.0);
}

TEST(PrecisionRecall, EmptyInferred) {
    const auto pr = precision_recall(kTruth, Network(4));
    EXPECT_EQ(pr.precision, 1.0);
    EXPECT_TRUE(pr.precision_by_convention);
    EXPECT_EQ(pr.recall, 0.0);
    EXPECT_THROW(precision_recall(kTruth, Network(5)), ValidationError);
}

TEST(Accuracy, Examples) {
    EXPECT_DOUBLE_EQ(accuracy(kTruth, kInferred), 4.0 / 7.0);
    EXPECT_EQ(accuracy(kTruth, kTruth), 1.0);
    EXPECT_EQ(accuracy(kTruth, with_edges(4, {{1, 0}})), 0.0);
    EXPECT_EQ(accuracy(kTruth, Network(4)), 0.0);
    bool flag = false;
    EXPECT_EQ(accuracy(Network(4), Network(4), &flag), 0.0);
    EXPECT_TRUE(flag);
    accuracy(kTruth, kInferred, &flag);
    EXPECT_FALSE(flag);
}

TEST(NormalizedMae, Examples) {
    const Network t = with_edges(2, {{0, 1}}, 0.5);
    EXPECT_DOUBLE_EQ(normalized_mae(t, with_edges(2, {{0, 1}}, 0.4)), 0.2);
    EXPECT_EQ(normalized_mae(t, t), 0.0);
    EXPECT_EQ(normalized_mae(kTruth, Network(4)), 1.0);
    EXPECT_THROW(normalized_mae(Network(4), kTruth), ValidationError);
    // False positives do not enter the average.
    EXPECT_EQ(normalized_mae(kTruth, with_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}})), 0.0);
}

TEST(Evaluate, Report) {
    const EvalReport r = evaluate(kTruth, kInferred);
    EXPECT_EQ(r.n_true, 4u);
    EXPECT_EQ(r.n_inferred, 3u);
    EXPECT_EQ(r.n_common, 2u);
    EXPECT_DOUBLE_EQ(r.normalized_mae, 0.5);
    EXPECT_TRUE(std::isnan(evaluate(Network(4), kInferred).normalized_mae));
}

TEST(MetricProperties, RandomNetworks) {
    Rng rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng.below(8);
        const Network a = testing::random_rates(n, rng, rng.uniform(0, 0.6));
        const Network b = testing::random_rates(n, rng, rng.uniform(0, 0.6));
        EXPECT_EQ(accuracy(a, b), accuracy(b, a));
        EXPECT_EQ(accuracy(a, a) == 1.0, !a.empty());
        if (!a.empty() && !b.empty()) {
            EXPECT_EQ(accuracy(a, b) == 1.0, a.edges() == b.edges());
            const auto pr = precision_recall(a, b);
            const double common = static_cast<double>(common_edges(a, b));
            EXPECT_NEAR(pr.precision * static_cast<double>(b.edge_count()), common, 1e-9);
            EXPECT_NEAR(pr.recall * static_cast<double>(a.edge_count()), common, 1e-9);

            const double c = rng.uniform(0.1, 10);
            Network sa(n), sb(n);
            for (const auto& [e, r] : a.rates()) sa.set_rate(e.src, e.dst, c * r);
            for (const auto& [e, r] : b.rates()) sb.set_rate(e.src, e.dst, c * r);
            EXPECT_NEAR(normalized_mae(sa, sb), normalized_mae(a, b), 1e-12);
        }
    }
}

}  // namespace
}  // namespace netrate
