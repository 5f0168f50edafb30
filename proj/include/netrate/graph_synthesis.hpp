#pragma once

// Synthetic ground-truth networks: stochastic Kronecker graphs, Forest Fire
// graphs, and uniform random transmission rates.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netrate/errors.hpp"
#include "netrate/network.hpp"
#include "netrate/random.hpp"
#include "netrate/transmission.hpp"

namespace netrate {

/// 2x2 initiator matrix and number of Kronecker powers (2^iterations nodes).
struct KroneckerSeed {
    std::array<std::array<double, 2>, 2> p{{{0.5, 0.5}, {0.5, 0.5}}};
    int iterations = 1;

    static KroneckerSeed random(int k) { return {{{{0.5, 0.5}, {0.5, 0.5}}}, k}; }
    static KroneckerSeed hierarchical(int k) { return {{{{0.9, 0.1}, {0.1, 0.9}}}, k}; }
    static KroneckerSeed core_periphery(int k) { return {{{{0.9, 0.5}, {0.5, 0.3}}}, k}; }

    std::size_t node_count() const { return std::size_t{1} << iterations; }

    void validate() const {
        if (iterations < 1 || iterations > 24) throw ParameterError("Kronecker iterations must be in [1, 24]");
        for (const auto& row : p)
            for (double x : row)
                if (!(x >= 0 && x <= 1)) throw ParameterError("Kronecker seed entries must lie in [0, 1]");
    }

    /// Entry (u, v) of the k-fold Kronecker power of `p`.
    double probability(std::size_t u, std::size_t v) const {
        double prob = 1.0;
        for (int b = 0; b < iterations; ++b) prob *= p[(u >> b) & 1U][(v >> b) & 1U];
        return prob;
    }
};

struct RateRange {
    double lo = 0.01;
    double hi = 1.0;

    void validate() const {
        if (!(lo > 0) || !(hi >= lo) || !std::isfinite(hi))
            throw ParameterError("rate range needs 0 < lo <= hi");
    }

    /// Default uniform range per model: [0.01, 1] for Exp/Ray, [0.01, 2] for Pow.
    static RateRange for_model(const TransmissionModel& m) {
        return m.kind == ModelKind::Pow ? RateRange{0.01, 2.0} : RateRange{0.01, 1.0};
    }
};

/// Samples each off-diagonal pair (u, v) independently with probability
/// min(1, s * P_k[u, v]), where s is chosen so that the expected edge count is
/// `target_edges`.
inline EdgeList kronecker_graph(const KroneckerSeed& seed, std::size_t target_edges, Rng& rng) {
    seed.validate();
    const std::size_t n = seed.node_count();
    if (target_edges > n * (n - 1)) throw ParameterError("target edge count exceeds n * (n - 1)");

    std::vector<double> prob(n * n, 0.0);
    std::size_t positive = 0;
    double mass = 0;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            if (u == v) continue;
            const double x = seed.probability(u, v);
            prob[u * n + v] = x;
            mass += x;
            positive += x > 0;
        }
    if (target_edges > positive)
        throw ParameterError("target edge count exceeds the number of pairs with nonzero Kronecker probability");

    auto expected = [&](double s) {
        double e = 0;
        for (double x : prob) e += std::min(1.0, s * x);
        return e;
    };
    const double target = static_cast<double>(target_edges);
    double scale = target_edges == 0 ? 0.0 : target / mass;
    if (target_edges > 0 && expected(scale) < target * (1 - 1e-12)) {
        // Capping at 1 lost mass; bisect for the scale that restores the target.
        double lo = scale, hi = scale;
        while (expected(hi) < target * (1 - 1e-12)) hi *= 2;
        for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (expected(mid) < target ? lo : hi) = mid;
        }
        scale = hi;
    }

    EdgeList edges;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            if (u == v) continue;
            const double x = std::min(1.0, scale * prob[u * n + v]);
            if (rng.uniform() < x) edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
        }
    return edges;
}

namespace detail {

// Number of successes before the first failure; mean p / (1 - p).
inline std::size_t geometric_count(double p, Rng& rng) {
    std::size_t k = 0;
    while (rng.uniform() < p) ++k;
    return k;
}

}  // namespace detail

/// Forest Fire growth with forward and backward burning. Each arriving node
/// links to a uniform ambassador, then to every node reached by the burn.
inline EdgeList forest_fire_graph(std::size_t n, double p_forward, double p_backward, Rng& rng) {
    if (n < 2) throw ParameterError("forest fire needs at least 2 nodes");
    if (!(p_forward >= 0 && p_forward < 1) || !(p_backward >= 0 && p_backward < 1))
        throw ParameterError("burning probabilities must lie in [0, 1)");

    std::vector<std::vector<NodeId>> out(n), in(n);
    EdgeList edges;
    std::vector<std::uint32_t> visited(n, 0);  // burn stamp
    std::vector<NodeId> pool;

    for (NodeId v = 1; v < n; ++v) {
        const std::uint32_t stamp = v;
        const auto ambassador = static_cast<NodeId>(rng.below(v));
        std::deque<NodeId> frontier{ambassador};
        visited[v] = stamp;
        visited[ambassador] = stamp;
        std::vector<NodeId> burned{ambassador};

        while (!frontier.empty()) {
            const NodeId w = frontier.front();
            frontier.pop_front();
            auto burn = [&](const std::vector<NodeId>& neighbours, double p) {
                pool.clear();
                for (NodeId x : neighbours)
                    if (visited[x] != stamp) pool.push_back(x);
                std::size_t k = std::min(detail::geometric_count(p, rng), pool.size());
                // Partial Fisher-Yates: pick k distinct unvisited neighbours.
                for (std::size_t a = 0; a < k; ++a) {
                    const std::size_t b = a + static_cast<std::size_t>(rng.below(pool.size() - a));
                    std::swap(pool[a], pool[b]);
                    visited[pool[a]] = stamp;
                    burned.push_back(pool[a]);
                    frontier.push_back(pool[a]);
                }
            };
            burn(out[w], p_forward);
            burn(in[w], p_backward);
        }

        for (NodeId u : burned) {
            edges.push_back({v, u});
            out[v].push_back(u);
            in[u].push_back(v);
        }
    }
    return edges;
}

/// Independent uniform rates on [lo, hi] per edge, drawn in edge-list order.
inline Network assign_rates(std::size_t n, const EdgeList& edges, const RateRange& range, Rng& rng) {
    range.validate();
    Network net(n);
    for (const auto& e : edges) net.set_rate(e.src, e.dst, rng.uniform(range.lo, range.hi));
    return net;
}

enum class Topology { KroneckerRandom, KroneckerHierarchical, KroneckerCorePeriphery, ForestFire };

inline Topology parse_topology(std::string_view name) {
    if (name == "kronecker-random") return Topology::KroneckerRandom;
    if (name == "kronecker-hierarchical") return Topology::KroneckerHierarchical;
    if (name == "kronecker-core" || name == "kronecker-core-periphery") return Topology::KroneckerCorePeriphery;
    if (name == "forestfire" || name == "forest-fire") return Topology::ForestFire;
    throw ParameterError("unknown topology '" + std::string(name) + "'");
}

inline std::string_view topology_name(Topology t) {
    switch (t) {
        case Topology::KroneckerRandom: return "kronecker-random";
        case Topology::KroneckerHierarchical: return "kronecker-hierarchical";
        case Topology::KroneckerCorePeriphery: return "kronecker-core";
        case Topology::ForestFire: return "forestfire";
    }
    return "?";
}

struct NetworkSpec {
    Topology topology = Topology::KroneckerHierarchical;
    std::size_t nodes = 128;
    std::size_t edges = 256;  // Kronecker only
    double p_forward = 0.35;  // Forest Fire only
    double p_backward = 0.25;  // about 2.35 edges per node at 1024 nodes
    TransmissionModel model = TransmissionModel::exp();
    std::optional<RateRange> rates;  // defaults per model
};

/// Topology plus rates in one call; the edge sampler and the rate draws use
/// separate substreams of `rng`.
inline Network generate_network(const NetworkSpec& spec, const Rng& rng) {
    Rng topo = rng.substream(1);
    Rng rates = rng.substream(2);
    EdgeList edges;
    if (spec.topology == Topology::ForestFire) {
        edges = forest_fire_graph(spec.nodes, spec.p_forward, spec.p_backward, topo);
    } else {
        int k = 0;
        while ((std::size_t{1} << k) < spec.nodes) ++k;
        if ((std::size_t{1} << k) != spec.nodes || k == 0)
            throw ParameterError("Kronecker node count must be a power of two >= 2");
        const KroneckerSeed seed = spec.topology == Topology::KroneckerRandom     ? KroneckerSeed::random(k)
                                   : spec.topology == Topology::KroneckerHierarchical ? KroneckerSeed::hierarchical(k)
                                                                                      : KroneckerSeed::core_periphery(k);
        edges = kronecker_graph(seed, spec.edges, topo);
    }
    return assign_rates(spec.nodes, edges, spec.rates.value_or(RateRange::for_model(spec.model)), rates);
}

}  // namespace netrate
