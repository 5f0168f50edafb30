#pragma once

// Continuous-time cascade simulation over a ground-truth network.
//
// A node's infection time is the earliest arrival over all incoming edges,
// t_i = min_j (t_j + d_ji), where each delay d_ji is drawn from the edge's
// transmission likelihood. Infections after the horizon are not observed.
//
// Delay draws are keyed by (cascade key, source, target) rather than consumed
// from a sequential stream. The uniform for edge j -> i in a cascade is
//   unit_open_closed(mix64(key, (j << 32) | i))
// so the result does not depend on the order in which edges are expanded, and
// any other traversal (e.g. a brute-force all-pairs oracle) sees the same delays.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "netrate/cascade.hpp"
#include "netrate/errors.hpp"
#include "netrate/network.hpp"
#include "netrate/parallel.hpp"
#include "netrate/random.hpp"
#include "netrate/transmission.hpp"

namespace netrate {

using OutLinks = std::vector<std::vector<Network::Link>>;

/// Uniform (0, 1] draw for edge (src, dst) under a per-cascade key.
struct KeyedDraws {
    std::uint64_t key = 0;

    double operator()(NodeId src, NodeId dst) const noexcept {
        return unit_open_closed(mix64(key, (std::uint64_t{src} << 32) | dst));
    }
};

/// Earliest-arrival expansion from `root`. `draw(src, dst)` supplies the
/// uniform for each edge; it is called at most once per edge, when the
/// source is finalized, in increasing target order.
template <class DrawFn>
Cascade simulate_cascade(const OutLinks& out, const TransmissionModel& model, double horizon, NodeId root,
                         DrawFn&& draw) {
    const std::size_t n = out.size();
    if (root >= n) throw ParameterError("root " + std::to_string(root) + " out of range");
    if (!(horizon > 0)) throw ParameterError("horizon must be positive");

    std::vector<double> t(n, kUninfected);
    std::vector<bool> done(n, false);
    using Entry = std::pair<double, NodeId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
    t[root] = 0.0;
    frontier.push({0.0, root});

    while (!frontier.empty()) {
        const auto [tj, j] = frontier.top();
        frontier.pop();
        if (done[j]) continue;
        if (tj > horizon) break;
        done[j] = true;
        for (const auto& link : out[j]) {
            if (done[link.node]) continue;
            const double ti = tj + sample_delay(model, link.rate, draw(j, link.node));
            if (ti < t[link.node]) {
                t[link.node] = ti;
                frontier.push({ti, link.node});
            }
        }
    }
    for (std::size_t v = 0; v < n; ++v)
        if (!done[v]) t[v] = kUninfected;
    return Cascade(std::move(t), horizon);
}

inline Cascade simulate_cascade(const Network& net, const TransmissionModel& model, double horizon, NodeId root,
                                Rng& rng) {
    return simulate_cascade(net.out_links(), model, horizon, root, KeyedDraws{rng()});
}

struct SimConfig {
    double horizon = 10.0;
    std::size_t n_cascades = 1000;
    TransmissionModel model = TransmissionModel::exp();
    /// Cascades with fewer infections are redrawn with a fresh root.
    std::size_t min_infected = 2;
    std::size_t max_attempts = 1000;
    std::size_t workers = 1;

    void validate() const {
        if (!(horizon > 0) || !std::isfinite(horizon)) throw ParameterError("horizon must be positive and finite");
        if (min_infected < 1) throw ParameterError("min_infected must be >= 1");
        if (max_attempts < 1) throw ParameterError("max_attempts must be >= 1");
    }
};

/// Cascade `index` draws its roots and edge keys from substream `index` of a
/// generator seeded with `seed`, so cascades are independent of one another
/// and of the worker count.
inline CascadeSet generate_cascades(const Network& net, const SimConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const std::size_t n = net.node_count();
    if (n == 0) throw ParameterError("network has no nodes");
    const OutLinks out = net.out_links();
    const Rng base(seed);

    std::vector<Cascade> slots(cfg.n_cascades);
    parallel_for(cfg.n_cascades, cfg.workers, [&](std::size_t idx) {
        Rng rng = base.substream(idx);
        for (std::size_t attempt = 0; attempt < cfg.max_attempts; ++attempt) {
            const auto root = static_cast<NodeId>(rng.below(n));
            Cascade c = simulate_cascade(out, cfg.model, cfg.horizon, root, KeyedDraws{rng()});
            if (c.infected_count() >= cfg.min_infected) {
                slots[idx] = std::move(c);
                return;
            }
        }
        throw ParameterError("cascade " + std::to_string(idx) + ": no root produced " +
                             std::to_string(cfg.min_infected) + " infections within the horizon after " +
                             std::to_string(cfg.max_attempts) + " attempts");
    });
    return CascadeSet(n, cfg.horizon, std::move(slots));
}

}  // namespace netrate
