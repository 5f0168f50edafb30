#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "netrate/errors.hpp"
#include "netrate/network.hpp"

namespace netrate {

/// Infection time of a node that was not infected inside the observation window.
inline constexpr double kUninfected = std::numeric_limits<double>::infinity();

inline bool is_infected(double t) noexcept { return std::isfinite(t); }

/// One diffusion episode: per-node infection times within [0, horizon].
class Cascade {
public:
    Cascade() = default;

    /// Validates that the clock starts at 0 (some node infected at time 0).
    Cascade(std::vector<double> times, double horizon) : Cascade(std::move(times), horizon, true) {}

    /// Same as the constructor but does not require the earliest infection to be
    /// at time 0. Used to check that the likelihood ignores the absolute clock.
    static Cascade with_free_origin(std::vector<double> times, double horizon) {
        return Cascade(std::move(times), horizon, false);
    }

    std::size_t node_count() const noexcept { return times_.size(); }
    double horizon() const noexcept { return horizon_; }
    double time(NodeId v) const { return times_.at(v); }
    bool infected(NodeId v) const { return is_infected(times_.at(v)); }
    const std::vector<double>& times() const noexcept { return times_; }

    /// Infected nodes ordered by (time, id).
    const std::vector<NodeId>& infection_order() const noexcept { return order_; }
    std::size_t infected_count() const noexcept { return order_.size(); }

    friend bool operator==(const Cascade& a, const Cascade& b) {
        return a.horizon_ == b.horizon_ && a.times_ == b.times_;
    }

private:
    Cascade(std::vector<double> times, double horizon, bool clock_at_zero)
        : times_(std::move(times)), horizon_(horizon) {
        if (!(horizon_ > 0) || !std::isfinite(horizon_)) throw ValidationError("cascade horizon must be positive");
        double earliest = kUninfected;
        for (std::size_t v = 0; v < times_.size(); ++v) {
            const double t = times_[v];
            if (std::isnan(t) || t == -kUninfected) throw ValidationError("invalid infection time for node " + std::to_string(v));
            if (!is_infected(t)) continue;
            if (t < 0) throw ValidationError("negative infection time for node " + std::to_string(v));
            if (t > horizon_)
                throw ValidationError("infection time of node " + std::to_string(v) + " exceeds the horizon");
            earliest = std::min(earliest, t);
            order_.push_back(static_cast<NodeId>(v));
        }
        if (order_.empty()) throw ValidationError("cascade has no infected node");
        if (clock_at_zero && earliest != 0) throw ValidationError("earliest infection of a cascade must be at time 0");
        std::sort(order_.begin(), order_.end(), [this](NodeId a, NodeId b) {
            return times_[a] != times_[b] ? times_[a] < times_[b] : a < b;
        });
    }

    std::vector<double> times_;
    double horizon_ = 1.0;
    std::vector<NodeId> order_;
};

struct TimedNode {
    NodeId node;
    double time;

    friend bool operator==(const TimedNode&, const TimedNode&) = default;
};

/// Nodes infected strictly before node `i`, sorted by id. Ties are not parents.
/// For an uninfected `i` this is every infected node.
inline std::vector<TimedNode> parents_in_cascade(const Cascade& c, NodeId i) {
    if (i >= c.node_count()) throw ValidationError("node " + std::to_string(i) + " out of range");
    const double ti = c.time(i);
    std::vector<TimedNode> out;
    for (NodeId j : c.infection_order()) {
        if (c.time(j) < ti) out.push_back({j, c.time(j)});
    }
    std::sort(out.begin(), out.end(), [](const TimedNode& a, const TimedNode& b) { return a.node < b.node; });
    return out;
}

/// Set of ordered pairs (j, i) witnessed by some cascade with t_j < t_i <= T.
/// Stored as a sorted source list per target.
class PrecedenceIndex {
public:
    PrecedenceIndex() = default;
    explicit PrecedenceIndex(std::size_t n) : sources_(n) {}

    std::size_t node_count() const noexcept { return sources_.size(); }

    void add(const Cascade& c) {
        if (c.node_count() != sources_.size()) throw ValidationError("cascade node count does not match the index");
        const auto& order = c.infection_order();
        std::vector<NodeId> fresh;  // predecessors so far, sorted by id
        std::vector<NodeId> merged;
        // `order` is sorted by time, so strict predecessors of order[k] form a prefix.
        std::size_t prefix = 0;
        for (std::size_t k = 0; k < order.size(); ++k) {
            const NodeId i = order[k];
            while (prefix < k && c.time(order[prefix]) < c.time(i)) {
                const NodeId j = order[prefix++];
                fresh.insert(std::upper_bound(fresh.begin(), fresh.end(), j), j);
            }
            if (prefix == 0) continue;
            auto& dst = sources_[i];
            merged.clear();
            std::set_union(dst.begin(), dst.end(), fresh.begin(), fresh.end(), std::back_inserter(merged));
            dst.swap(merged);
        }
    }

    bool contains(NodeId src, NodeId dst) const {
        if (dst >= sources_.size()) return false;
        const auto& s = sources_[dst];
        return std::binary_search(s.begin(), s.end(), src);
    }

    /// Sorted candidate sources for target `dst`.
    const std::vector<NodeId>& sources_of(NodeId dst) const { return sources_.at(dst); }

    std::size_t size() const noexcept {
        std::size_t total = 0;
        for (const auto& s : sources_) total += s.size();
        return total;
    }

    std::vector<Edge> pairs() const {
        std::vector<Edge> out;
        for (NodeId i = 0; i < sources_.size(); ++i)
            for (NodeId j : sources_[i]) out.push_back({j, i});
        std::sort(out.begin(), out.end());
        return out;
    }

    friend bool operator==(const PrecedenceIndex&, const PrecedenceIndex&) = default;

private:
    std::vector<std::vector<NodeId>> sources_;
};

/// Builds the index from scratch. An empty list yields an empty index.
inline PrecedenceIndex build_precedence_index(const std::vector<Cascade>& cascades) {
    if (cascades.empty()) return PrecedenceIndex{};
    PrecedenceIndex index(cascades.front().node_count());
    for (const auto& c : cascades) index.add(c);
    return index;
}

/// Cascades over a shared node universe and a shared horizon.
class CascadeSet {
public:
    CascadeSet() = default;
    CascadeSet(std::size_t n, double horizon) : n_(n), horizon_(horizon), index_(n) {
        if (!(horizon > 0) || !std::isfinite(horizon)) throw ValidationError("horizon must be positive");
    }

    CascadeSet(std::size_t n, double horizon, std::vector<Cascade> cascades) : CascadeSet(n, horizon) {
        cascades_.reserve(cascades.size());
        for (auto& c : cascades) add(std::move(c));
    }

    void add(Cascade c) {
        if (c.node_count() != n_) throw ValidationError("cascade has " + std::to_string(c.node_count()) +
                                                         " nodes, expected " + std::to_string(n_));
        if (c.horizon() != horizon_) throw ValidationError("cascade horizon differs from the set's horizon");
        index_.add(c);
        cascades_.push_back(std::move(c));
    }

    std::size_t node_count() const noexcept { return n_; }
    double horizon() const noexcept { return horizon_; }
    std::size_t size() const noexcept { return cascades_.size(); }
    bool empty() const noexcept { return cascades_.empty(); }
    const std::vector<Cascade>& cascades() const noexcept { return cascades_; }
    const Cascade& operator[](std::size_t k) const { return cascades_.at(k); }
    const PrecedenceIndex& precedence() const noexcept { return index_; }

    friend bool operator==(const CascadeSet& a, const CascadeSet& b) {
        return a.n_ == b.n_ && a.horizon_ == b.horizon_ && a.cascades_ == b.cascades_;
    }

private:
    std::size_t n_ = 0;
    double horizon_ = 1.0;
    std::vector<Cascade> cascades_;
    PrecedenceIndex index_;
};

}  // namespace netrate
