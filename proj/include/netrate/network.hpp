#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "netrate/errors.hpp"

namespace netrate {

using NodeId = std::uint32_t;

/// Ordered node pair (source, target).
struct Edge {
    NodeId src = 0;
    NodeId dst = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

using EdgeList = std::vector<Edge>;

/// Directed weighted graph. The weight of src -> dst is the transmission rate;
/// only strictly positive rates are stored, so absence means rate 0.
class Network {
public:
    struct Link {
        NodeId node;
        double rate;
    };

    Network() = default;
    explicit Network(std::size_t n) : n_(n) {}

    std::size_t node_count() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return rates_.size(); }
    bool empty() const noexcept { return rates_.empty(); }

    /// Inserts or overwrites a rate. Rejects self-loops and non-positive rates.
    void set_rate(NodeId src, NodeId dst, double rate) {
        check_node(src);
        check_node(dst);
        if (src == dst) throw ValidationError("self-loop " + std::to_string(src) + " -> " + std::to_string(src));
        if (!(rate > 0) || !std::isfinite(rate))
            throw ValidationError("rate of " + std::to_string(src) + " -> " + std::to_string(dst) +
                                  " must be positive and finite");
        rates_[{src, dst}] = rate;
    }

    double rate(NodeId src, NodeId dst) const {
        auto it = rates_.find({src, dst});
        return it == rates_.end() ? 0.0 : it->second;
    }

    bool has_edge(NodeId src, NodeId dst) const { return rates_.count({src, dst}) != 0; }

    /// Edges in (src, dst) lexicographic order.
    const std::map<Edge, double>& rates() const noexcept { return rates_; }

    EdgeList edges() const {
        EdgeList out;
        out.reserve(rates_.size());
        for (const auto& [e, r] : rates_) out.push_back(e);
        return out;
    }

    /// Out-neighbours per node, each list sorted by target id.
    std::vector<std::vector<Link>> out_links() const {
        std::vector<std::vector<Link>> adj(n_);
        for (const auto& [e, r] : rates_) adj[e.src].push_back({e.dst, r});
        return adj;
    }

    friend bool operator==(const Network&, const Network&) = default;

private:
    void check_node(NodeId v) const {
        if (v >= n_)
            throw ValidationError("node " + std::to_string(v) + " out of range [0, " + std::to_string(n_) + ")");
    }

    std::size_t n_ = 0;
    std::map<Edge, double> rates_;
};

}  // namespace netrate
