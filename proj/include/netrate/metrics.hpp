#pragma once

#include <cmath>
#include <cstddef>

#include "netrate/errors.hpp"
#include "netrate/network.hpp"

namespace netrate {

struct EvalReport {
    double precision = 0;
    double recall = 0;
    double accuracy = 0;
    double normalized_mae = 0;
    std::size_t n_true = 0;
    std::size_t n_inferred = 0;
    std::size_t n_common = 0;
    /// Precision was set to 1 because nothing was inferred.
    bool precision_by_convention = false;
    /// Accuracy was set to 0 because both networks are empty.
    bool accuracy_by_convention = false;
};

namespace detail {

inline void require_same_universe(const Network& truth, const Network& inferred) {
    if (truth.node_count() != inferred.node_count())
        throw ValidationError("truth and inferred networks have different node counts");
}

}  // namespace detail

inline std::size_t common_edges(const Network& a, const Network& b) {
    std::size_t common = 0;
    auto ia = a.rates().begin();
    auto ib = b.rates().begin();
    while (ia != a.rates().end() && ib != b.rates().end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            ++common;
            ++ia;
            ++ib;
        }
    }
    return common;
}

struct PrecisionRecall {
    double precision = 0;
    double recall = 0;
    bool precision_by_convention = false;
};

/// Support comparison. An empty inferred network has precision 1 by convention.
inline PrecisionRecall precision_recall(const Network& truth, const Network& inferred) {
    detail::require_same_universe(truth, inferred);
    const auto common = static_cast<double>(common_edges(truth, inferred));
    PrecisionRecall out;
    if (inferred.empty()) {
        out.precision = 1.0;
        out.precision_by_convention = true;
    } else {
        out.precision = common / static_cast<double>(inferred.edge_count());
    }
    out.recall = truth.empty() ? 0.0 : common / static_cast<double>(truth.edge_count());
    return out;
}

/// 1 - |symmetric difference| / (|truth| + |inferred|); 0 when both are empty.
inline double accuracy(const Network& truth, const Network& inferred, bool* by_convention = nullptr) {
    detail::require_same_universe(truth, inferred);
    const std::size_t total = truth.edge_count() + inferred.edge_count();
    if (by_convention) *by_convention = total == 0;
    if (total == 0) return 0.0;
    const std::size_t common = common_edges(truth, inferred);
    const std::size_t mismatched = total - 2 * common;
    return 1.0 - static_cast<double>(mismatched) / static_cast<double>(total);
}

/// Mean of |a* - a_hat| / a* over true edges; a missing edge counts as a_hat = 0.
inline double normalized_mae(const Network& truth, const Network& inferred) {
    detail::require_same_universe(truth, inferred);
    if (truth.empty()) throw ValidationError("normalized MAE needs at least one true edge");
    double sum = 0;
    for (const auto& [e, rate] : truth.rates()) sum += std::abs(rate - inferred.rate(e.src, e.dst)) / rate;
    return sum / static_cast<double>(truth.edge_count());
}

inline EvalReport evaluate(const Network& truth, const Network& inferred) {
    EvalReport r;
    const auto pr = precision_recall(truth, inferred);
    r.precision = pr.precision;
    r.recall = pr.recall;
    r.precision_by_convention = pr.precision_by_convention;
    r.accuracy = accuracy(truth, inferred, &r.accuracy_by_convention);
    r.normalized_mae = truth.empty() ? std::nan("") : normalized_mae(truth, inferred);
    r.n_true = truth.edge_count();
    r.n_inferred = inferred.edge_count();
    r.n_common = common_edges(truth, inferred);
    return r;
}

}  // namespace netrate
