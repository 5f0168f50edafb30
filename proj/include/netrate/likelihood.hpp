#pragma once

// Log-likelihood of a cascade set under a rate network, split as
//
//   L = sum_c Psi1(c) + Psi2(c) + Psi3(c)
//   Psi1 = sum_{i infected} sum_{m uninfected} ln S(T | t_i; a_im)
//   Psi2 = sum_{i infected} sum_{j: t_j < t_i} ln S(t_i | t_j; a_ji)
//   Psi3 = sum_{i infected, has predecessors} ln sum_{j: t_j < t_i} H(t_i | t_j; a_ji)
//
// Every term involves exactly one target node, so the negated likelihood is a
// sum of independent per-target objectives (NodeProblem). Since ln S and H are
// both linear in the rate, each per-target objective has the form
//
//   f(a) = sum_v a_v * linear_v - sum_r ln(sum_{v in r} a_v * h_rv)
//
// which is convex on a >= 0.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netrate/cascade.hpp"
#include "netrate/errors.hpp"
#include "netrate/network.hpp"
#include "netrate/transmission.hpp"

namespace netrate {

/// Hazard sums below this are treated as zero density.
inline constexpr double kHazardFloor = 1e-300;

struct ZeroDensitySite {
    std::size_t cascade = 0;
    NodeId node = 0;
};

struct LikelihoodBreakdown {
    double psi1 = 0;
    double psi2 = 0;
    double psi3 = 0;
    /// First infected node whose total hazard vanished, if any.
    std::optional<ZeroDensitySite> zero_density;

    double log_likelihood() const { return psi1 + psi2 + psi3; }
    double neg_log_likelihood() const { return -log_likelihood(); }
};

namespace detail {

struct RateAdjacency {
    std::vector<std::vector<Network::Link>> out;
    std::vector<std::vector<Network::Link>> in;

    explicit RateAdjacency(const Network& a) : out(a.node_count()), in(a.node_count()) {
        for (const auto& [e, r] : a.rates()) {
            out[e.src].push_back({e.dst, r});
            in[e.dst].push_back({e.src, r});
        }
    }
};

inline void require_same_nodes(const Cascade& c, const Network& a) {
    if (c.node_count() != a.node_count()) throw ValidationError("cascade and network disagree on node count");
}

inline double psi1(const Cascade& c, const RateAdjacency& adj, const TransmissionModel& m) {
    double sum = 0;
    for (NodeId i : c.infection_order())
        for (const auto& link : adj.out[i])
            if (!c.infected(link.node)) sum += log_survival(m, link.rate, c.time(i), c.horizon());
    return sum;
}

inline double psi2(const Cascade& c, const RateAdjacency& adj, const TransmissionModel& m) {
    double sum = 0;
    for (NodeId i : c.infection_order())
        for (const auto& link : adj.in[i])
            if (c.time(link.node) < c.time(i)) sum += log_survival(m, link.rate, c.time(link.node), c.time(i));
    return sum;
}

// Records the first zero-density node in `site`.
inline double psi3(const Cascade& c, const RateAdjacency& adj, const TransmissionModel& m, std::size_t cascade_id,
                   std::optional<ZeroDensitySite>* site) {
    const auto& order = c.infection_order();
    const double earliest = c.time(order.front());
    double sum = 0;
    for (NodeId i : order) {
        const double ti = c.time(i);
        if (!(ti > earliest)) continue;  // no strict predecessor: a root
        double hazard_sum = 0;
        for (const auto& link : adj.in[i]) {
            const double tj = c.time(link.node);
            if (tj < ti) hazard_sum += link.rate * hazard_coeff_or_zero(m, ti - tj);
        }
        if (!(hazard_sum >= kHazardFloor)) {
            if (site && !*site) *site = ZeroDensitySite{cascade_id, i};
            return kZeroDensity;
        }
        sum += std::log(hazard_sum);
    }
    return sum;
}

}  // namespace detail

/// Survival penalties from infected nodes toward nodes still uninfected at T.
inline double psi1(const Cascade& c, const Network& a, const TransmissionModel& m) {
    detail::require_same_nodes(c, a);
    return detail::psi1(c, detail::RateAdjacency(a), m);
}

/// Survival penalties among infected pairs with t_j < t_i.
inline double psi2(const Cascade& c, const Network& a, const TransmissionModel& m) {
    detail::require_same_nodes(c, a);
    return detail::psi2(c, detail::RateAdjacency(a), m);
}

/// Log total hazard of each infected node that has a strict predecessor.
/// Returns kZeroDensity when some such node has zero total hazard.
inline double psi3(const Cascade& c, const Network& a, const TransmissionModel& m,
                   std::optional<ZeroDensitySite>* site = nullptr) {
    detail::require_same_nodes(c, a);
    return detail::psi3(c, detail::RateAdjacency(a), m, 0, site);
}

inline LikelihoodBreakdown likelihood_breakdown(const CascadeSet& cs, const Network& a, const TransmissionModel& m) {
    if (!cs.empty() && cs.node_count() != a.node_count())
        throw ValidationError("cascade set and network disagree on node count");
    const detail::RateAdjacency adj(a);
    LikelihoodBreakdown out;
    for (std::size_t k = 0; k < cs.size(); ++k) {
        const Cascade& c = cs[k];
        out.psi1 += detail::psi1(c, adj, m);
        out.psi2 += detail::psi2(c, adj, m);
        out.psi3 += detail::psi3(c, adj, m, k, &out.zero_density);
    }
    return out;
}

/// -sum_c (Psi1 + Psi2 + Psi3); +infinity when some cascade has zero density.
inline double total_neg_loglik(const CascadeSet& cs, const Network& a, const TransmissionModel& m) {
    return likelihood_breakdown(cs, a, m).neg_log_likelihood();
}

/// All incoming-rate terms of one target node, independent of the model.
struct NodeProblem {
    struct Term {
        std::uint32_t var;  // index into candidates
        double elapsed;     // t_i - t_j (infected) or T - t_j (uninfected)
    };
    /// Cascade where the target is infected after at least one other node.
    struct Infection {
        std::size_t cascade;
        double time;
        std::size_t begin, end;  // range in infection_terms
    };
    /// Cascade where the target stays uninfected.
    struct Exposure {
        std::size_t cascade;
        std::size_t begin, end;  // range in exposure_terms
    };

    NodeId target = 0;
    std::vector<NodeId> candidates;  // sorted
    std::vector<Infection> infections;
    std::vector<Term> infection_terms;
    std::vector<Exposure> exposures;
    std::vector<Term> exposure_terms;

    std::size_t size() const noexcept { return candidates.size(); }
};

/// Builds the target's problem over the given candidate parents (sorted,
/// excluding the target). Terms for non-candidates are dropped: their rate is
/// fixed at 0.
inline NodeProblem build_node_problem(const CascadeSet& cs, NodeId target, std::vector<NodeId> candidates) {
    const std::size_t n = cs.node_count();
    if (target >= n) throw ValidationError("target node out of range");
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    std::vector<std::int64_t> slot(n, -1);
    for (std::size_t v = 0; v < candidates.size(); ++v) {
        if (candidates[v] >= n || candidates[v] == target) throw ValidationError("invalid candidate parent");
        slot[candidates[v]] = static_cast<std::int64_t>(v);
    }

    NodeProblem p;
    p.target = target;
    p.candidates = std::move(candidates);
    for (std::size_t k = 0; k < cs.size(); ++k) {
        const Cascade& c = cs[k];
        const double ti = c.time(target);
        if (is_infected(ti)) {
            const std::size_t begin = p.infection_terms.size();
            bool has_predecessor = false;
            for (NodeId j : c.infection_order()) {
                const double tj = c.time(j);
                if (!(tj < ti)) break;
                has_predecessor = true;
                if (slot[j] >= 0) p.infection_terms.push_back({static_cast<std::uint32_t>(slot[j]), ti - tj});
            }
            if (has_predecessor) p.infections.push_back({k, ti, begin, p.infection_terms.size()});
        } else {
            const std::size_t begin = p.exposure_terms.size();
            for (NodeId j : c.infection_order())
                if (slot[j] >= 0)
                    p.exposure_terms.push_back({static_cast<std::uint32_t>(slot[j]), c.horizon() - c.time(j)});
            if (p.exposure_terms.size() > begin) p.exposures.push_back({k, begin, p.exposure_terms.size()});
        }
    }
    return p;
}

/// Problem over the sources the precedence index allows for `target`.
inline NodeProblem build_node_problem(const CascadeSet& cs, NodeId target) {
    if (target >= cs.node_count()) throw ValidationError("target node out of range");
    return build_node_problem(cs, target, cs.precedence().sources_of(target));
}

/// Problem over every other node as a candidate (no pruning).
inline NodeProblem build_unpruned_node_problem(const CascadeSet& cs, NodeId target) {
    std::vector<NodeId> all;
    for (NodeId v = 0; v < cs.node_count(); ++v)
        if (v != target) all.push_back(v);
    return build_node_problem(cs, target, std::move(all));
}

/// A NodeProblem specialised to a transmission model: survival weights are
/// summed into one linear coefficient per variable and hazard coefficients
/// are laid out per infection.
class NodeObjective {
public:
    NodeObjective(const NodeProblem& p, const TransmissionModel& m)
        : target_(p.target), linear_(p.size(), 0.0), offsets_{0} {
        for (const auto& t : p.exposure_terms) linear_[t.var] += survival_weight(m, t.elapsed);
        for (const auto& t : p.infection_terms) linear_[t.var] += survival_weight(m, t.elapsed);
        for (const auto& inf : p.infections) {
            for (std::size_t k = inf.begin; k < inf.end; ++k) {
                const auto& t = p.infection_terms[k];
                const double h = hazard_coeff_or_zero(m, t.elapsed);
                if (h > 0) {
                    vars_.push_back(t.var);
                    coeffs_.push_back(h);
                }
            }
            offsets_.push_back(vars_.size());
            cascades_.push_back(inf.cascade);
        }
    }

    std::size_t size() const noexcept { return linear_.size(); }
    std::size_t infection_count() const noexcept { return cascades_.size(); }
    const std::vector<double>& linear() const noexcept { return linear_; }

    /// True when variable v appears in some hazard sum.
    std::vector<bool> in_hazard() const {
        std::vector<bool> used(size(), false);
        for (auto v : vars_) used[v] = true;
        return used;
    }

    /// Negative log-likelihood slice; +infinity when some infection has zero hazard.
    double value(std::span<const double> alpha) const {
        check(alpha);
        double f = 0;
        for (std::size_t v = 0; v < alpha.size(); ++v) f += alpha[v] * linear_[v];
        for (std::size_t r = 0; r + 1 < offsets_.size(); ++r) {
            const double s = hazard_sum(alpha, r);
            if (!(s >= kHazardFloor)) return std::numeric_limits<double>::infinity();
            f -= std::log(s);
        }
        return f;
    }

    /// Value and gradient in one pass. `grad` is unspecified when the value is infinite.
    double value_and_gradient(std::span<const double> alpha, std::span<double> grad) const {
        check(alpha);
        if (grad.size() != size()) throw ValidationError("gradient length does not match the problem");
        double f = 0;
        for (std::size_t v = 0; v < alpha.size(); ++v) f += alpha[v] * linear_[v];
        std::copy(linear_.begin(), linear_.end(), grad.begin());
        for (std::size_t r = 0; r + 1 < offsets_.size(); ++r) {
            const double s = hazard_sum(alpha, r);
            if (!(s >= kHazardFloor)) return std::numeric_limits<double>::infinity();
            f -= std::log(s);
            const double inv = 1.0 / s;
            for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) grad[vars_[k]] -= coeffs_[k] * inv;
        }
        return f;
    }

    /// value(to) - value(from) without cancellation between two large totals:
    /// each log term is taken as log1p of the relative change of its hazard sum.
    double difference(std::span<const double> from, std::span<const double> to) const {
        check(from);
        check(to);
        double d = 0;
        for (std::size_t v = 0; v < to.size(); ++v) d += (to[v] - from[v]) * linear_[v];
        for (std::size_t r = 0; r + 1 < offsets_.size(); ++r) {
            double base = 0, change = 0;
            for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) {
                base += from[vars_[k]] * coeffs_[k];
                change += (to[vars_[k]] - from[vars_[k]]) * coeffs_[k];
            }
            if (!(base >= kHazardFloor) || !(base + change >= kHazardFloor))
                return std::numeric_limits<double>::infinity();
            d -= std::log1p(change / base);
        }
        return d;
    }

    /// Cascade index of the first infection with zero hazard at `alpha`, if any.
    std::optional<ZeroDensitySite> zero_density_site(std::span<const double> alpha) const {
        check(alpha);
        for (std::size_t r = 0; r + 1 < offsets_.size(); ++r)
            if (!(hazard_sum(alpha, r) >= kHazardFloor)) return ZeroDensitySite{cascades_[r], target_};
        return std::nullopt;
    }

private:
    void check(std::span<const double> alpha) const {
        if (alpha.size() != size())
            throw ValidationError("rate vector has length " + std::to_string(alpha.size()) + ", expected " +
                                  std::to_string(size()));
    }

    double hazard_sum(std::span<const double> alpha, std::size_t r) const {
        double s = 0;
        for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) s += alpha[vars_[k]] * coeffs_[k];
        return s;
    }

    NodeId target_;
    std::vector<double> linear_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> vars_;
    std::vector<double> coeffs_;
    std::vector<std::size_t> cascades_;
};

/// Target-i slice of total_neg_loglik at rates `alpha` (aligned with candidates).
inline double node_objective(const NodeProblem& p, std::span<const double> alpha, const TransmissionModel& m) {
    return NodeObjective(p, m).value(alpha);
}

/// Exact gradient of node_objective. Throws when the objective is infinite.
inline std::vector<double> node_gradient(const NodeProblem& p, std::span<const double> alpha,
                                         const TransmissionModel& m) {
    std::vector<double> grad(p.size());
    const double f = NodeObjective(p, m).value_and_gradient(alpha, grad);
    if (std::isinf(f)) throw DomainError("gradient undefined: zero-density infection at these rates");
    return grad;
}

}  // namespace netrate
