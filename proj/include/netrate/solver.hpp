#pragma once

// Maximum-likelihood rates by per-target projected gradient descent.
//
// Each target node's incoming rates form an independent convex program
// (minimize the NodeObjective subject to rates >= 0), so the network is
// inferred by solving one small problem per node, in parallel if requested.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netrate/cascade.hpp"
#include "netrate/errors.hpp"
#include "netrate/likelihood.hpp"
#include "netrate/network.hpp"
#include "netrate/parallel.hpp"
#include "netrate/transmission.hpp"

namespace netrate {

struct SolverOptions {
    std::size_t max_iters = 2000;
    /// Stop when the relative objective decrease of an accepted step falls below this.
    double rel_tol = 1e-8;
    double init_rate = 0.1;
    /// Rates at or below this are not reported as edges.
    double edge_threshold = 1e-4;
    double shrink = 0.5;
    double initial_step = 1.0;
    /// Sufficient-decrease constant of the Armijo test.
    double armijo = 1e-4;
    /// Projected-gradient tolerance of the first-order optimality check.
    double kkt_tol = 1e-4;
    std::size_t workers = 1;

    void validate() const {
        if (max_iters == 0) throw ParameterError("max_iters must be positive");
        if (!(rel_tol > 0 && rel_tol < 1)) throw ParameterError("rel_tol must lie in (0, 1)");
        if (!(init_rate > 0)) throw ParameterError("init_rate must be positive");
        if (!(edge_threshold > 0)) throw ParameterError("edge_threshold must be positive");
        if (!(shrink > 0 && shrink < 1)) throw ParameterError("shrink factor must lie in (0, 1)");
        if (!(initial_step > 0)) throw ParameterError("initial step must be positive");
        if (!(kkt_tol > 0)) throw ParameterError("kkt_tol must be positive");
    }
};

struct NodeDiagnostics {
    NodeId node = 0;
    std::size_t variables = 0;
    std::size_t iterations = 0;
    double objective = 0;
    /// Largest first-order optimality violation at the returned point.
    double kkt_residual = 0;
    bool converged = true;
    std::string error;
};

struct NodeSolution {
    std::vector<double> rates;  // aligned with the problem's candidates
    NodeDiagnostics diagnostics;
};

/// Drops candidates with no infection witnessing t_j < t_i <= T. Such a rate
/// appears only in survival penalties, so it is 0 at the optimum.
inline NodeProblem prune(const NodeProblem& p) {
    std::vector<bool> keep(p.size(), false);
    for (const auto& t : p.infection_terms) keep[t.var] = true;

    NodeProblem out;
    out.target = p.target;
    std::vector<std::int64_t> remap(p.size(), -1);
    for (std::size_t v = 0; v < p.size(); ++v) {
        if (!keep[v]) continue;
        remap[v] = static_cast<std::int64_t>(out.candidates.size());
        out.candidates.push_back(p.candidates[v]);
    }
    auto copy_terms = [&](const std::vector<NodeProblem::Term>& src, std::size_t begin, std::size_t end,
                          std::vector<NodeProblem::Term>& dst) {
        for (std::size_t k = begin; k < end; ++k)
            if (remap[src[k].var] >= 0) dst.push_back({static_cast<std::uint32_t>(remap[src[k].var]), src[k].elapsed});
    };
    for (const auto& inf : p.infections) {
        const std::size_t begin = out.infection_terms.size();
        copy_terms(p.infection_terms, inf.begin, inf.end, out.infection_terms);
        out.infections.push_back({inf.cascade, inf.time, begin, out.infection_terms.size()});
    }
    for (const auto& ex : p.exposures) {
        const std::size_t begin = out.exposure_terms.size();
        copy_terms(p.exposure_terms, ex.begin, ex.end, out.exposure_terms);
        if (out.exposure_terms.size() > begin) out.exposures.push_back({ex.cascade, begin, out.exposure_terms.size()});
    }
    return out;
}

inline constexpr std::size_t kStallSteps = 500;

namespace detail {

// Largest violation of: grad_v = 0 where alpha_v > 0, grad_v >= 0 where alpha_v = 0.
inline double kkt_residual(std::span<const double> alpha, std::span<const double> grad) {
    double worst = 0;
    for (std::size_t v = 0; v < alpha.size(); ++v) {
        const double r = alpha[v] > 0 ? std::abs(grad[v]) : std::max(0.0, -grad[v]);
        worst = std::max(worst, r);
    }
    return worst;
}

}  // namespace detail

/// Projected gradient descent from `start` (or init_rate everywhere).
///
/// Trial steps follow the Barzilai-Borwein rule (the first trial uses
/// initial_step) and are shrunk until the Armijo condition holds on the
/// projected step, so every accepted step decreases the objective.
/// Stops when the projected gradient meets kkt_tol, when a window of
/// kStallSteps accepted steps decreases the objective by less than rel_tol
/// (relative), when no descent step exists, or at max_iters.
inline NodeSolution solve_node(const NodeObjective& f, const SolverOptions& opts,
                               std::optional<std::vector<double>> start = std::nullopt, NodeId node = 0) {
    opts.validate();
    const std::size_t n = f.size();
    NodeSolution sol;
    sol.diagnostics.node = node;
    sol.diagnostics.variables = n;
    sol.rates = start ? std::move(*start) : std::vector<double>(n, opts.init_rate);
    if (sol.rates.size() != n) throw ValidationError("start point has the wrong length");
    for (double& a : sol.rates) a = std::max(a, 0.0);

    // Without infections the objective is linear with nonnegative slopes:
    // the optimum is all zeros.
    if (f.infection_count() == 0) {
        std::fill(sol.rates.begin(), sol.rates.end(), 0.0);
        sol.diagnostics.objective = 0;
        return sol;
    }

    // A variable with no survival weight and no hazard term does not affect
    // the objective (e.g. Pow pairs only ever observed within delta); pin it at 0.
    const auto used = f.in_hazard();
    for (std::size_t v = 0; v < n; ++v)
        if (!used[v] && f.linear()[v] == 0) sol.rates[v] = 0;

    std::vector<double> grad(n), trial(n), trial_grad(n);
    double value = f.value_and_gradient(sol.rates, grad);
    if (!std::isfinite(value)) {
        const auto site = f.zero_density_site(sol.rates);
        throw DomainError("node " + std::to_string(node) + ": zero likelihood at the starting point (cascade " +
                          std::to_string(site ? site->cascade : 0) + ")");
    }

    double step = opts.initial_step;
    std::size_t window = 0;  // accepted steps in the current stall window
    double progress = 0;     // objective decrease within the window
    std::size_t it = 0;
    bool converged = false;
    for (; it < opts.max_iters; ++it) {
        if (detail::kkt_residual(sol.rates, grad) <= opts.kkt_tol) {
            converged = true;
            break;
        }
        double trial_value = std::numeric_limits<double>::infinity();
        double change = 0;
        double t = step;
        bool accepted = false;
        for (int ls = 0; ls < 200; ++ls) {
            double decrease = 0;  // grad . (alpha - trial)
            for (std::size_t v = 0; v < n; ++v) {
                trial[v] = std::max(0.0, sol.rates[v] - t * grad[v]);
                decrease += grad[v] * (sol.rates[v] - trial[v]);
            }
            if (decrease <= 0) break;
            change = f.difference(sol.rates, trial);
            if (change <= -opts.armijo * decrease) {
                trial_value = f.value_and_gradient(trial, trial_grad);
                accepted = true;
                break;
            }
            t *= opts.shrink;
        }
        if (!accepted) break;  // no descent left at machine precision

        // Barzilai-Borwein step for the next trial.
        double ss = 0, sy = 0;
        for (std::size_t v = 0; v < n; ++v) {
            const double s = trial[v] - sol.rates[v];
            const double y = trial_grad[v] - grad[v];
            ss += s * s;
            sy += s * y;
        }
        step = sy > 0 ? std::clamp(ss / sy, 1e-12, 1e12) : std::min(t * 2, 1e12);

        sol.rates.swap(trial);
        grad.swap(trial_grad);
        value = trial_value;
        progress += -change;
        if (++window == kStallSteps) {
            if (progress / std::max(1.0, std::abs(value)) < opts.rel_tol) {
                ++it;
                break;
            }
            progress = 0;
            window = 0;
        }
    }
    sol.diagnostics.iterations = it;
    sol.diagnostics.objective = value;
    sol.diagnostics.kkt_residual = detail::kkt_residual(sol.rates, grad);
    sol.diagnostics.converged = converged || sol.diagnostics.kkt_residual <= opts.kkt_tol;
    return sol;
}

inline NodeSolution solve_node(const NodeProblem& p, const TransmissionModel& m, const SolverOptions& opts,
                               std::optional<std::vector<double>> start = std::nullopt) {
    return solve_node(NodeObjective(p, m), opts, std::move(start), p.target);
}

struct InferenceResult {
    /// Edges whose rate exceeds the threshold.
    Network network;
    /// Full nonnegative solution per target, aligned with `candidates[target]`.
    std::vector<std::vector<NodeId>> candidates;
    std::vector<std::vector<double>> raw_rates;
    std::vector<NodeDiagnostics> diagnostics;

    std::size_t failed_nodes() const {
        return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                                      [](const auto& d) { return !d.error.empty(); }));
    }
    std::size_t unconverged_nodes() const {
        return static_cast<std::size_t>(
            std::count_if(diagnostics.begin(), diagnostics.end(), [](const auto& d) { return !d.converged; }));
    }
    double objective() const {
        double total = 0;
        for (const auto& d : diagnostics) total += d.objective;
        return total;
    }
};

/// Solves every target's pruned problem. Per-node failures are recorded in
/// the diagnostics and leave that node's rates at 0.
inline InferenceResult infer_network(const CascadeSet& cs, const TransmissionModel& m, const SolverOptions& opts) {
    opts.validate();
    if (cs.empty()) throw ParameterError("cannot infer a network from an empty cascade set");
    const std::size_t n = cs.node_count();

    InferenceResult res;
    res.candidates.resize(n);
    res.raw_rates.resize(n);
    res.diagnostics.resize(n);
    parallel_for(n, opts.workers, [&](std::size_t i) {
        const auto target = static_cast<NodeId>(i);
        NodeProblem p = prune(build_node_problem(cs, target));
        res.candidates[i] = p.candidates;
        try {
            NodeSolution s = solve_node(p, m, opts);
            res.raw_rates[i] = std::move(s.rates);
            res.diagnostics[i] = s.diagnostics;
        } catch (const std::exception& e) {
            res.raw_rates[i].assign(p.size(), 0.0);
            res.diagnostics[i].node = target;
            res.diagnostics[i].variables = p.size();
            res.diagnostics[i].converged = false;
            res.diagnostics[i].error = e.what();
        }
    });

    res.network = Network(n);
    for (NodeId i = 0; i < n; ++i)
        for (std::size_t v = 0; v < res.candidates[i].size(); ++v)
            if (res.raw_rates[i][v] > opts.edge_threshold) res.network.set_rate(res.candidates[i][v], i, res.raw_rates[i][v]);
    return res;
}

}  // namespace netrate
