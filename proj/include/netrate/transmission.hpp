#pragma once

// Pairwise transmission likelihoods: exponential, power-law and Rayleigh.
//
// Every family has a log-survival that is linear in the rate and a hazard that
// is linear in the rate, which is what makes the network likelihood convex.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "netrate/errors.hpp"

namespace netrate {

enum class ModelKind { Exp, Pow, Ray };

struct TransmissionModel {
    ModelKind kind = ModelKind::Exp;
    /// Minimum delay of the power-law family. Ignored by Exp and Ray.
    double delta = 1.0;

    static TransmissionModel exp() { return {ModelKind::Exp, 1.0}; }
    static TransmissionModel pow(double delta = 1.0) { return {ModelKind::Pow, delta}; }
    static TransmissionModel ray() { return {ModelKind::Ray, 1.0}; }

    friend bool operator==(const TransmissionModel&, const TransmissionModel&) = default;
};

/// Log-density value meaning "this observation is impossible".
inline constexpr double kZeroDensity = -std::numeric_limits<double>::infinity();

inline bool is_zero_density(double log_value) noexcept {
    return std::isinf(log_value) && log_value < 0;
}

inline std::string_view model_name(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::Exp: return "exp";
        case ModelKind::Pow: return "pow";
        case ModelKind::Ray: return "ray";
    }
    return "?";
}

/// Parses `exp`, `pow` or `ray` (any case).
inline TransmissionModel parse_model(std::string_view name, double delta = 1.0) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (!(delta > 0) || !std::isfinite(delta)) throw ParameterError("delta must be a positive finite number");
    if (lower == "exp") return TransmissionModel::exp();
    if (lower == "pow") return TransmissionModel::pow(delta);
    if (lower == "ray") return TransmissionModel::ray();
    throw ParameterError("unknown transmission model '" + std::string(name) + "' (expected exp, pow or ray)");
}

namespace detail {

inline void require_rate(double alpha) {
    if (!(alpha >= 0) || !std::isfinite(alpha)) throw DomainError("transmission rate must be finite and >= 0");
}

// Smallest elapsed time at which the family has positive density.
inline double support_start(const TransmissionModel& m) noexcept {
    return m.kind == ModelKind::Pow ? m.delta : 0.0;
}

}  // namespace detail

/// ln f(t_i | t_j; alpha), or kZeroDensity outside the support or when alpha == 0.
inline double log_pdf(const TransmissionModel& m, double alpha, double t_j, double t_i) {
    detail::require_rate(alpha);
    const double dt = t_i - t_j;
    if (alpha == 0 || !(dt > detail::support_start(m))) return kZeroDensity;
    switch (m.kind) {
        case ModelKind::Exp: return std::log(alpha) - alpha * dt;
        case ModelKind::Pow: return std::log(alpha / m.delta) - (1 + alpha) * std::log(dt / m.delta);
        case ModelKind::Ray: return std::log(alpha) + std::log(dt) - alpha * dt * dt / 2;
    }
    return kZeroDensity;
}

/// Magnitude of d/d(alpha) ln S for elapsed time `dt`; ln S = -alpha * survival_weight.
/// For Pow the survival is exactly 1 until delta has elapsed, so the weight is 0 there.
inline double survival_weight(const TransmissionModel& m, double dt) noexcept {
    switch (m.kind) {
        case ModelKind::Exp: return dt;
        case ModelKind::Pow: return dt > m.delta ? std::log(dt / m.delta) : 0.0;
        case ModelKind::Ray: return dt * dt / 2;
    }
    return 0.0;
}

/// ln S(t_i | t_j; alpha). Always <= 0.
inline double log_survival(const TransmissionModel& m, double alpha, double t_j, double t_i) {
    detail::require_rate(alpha);
    if (t_i < t_j) throw DomainError("survival queried backwards in time (t_i < t_j)");
    if (alpha == 0) return 0.0;
    return -alpha * survival_weight(m, t_i - t_j);
}

/// H / alpha. Throws outside the density's support.
inline double hazard_coeff(const TransmissionModel& m, double t_j, double t_i) {
    const double dt = t_i - t_j;
    if (!(dt > detail::support_start(m))) throw DomainError("hazard queried outside the transmission support");
    switch (m.kind) {
        case ModelKind::Exp: return 1.0;
        case ModelKind::Pow: return 1.0 / dt;
        case ModelKind::Ray: return dt;
    }
    return 0.0;
}

/// H(t_i | t_j; alpha) = f / S.
inline double hazard(const TransmissionModel& m, double alpha, double t_j, double t_i) {
    detail::require_rate(alpha);
    return alpha * hazard_coeff(m, t_j, t_i);
}

/// Hazard coefficient for elapsed time `dt`, with 0 where the density vanishes.
/// This is the form the likelihood sums use.
inline double hazard_coeff_or_zero(const TransmissionModel& m, double dt) noexcept {
    if (!(dt > detail::support_start(m))) return 0.0;
    switch (m.kind) {
        case ModelKind::Exp: return 1.0;
        case ModelKind::Pow: return 1.0 / dt;
        case ModelKind::Ray: return dt;
    }
    return 0.0;
}

/// Inverse-survival sampling: returns the delay d with S(d) = u.
inline double sample_delay(const TransmissionModel& m, double alpha, double u) {
    detail::require_rate(alpha);
    if (alpha == 0) throw DomainError("a zero rate never transmits");
    if (!(u > 0 && u <= 1)) throw DomainError("uniform draw must lie in (0, 1]");
    switch (m.kind) {
        case ModelKind::Exp: return -std::log(u) / alpha;
        case ModelKind::Pow: return m.delta * std::pow(u, -1.0 / alpha);
        case ModelKind::Ray: return std::sqrt(-2.0 * std::log(u) / alpha);
    }
    return 0.0;
}

}  // namespace netrate
