#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "peakon/dynamics.hpp"
#include "peakon/error.hpp"
#include "peakon/kernel.hpp"
#include "peakon/numerics/gauss.hpp"
#include "peakon/types.hpp"

namespace peakon {

struct TransformedState {
    double q = 0.0;  // q2 - q1
    double p = 0.0;  // p2 - p1
    double w = 0.0;  // p2 + p1
    double z = 0.0;  // p1 p2
};

struct ClosedFormParams {
    double q0 = 0.0;
    double p0 = 0.0;
    double w0 = 0.0;
    double z1 = 0.0;
    DomainKind domain = DomainKind::Line;
};

inline TransformedState to_transformed(double q, double p1, double p2) {
    return {q, p2 - p1, p2 + p1, p1 * p2};
}

inline TransformedState to_transformed(const PeakonState& s) {
    if (s.size() != 2) throw ConfigError("transformed variables need n = 2");
    return to_transformed(s.positions[1] - s.positions[0], s.momenta[0], s.momenta[1]);
}

// tau(q) = (1 - K(q)) / (1 + K(q)); tanh(q/2) on the line.
inline double gap_tau(double q, DomainKind d) {
    if (d == DomainKind::Line) return std::tanh(0.5 * q);
    return one_minus_kernel(q, d) / (1.0 + kernel_value(q, d));
}

inline ClosedFormParams make_params(const InitialProfile& pr, DomainKind d) {
    const double q0 = 2.0 * pr.a;
    return {q0, 2.0 * pr.b + pr.delta, -pr.delta,
            pr.b * (pr.b + pr.delta) * std::sqrt(one_minus_kernel_sq(q0, d)), d};
}

// First integrals of the transformed flow, read off any state with p > 0, w < 0, z < 0.
inline ClosedFormParams params_from_state(const TransformedState& s, DomainKind d) {
    if (!(s.q > 0.0 && s.p > 0.0 && s.w < 0.0 && s.z < 0.0))
        throw DomainError("closed forms need q > 0, p > 0, w < 0, z < 0");
    return {s.q, s.p, s.w, -s.z * std::sqrt(one_minus_kernel_sq(s.q, d)), d};
}

inline void check_gap(double q, const ClosedFormParams& c) {
    if (!(q > 0.0)) throw SingularityError("closed forms are singular at q <= 0");
    if (q > c.q0) throw DomainError("closed forms are only valid for q <= q0");
}

inline TransformedState transformed_closed_form(double q, const ClosedFormParams& c) {
    check_gap(q, c);
    const double tau = gap_tau(q, c.domain), tau0 = gap_tau(c.q0, c.domain);
    const double z = -c.z1 / std::sqrt(one_minus_kernel_sq(q, c.domain));
    const double p =
        std::sqrt(c.p0 * c.p0 + 2.0 * c.z1 * (1.0 / std::sqrt(tau) - 1.0 / std::sqrt(tau0)));
    const double w = -std::sqrt(c.w0 * c.w0 + 2.0 * c.z1 * (std::sqrt(tau0) - std::sqrt(tau)));
    return {q, p, w, z};
}

// Right-hand side of the transformed (q, p, w, z) system.
inline std::array<double, 4> transformed_rhs(const std::array<double, 4>& y, DomainKind d) {
    const double q = y[0], p = y[1], w = y[2], z = y[3];
    const double e = kernel_value(q, d);
    if (d == DomainKind::Line)
        return {p * w * one_minus_kernel_sq(q, d), z * w * e * (1.0 + e),
                z * p * e * one_minus_kernel(q, d), -z * w * p * e * e};
    const double c2 = kCoshPi * kCoshPi, es = kernel_slope(q, d);
    return {c2 * p * w * one_minus_kernel_sq(q, d), -c2 * w * z * (1.0 + e) * es,
            -c2 * z * p * one_minus_kernel(q, d) * es, c2 * z * w * p * e * es};
}

// q' = -f(q) along the closed-form solution.
inline double autonomous_gap_rhs(double q, const ClosedFormParams& c) {
    const auto s = transformed_closed_form(q, c);
    const double f = s.p * s.w * one_minus_kernel_sq(q, c.domain);
    return c.domain == DomainKind::Line ? f : kCoshPi * kCoshPi * f;
}

// Rate constant of the dominating equation q' = -kappa (1 - e^{-2q})^{3/4}.
inline double dominating_kappa(const ClosedFormParams& c) {
    const double delta = -c.w0;
    const double bb = c.z1 / std::sqrt(one_minus_kernel_sq(c.q0, c.domain));  // b(b + delta)
    const double factor = c.domain == DomainKind::Line ? 2.0 : 1.0;
    return delta * std::sqrt(factor * bb) * std::pow(c.q0, 0.25);
}

inline double dominating_gap_rhs(double q, const ClosedFormParams& c) {
    if (!(q > 0.0)) throw SingularityError("dominating equation needs q > 0");
    return -dominating_kappa(c) * std::pow(-std::expm1(-2.0 * q), 0.75);
}

enum class GapMode { ExactF, DominatingG };

// Integral over (0, q_hi] of dq / f(q) (or g), with q = v^4 and composite Gauss in v.
inline double gap_time(const ClosedFormParams& c, GapMode mode, double q_hi) {
    if (!(q_hi > 0.0) || q_hi > c.q0) throw DomainError("gap_time needs 0 < q_hi <= q0");
    auto integrand = [&](double v) {
        const double q = std::min(v * v * v * v, q_hi);
        const double rate = mode == GapMode::ExactF ? autonomous_gap_rhs(q, c)
                                                    : dominating_gap_rhs(q, c);
        return 4.0 * v * v * v / (-rate);
    };
    // Adaptive in v: the integrand is nearly singular at q_hi when p0 is small.
    const double v_hi = std::pow(q_hi, 0.25);
    return numerics::adaptive_gk15(integrand, 0.0, v_hi, 1e-13, 0.0).value;
}

inline double collision_time(const ClosedFormParams& c, GapMode mode) {
    return gap_time(c, mode, c.q0);
}

struct PowerLawTimes {
    double quadrature = 0.0;
    double asymptotic = 0.0;
};

// Zero time of q' = -kappa (1 - e^{-2q})^r from q0.
inline PowerLawTimes power_law_zero_time(double r, double q0, double kappa) {
    if (!(r < 1.0)) throw DomainError("power law with r >= 1 has no finite zero");
    if (!(q0 > 0.0 && q0 < 0.5)) throw DomainError("power_law_zero_time needs q0 in (0, 1/2)");
    if (!(kappa > 0.0)) throw DomainError("power_law_zero_time needs kappa > 0");
    PowerLawTimes out;
    out.asymptotic = std::pow(q0, 1.0 - r) / ((1.0 - r) * kappa);
    if (r == 0.0) {
        out.quadrature = q0 / kappa;
        return out;
    }
    double integral = 0.0;
    if (r > 0.0) {
        // q = u^{1/(1-r)} turns the integrand into (q / (1 - e^{-2q}))^r / (1 - r).
        auto g = [&](double u) {
            if (u <= 0.0) return std::pow(0.5, r) / (1.0 - r);
            const double q = std::pow(u, 1.0 / (1.0 - r));
            return std::pow(q / -std::expm1(-2.0 * q), r) / (1.0 - r);
        };
        integral = numerics::adaptive_gk15(g, 0.0, std::pow(q0, 1.0 - r), 1e-14, 0.0).value;
    } else {
        auto g = [&](double q) { return std::pow(-std::expm1(-2.0 * q), -r); };
        integral = numerics::adaptive_gk15(g, 0.0, q0, 1e-14, 0.0).value;
    }
    out.quadrature = integral / kappa;
    return out;
}

// Closed-form solution of the r = 1 case.
inline double power_law_r1_solution(double q0, double kappa, double t) {
    return 0.5 * std::log1p(std::expm1(2.0 * q0) * std::exp(-2.0 * kappa * t));
}

inline double terminal_w(const ClosedFormParams& c) {
    return -std::sqrt(c.w0 * c.w0 + 2.0 * c.z1 * std::sqrt(gap_tau(c.q0, c.domain)));
}

struct TerminalValues {
    double w_T = 0.0;
    double q_T = 0.0;
};

// q_T is the position q1 at the last pre-collision sample.
inline TerminalValues terminal_values(const ClosedFormParams& c, std::optional<double> last_q1) {
    if (!last_q1) throw MissingDataError("q_T needs an integrated trajectory");
    return {terminal_w(c), *last_q1};
}

}  // namespace peakon
