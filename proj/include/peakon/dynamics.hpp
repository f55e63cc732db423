#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "peakon/error.hpp"
#include "peakon/kernel.hpp"
#include "peakon/numerics/gauss.hpp"
#include "peakon/types.hpp"

namespace peakon {

struct InitialProfile {
    double a = 0.1;
    double b = 5.0;
    double delta = 0.5;
};

struct Derivatives {
    std::vector<double> dq;
    std::vector<double> dp;
};

// Generic n-peakon flow on the line: q_j' = u(q_j)^2, p_j' = -u(q_j) u_x(q_j) p_j.
// On the circle only n = 2 is available, in the explicit hyperbolic form.
inline Derivatives rhs_n_peakon(const PeakonState& s) {
    validate(s);
    const std::size_t n = s.size();
    Derivatives d{std::vector<double>(n), std::vector<double>(n)};
    if (s.domain == DomainKind::Circle) {
        if (n != 2) throw UnsupportedError("circle n-peakon flow is only defined for n = 2");
        const double q1 = s.positions[0], q2 = s.positions[1];
        const double p1 = s.momenta[0], p2 = s.momenta[1];
        const double y12 = periodize(q1 - q2) - kPi, y21 = periodize(q2 - q1) - kPi;
        const double sh = kSinhPi, ch = kCoshPi;
        d.dq[0] = p1 * p1 * (1.0 + sh * sh) + 2.0 * p1 * p2 * ch * std::cosh(y12) +
                  p2 * p2 * (1.0 + std::sinh(y12) * std::sinh(y12));
        d.dq[1] = p2 * p2 * (1.0 + sh * sh) + 2.0 * p1 * p2 * ch * std::cosh(y21) +
                  p1 * p1 * (1.0 + std::sinh(y21) * std::sinh(y21));
        d.dp[0] = -p1 * p2 * std::sinh(y12) * (p1 * ch + p2 * std::cosh(y12));
        d.dp[1] = -p1 * p2 * std::sinh(y21) * (p2 * ch + p1 * std::cosh(y21));
        return d;
    }
    for (std::size_t j = 0; j < n; ++j) {
        double u = 0.0, ux = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double x = s.positions[j] - s.positions[k];
            u += s.momenta[k] * kernel_value(x, DomainKind::Line);
            ux += s.momenta[k] * kernel_slope(x, DomainKind::Line);
        }
        d.dq[j] = u * u;
        d.dp[j] = -u * ux * s.momenta[j];
    }
    return d;
}

// (q1', q2', p1', p2') in the gap form with kernel e^{-q} or E(q).
inline std::array<double, 4> rhs_2_peakon(const PeakonState& s) {
    validate(s);
    if (s.size() != 2) throw ConfigError("rhs_2_peakon needs n = 2");
    const double q = s.positions[1] - s.positions[0];
    if (!(q > 0.0)) throw CollisionCrossedError("rhs_2_peakon: gap q = q2 - q1 <= 0");
    const double p1 = s.momenta[0], p2 = s.momenta[1];
    const double e = kernel_value(q, s.domain);
    if (s.domain == DomainKind::Line) {
        const double u1 = p1 + p2 * e, u2 = p1 * e + p2;
        return {u1 * u1, u2 * u2, -p1 * p2 * u1 * e, p1 * p2 * u2 * e};
    }
    const double c2 = kCoshPi * kCoshPi, es = kernel_slope(q, s.domain);
    const double u1 = p1 + p2 * e, u2 = p1 * e + p2;
    return {c2 * u1 * u1, c2 * u2 * u2, c2 * p1 * p2 * u1 * es, -c2 * p1 * p2 * u2 * es};
}

// Integration variables (q1, q, p1, p2) with q = q2 - q1 carried directly.
// Returns NaN when q <= 0 so the stepper rejects the trial step.
inline std::array<double, 4> rhs_2_peakon_gap(const std::array<double, 4>& y, DomainKind d) {
    const double q = y[1], p1 = y[2], p2 = y[3];
    if (!(q > 0.0)) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan, nan, nan};
    }
    const double e = kernel_value(q, d);
    const double u1 = p1 + p2 * e, u2 = p1 * e + p2;
    const double gap_rate = (p2 - p1) * (p2 + p1) * one_minus_kernel_sq(q, d);
    if (d == DomainKind::Line)
        return {u1 * u1, gap_rate, -p1 * p2 * u1 * e, p1 * p2 * u2 * e};
    const double c2 = kCoshPi * kCoshPi, es = kernel_slope(q, d);
    return {c2 * u1 * u1, c2 * gap_rate, c2 * p1 * p2 * u1 * es, -c2 * p1 * p2 * u2 * es};
}

// Conserved H^1 energy, integral of u^2 + u_x^2 over the domain.
inline double h1_energy(const PeakonState& s) {
    validate(s);
    const std::size_t n = s.size();
    if (s.domain == DomainKind::Line) {
        double e = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                e += s.momenta[j] * s.momenta[k] *
                     std::exp(-std::abs(s.positions[j] - s.positions[k]));
        return 2.0 * e;
    }
    // Peak-aligned composite Gauss, 64 panels per arc between consecutive kinks.
    std::vector<double> kinks;
    for (double q : s.positions) kinks.push_back(periodize(q));
    std::sort(kinks.begin(), kinks.end());
    kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
    auto density = [&](double x) {
        const double u = evaluate_superposition(s, x);
        const double ux = evaluate_superposition_slope(s, x);
        return u * u + ux * ux;
    };
    constexpr int kPanels = 64;
    double total = 0.0;
    for (std::size_t i = 0; i < kinks.size(); ++i) {
        const double lo = kinks[i];
        const double hi = (i + 1 < kinks.size()) ? kinks[i + 1] : kinks[0] + kTwoPi;
        if (!(hi > lo)) continue;
        const double w = (hi - lo) / kPanels;
        for (int k = 0; k < kPanels; ++k)
            total += numerics::gauss<10>(density, lo + k * w, lo + (k + 1) * w);
    }
    return total;
}

inline PeakonState make_initial_state(const InitialProfile& pr, DomainKind d,
                                      std::vector<std::string>* warnings = nullptr) {
    if (!(pr.a > 0.0) || !std::isfinite(pr.a)) throw ConfigError("profile needs a > 0");
    if (!(pr.delta > 0.0) || !std::isfinite(pr.delta)) throw ConfigError("profile needs delta > 0");
    if (!(2.0 * pr.a < 0.5)) throw ConfigError("profile needs 0 < 2a < 1/2");
    if (!(pr.b > 0.0) || !std::isfinite(pr.b)) throw ConfigError("profile needs b > 0");
    if (pr.b < 1.0 && warnings)
        warnings->push_back("b = " + std::to_string(pr.b) + " is below 1; large b is intended");
    return PeakonState{0.0, {-pr.a, pr.a}, {-(pr.b + pr.delta), pr.b}, d};
}

}  // namespace peakon
