#pragma once

#include <cmath>

#include "peakon/error.hpp"
#include "peakon/types.hpp"

namespace peakon {

inline double periodize(double x) {
    if (!std::isfinite(x)) throw DomainError("periodize: non-finite input");
    double r = x - kTwoPi * std::floor(x / kTwoPi);
    if (r >= kTwoPi || r < 0.0) r = 0.0;
    return r;
}

inline const double kCoshPi = std::cosh(kPi);
inline const double kSinhPi = std::sinh(kPi);

// Normalized kernel: e^{-|x|} on the line, cosh([x]_p - pi)/cosh(pi) on the circle.
inline double kernel_value(double x, DomainKind d) {
    if (!std::isfinite(x)) throw DomainError("kernel_value: non-finite input");
    if (d == DomainKind::Line) return std::exp(-std::abs(x));
    return std::cosh(periodize(x) - kPi) / kCoshPi;
}

// Derivative of kernel_value with sgn(0) = 0 at the peak.
inline double kernel_slope(double x, DomainKind d) {
    if (!std::isfinite(x)) throw DomainError("kernel_slope: non-finite input");
    if (d == DomainKind::Line) {
        if (x == 0.0) return 0.0;
        return (x > 0.0 ? -1.0 : 1.0) * std::exp(-std::abs(x));
    }
    const double y = periodize(x);
    if (y == 0.0) return 0.0;
    return std::sinh(y - kPi) / kCoshPi;
}

// 1 - K(x) without cancellation for small x.
inline double one_minus_kernel(double x, DomainKind d) {
    if (d == DomainKind::Line) return -std::expm1(-std::abs(x));
    const double y = periodize(x);
    return 2.0 * std::sinh(kPi - 0.5 * y) * std::sinh(0.5 * y) / kCoshPi;
}

// 1 - K(x)^2.
inline double one_minus_kernel_sq(double x, DomainKind d) {
    if (d == DomainKind::Line) return -std::expm1(-2.0 * std::abs(x));
    return one_minus_kernel(x, d) * (1.0 + kernel_value(x, d));
}

// Superposition basis: e^{-|x|} on the line, cosh([x]_p - pi) (un-normalized) on the circle.
inline double basis_value(double x, DomainKind d) {
    return d == DomainKind::Line ? kernel_value(x, d) : kCoshPi * kernel_value(x, d);
}

inline double basis_slope(double x, DomainKind d) {
    return d == DomainKind::Line ? kernel_slope(x, d) : kCoshPi * kernel_slope(x, d);
}

inline double evaluate_superposition(const PeakonState& s, double x) {
    double u = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j)
        u += s.momenta[j] * basis_value(x - s.positions[j], s.domain);
    return u;
}

inline double evaluate_superposition_slope(const PeakonState& s, double x) {
    double ux = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j)
        ux += s.momenta[j] * basis_slope(x - s.positions[j], s.domain);
    return ux;
}

// Traveling peakon amplitude * basis(x - x0 - c t). The speed follows from the
// one-peakon flow: c = A^2 on the line, c = A^2 cosh^2(pi) on the circle.
struct SolitaryPeakon {
    double amplitude = 0.0;
    double speed = 0.0;
    double offset = 0.0;
    DomainKind domain = DomainKind::Line;

    double position(double t) const { return offset + speed * t; }
    double value(double x, double t) const {
        return amplitude * basis_value(x - position(t), domain);
    }
};

inline double solitary_speed(double amplitude, DomainKind d) {
    const double c = amplitude * amplitude;
    return d == DomainKind::Line ? c : c * kCoshPi * kCoshPi;
}

inline SolitaryPeakon make_solitary(double amplitude, double offset, DomainKind d) {
    if (!(amplitude != 0.0) || !std::isfinite(amplitude) || !std::isfinite(offset))
        throw ConfigError("solitary peakon needs a finite nonzero amplitude and finite offset");
    return {amplitude, solitary_speed(amplitude, d), offset, d};
}

}  // namespace peakon
