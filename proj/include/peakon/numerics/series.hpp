#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "peakon/error.hpp"

// Truncated Taylor arithmetic and asymptotic tails used by the Sobolev sums.
namespace peakon::numerics {

using Series = std::vector<double>;

inline Series series_mul(const Series& a, const Series& b) {
    const std::size_t n = std::min(a.size(), b.size());
    Series c(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j <= k; ++j) c[k] += a[j] * b[k - j];
    return c;
}

// Coefficients of u(t)^sigma given coefficients of u with u[0] > 0.
inline Series series_pow(const Series& u, double sigma) {
    const std::size_t n = u.size();
    Series v(n, 0.0);
    if (n == 0) return v;
    if (!(u[0] > 0.0)) throw DomainError("series_pow needs a positive leading coefficient");
    v[0] = std::pow(u[0], sigma);
    for (std::size_t k = 1; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= k; ++j)
            acc += (sigma * static_cast<double>(j) - static_cast<double>(k - j)) * u[j] * v[k - j];
        v[k] = acc / (static_cast<double>(k) * u[0]);
    }
    return v;
}

// Coefficients of (a^2 + (x0 + t)^2)^sigma in t.
inline Series shifted_bracket_pow(double a, double x0, double sigma, std::size_t n) {
    Series u(n, 0.0);
    u[0] = a * a + x0 * x0;
    if (n > 1) u[1] = 2.0 * x0;
    if (n > 2) u[2] = 1.0;
    return series_pow(u, sigma);
}

// Coefficients of cos(phase + freq * t).
inline Series cos_series(double phase, double freq, std::size_t n) {
    Series c(n, 0.0);
    double scale = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        c[k] = scale * std::cos(phase + 0.5 * std::numbers::pi * static_cast<double>(k));
        scale *= freq / static_cast<double>(k + 1);
    }
    return c;
}

// Integral of (a^2 + x^2)^sigma over [X, inf), X > a, sigma < -1/2, by the binomial series.
inline double bracket_pow_tail(double a, double X, double sigma) {
    if (!(X > a)) throw DomainError("bracket_pow_tail needs X > a");
    const double ratio = (a / X) * (a / X);
    double binom = 1.0, power = 1.0, sum = 0.0;
    for (int k = 0; k < 400; ++k) {
        const double term = binom * power / (2.0 * k - 2.0 * sigma - 1.0);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        binom *= (sigma - k) / (k + 1.0);
        power *= ratio;
    }
    return sum * std::pow(X, 2.0 * sigma + 1.0);
}

// Euler-Maclaurin correction for sum_{n>=N} f(n) - integral_N^inf f, from the Taylor
// coefficients c of f at N: f(N)/2 - sum_k B_{2k}/(2k)! f^{(2k-1)}(N).
inline double euler_maclaurin_correction(const Series& c, int terms) {
    double sum = 0.5 * c[0];
    const double two_pi = 2.0 * std::numbers::pi;
    double fact = 1.0;      // (2k-1)!
    double inv_pow = 1.0;   // (2 pi)^{-2k}
    for (int k = 1; k <= terms; ++k) {
        const std::size_t m = static_cast<std::size_t>(2 * k - 1);
        if (m >= c.size()) break;
        if (k > 1) fact *= static_cast<double>(2 * k - 2) * static_cast<double>(2 * k - 1);
        inv_pow /= two_pi * two_pi;
        const double bern = 2.0 * std::riemann_zeta(2.0 * k) * inv_pow;  // |B_2k|/(2k)!
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;                   // -B_2k sign
        sum += sign * bern * fact * c[m];
    }
    return sum;
}

}  // namespace peakon::numerics
