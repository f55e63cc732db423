#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <queue>
#include <vector>

#include "peakon/error.hpp"

namespace peakon::numerics {

// Gauss-Legendre rule on [-1, 1], nodes from Newton iteration on P_N.
template <std::size_t N>
struct GaussLegendre {
    std::array<double, N> x{};
    std::array<double, N> w{};

    GaussLegendre() {
        for (std::size_t i = 0; i < (N + 1) / 2; ++i) {
            double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                                (static_cast<double>(N) + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (std::size_t k = 1; k <= N; ++k) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / static_cast<double>(k);
                }
                dp = static_cast<double>(N) * (z * p0 - p1) / (z * z - 1.0);
                const double dz = p0 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            x[i] = -z;
            x[N - 1 - i] = z;
            w[i] = w[N - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }

    static const GaussLegendre& get() {
        static const GaussLegendre rule;
        return rule;
    }
};

template <std::size_t N = 20, class F>
double gauss(F&& f, double a, double b) {
    const auto& r = GaussLegendre<N>::get();
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += r.w[i] * f(m + h * r.x[i]);
    return s * h;
}

// Composite rule over consecutive breakpoints.
template <std::size_t N = 20, class F>
double gauss_panels(F&& f, const std::vector<double>& breaks) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        if (breaks[i + 1] > breaks[i]) s += gauss<N>(f, breaks[i], breaks[i + 1]);
    return s;
}

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

namespace detail {
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double rk = fc * kWgk[7], rg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double s = f(c - dx) + f(c + dx);
        rk += kWgk[j] * s;
        if (j % 2 == 1) rg += kWg[j / 2] * s;
    }
    return {a, b, rk * h, std::abs((rk - rg) * h)};
}
}  // namespace detail

// Globally adaptive Gauss-Kronrod 7/15, bisecting the worst segment.
template <class F>
QuadResult adaptive_gk15(F&& f, double a, double b, double rel_tol, double abs_tol,
                         int max_intervals = 2000) {
    std::priority_queue<detail::Segment> heap;
    auto first = detail::gk15(f, a, b);
    double total = first.value, err = first.error;
    heap.push(first);
    int n = 1;
    while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (n >= max_intervals)
            throw NumericalError("adaptive quadrature did not converge: error estimate " +
                                 std::to_string(err) + " after " + std::to_string(n) +
                                 " intervals");
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        auto l = detail::gk15(f, worst.a, mid);
        auto r = detail::gk15(f, mid, worst.b);
        total += l.value + r.value - worst.value;
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        ++n;
        if (err < 0.0) err = 0.0;
    }
    // Re-sum to shed accumulated update rounding.
    double v = 0.0, e = 0.0;
    while (!heap.empty()) {
        v += heap.top().value;
        e += heap.top().error;
        heap.pop();
    }
    return {v, e, n};
}

}  // namespace peakon::numerics
