#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace peakon::numerics {

// Dormand-Prince 5(4) with the standard 4th-order continuous extension.
// State is any random-access container with size() (std::array or std::vector).
template <class State>
class Dopri5 {
public:
    struct Step {
        double t0 = 0.0, h = 0.0;
        State y0, y1, k1, k7;
        State r1, r2, r3, r4, r5;  // dense output coefficients
        double err = 0.0;
        bool finite = true;
    };

    // One trial step. err is the weighted RMS error with weights atol_i + rtol*max(|y0|,|y1|).
    template <class Rhs>
    static Step attempt(Rhs& f, double t, const State& y, const State& k1, double h,
                        const State& atol, double rtol) {
        constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                         a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                         a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                         a75 = -2187.0 / 6784, a76 = 11.0 / 84;
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                         e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
        constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                         d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                         d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

        const std::size_t n = y.size();
        Step s;
        s.t0 = t;
        s.h = h;
        s.y0 = y;
        s.k1 = k1;
        State tmp = y, k2 = y, k3 = y, k4 = y, k5 = y, k6 = y;
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        k2 = f(t + c2 * h, tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        k3 = f(t + c3 * h, tmp);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = f(t + c4 * h, tmp);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = f(t + c5 * h, tmp);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] +
                     h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        k6 = f(t + h, tmp);
        State y1 = y;
        for (std::size_t i = 0; i < n; ++i)
            y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                                a76 * k6[i]);
        s.k7 = f(t + h, y1);
        s.y1 = y1;

        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                  e6 * k6[i] + e7 * s.k7[i]);
            const double sc = atol[i] + rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
            acc += (e / sc) * (e / sc);
            if (!std::isfinite(y1[i]) || !std::isfinite(s.k7[i])) s.finite = false;
        }
        s.err = std::sqrt(acc / static_cast<double>(n));
        if (!std::isfinite(s.err)) s.finite = false;

        s.r1 = y;
        s.r2 = y;
        s.r3 = y;
        s.r4 = y;
        s.r5 = y;
        for (std::size_t i = 0; i < n; ++i) {
            const double dy = y1[i] - y[i];
            const double bspl = h * k1[i] - dy;
            s.r2[i] = dy;
            s.r3[i] = bspl;
            s.r4[i] = dy - h * s.k7[i] - bspl;
            s.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                           d7 * s.k7[i]);
        }
        return s;
    }

    static State dense(const Step& s, double t) {
        const double th = (t - s.t0) / s.h, th1 = 1.0 - th;
        State y = s.r1;
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] = s.r1[i] + th * (s.r2[i] + th1 * (s.r3[i] + th * (s.r4[i] + th1 * s.r5[i])));
        return y;
    }

    // Standard controller: safety 0.9, growth clamped to [0.2, 5].
    static double next_h(double h, double err) {
        if (err == 0.0) return 5.0 * h;
        const double fac = 0.9 * std::pow(err, -0.2);
        return h * std::clamp(fac, 0.2, 5.0);
    }
};

}  // namespace peakon::numerics
