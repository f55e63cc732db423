#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "peakon/closed_form.hpp"
#include "peakon/dynamics.hpp"
#include "peakon/error.hpp"
#include "peakon/numerics/dopri5.hpp"
#include "peakon/types.hpp"

namespace peakon {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double q_min = 1e-6;
    long long max_steps = 10'000'000;
    std::optional<double> dense_sample_dt;  // nullopt: record every accepted step
};

inline void validate(const IntegratorConfig& c) {
    if (!(c.abs_tol > 0.0 && c.abs_tol <= c.rel_tol && c.rel_tol < 1.0))
        throw ConfigError("integrator needs 0 < abs_tol <= rel_tol < 1");
    if (!(c.q_min > 0.0)) throw ConfigError("integrator needs q_min > 0");
    if (c.max_steps <= 0) throw ConfigError("integrator needs max_steps > 0");
    if (c.dense_sample_dt && !(*c.dense_sample_dt > 0.0))
        throw ConfigError("dense_sample_dt must be positive");
}

enum class EventKind { Collision, StepLimit, Blowup };

inline std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::Collision: return "collision";
        case EventKind::StepLimit: return "step_limit";
        case EventKind::Blowup: return "blowup";
    }
    return "unknown";
}

struct Event {
    EventKind kind = EventKind::Collision;
    double t = 0.0;
};

struct IntegrateOptions {
    double t_end = std::numeric_limits<double>::infinity();
    std::vector<double> gap_levels;  // if set, sample only where q crosses these values
};

namespace detail {

template <class State>
struct GapRun {
    std::vector<std::pair<double, State>> samples;
    std::optional<Event> event;
    long long steps = 0;
};

template <class State>
double weighted_norm(const State& v, const State& scale) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += (v[i] / scale[i]) * (v[i] / scale[i]);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

// Adaptive DOPRI5 run that stops when gap(y) <= q_min, at t_end, or on a failure event.
// Gap-level crossings are located by bisection on the dense output, then the state there
// is recomputed with a fresh step from the start of the accepted step.
template <class State, class Rhs, class Gap>
GapRun<State> run_to_gap(const State& y0, double t0, Rhs rhs, Gap gap, const State& atol,
                         const IntegratorConfig& cfg, const IntegrateOptions& opt) {
    using RK = numerics::Dopri5<State>;
    GapRun<State> run;
    const double q_min = cfg.q_min;
    std::vector<double> levels;
    for (double l : opt.gap_levels)
        if (l > q_min && l < gap(y0)) levels.push_back(l);
    std::sort(levels.begin(), levels.end(), std::greater<>());
    const bool level_mode = !opt.gap_levels.empty();
    std::size_t next_level = 0;

    double t = t0;
    State y = y0;
    State k1 = rhs(t, y);
    run.samples.emplace_back(t, y);

    State scale = y;
    for (std::size_t i = 0; i < y.size(); ++i) scale[i] = atol[i] + cfg.rel_tol * std::abs(y[i]);
    const double d0 = weighted_norm(y, scale), d1 = weighted_norm(k1, scale);
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    if (std::isfinite(opt.t_end)) h = std::min(h, opt.t_end - t);

    double next_grid = cfg.dense_sample_dt ? t0 + *cfg.dense_sample_dt : 0.0;
    auto fresh = [&](const typename RK::Step& st, double ts) {
        if (ts <= st.t0) return st.y0;
        if (ts >= st.t0 + st.h) return st.y1;
        return RK::attempt(rhs, st.t0, st.y0, st.k1, ts - st.t0, atol, cfg.rel_tol).y1;
    };
    auto locate = [&](const typename RK::Step& st, double level) {
        double lo = st.t0, hi = st.t0 + st.h;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const double g = gap(RK::dense(st, mid));
            if (std::abs(g - level) <= 1e-12 * level) return mid;
            (g > level ? lo : hi) = mid;
        }
        return hi;
    };

    while (true) {
        if (run.steps >= cfg.max_steps) {
            run.event = Event{EventKind::StepLimit, t};
            break;
        }
        const double h_floor = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
        if (std::isfinite(opt.t_end) && t + h > opt.t_end) h = opt.t_end - t;
        auto st = RK::attempt(rhs, t, y, k1, h, atol, cfg.rel_tol);
        if (!st.finite || st.err > 1.0) {
            h = st.finite ? std::min(RK::next_h(h, st.err), 0.9 * h) : 0.25 * h;
            if (h < h_floor) {
                run.event = Event{EventKind::Blowup, t};
                break;
            }
            continue;
        }
        ++run.steps;
        const double t1 = t + h;

        // Level crossings inside this step, then the collision threshold.
        bool collided = false;
        while (next_level < levels.size() && gap(st.y1) <= levels[next_level]) {
            const double ts = locate(st, levels[next_level]);
            run.samples.emplace_back(ts, fresh(st, ts));
            ++next_level;
        }
        if (gap(st.y1) <= q_min) {
            const double ts = locate(st, q_min);
            State ys = fresh(st, ts);
            if (!run.samples.empty() && ts <= run.samples.back().first) run.samples.pop_back();
            run.samples.emplace_back(ts, ys);
            run.event = Event{EventKind::Collision, ts};
            collided = true;
        }
        if (collided) break;

        if (!level_mode) {
            if (cfg.dense_sample_dt) {
                while (next_grid <= t1) {
                    run.samples.emplace_back(next_grid, fresh(st, next_grid));
                    next_grid = t0 + (std::round((next_grid - t0) / *cfg.dense_sample_dt) + 1.0) *
                                         *cfg.dense_sample_dt;
                }
            } else {
                run.samples.emplace_back(t1, st.y1);
            }
        }

        bool overflow = false;
        for (std::size_t i = 0; i < st.y1.size(); ++i)
            if (std::abs(st.y1[i]) > 1e150) overflow = true;
        t = t1;
        y = st.y1;
        k1 = st.k7;
        if (overflow) {
            run.event = Event{EventKind::Blowup, t};
            break;
        }
        if (std::isfinite(opt.t_end) && t >= opt.t_end) break;
        h = RK::next_h(h, st.err);
    }
    if (run.samples.back().first < t) run.samples.emplace_back(t, y);
    return run;
}

}  // namespace detail

struct Trajectory {
    std::vector<PeakonState> samples;
    std::vector<double> gaps;  // q2 - q1 carried without cancellation (n = 2 only)
    std::vector<Event> events;
    PeakonState terminal;
    std::optional<double> collision_time;  // event time plus quadrature below q_min
    long long steps = 0;

    bool collided() const {
        for (const auto& e : events)
            if (e.kind == EventKind::Collision) return true;
        return false;
    }
};

// Integrates a peakon state until the gap reaches q_min. The 2-peakon case carries
// (q1, q, p1, p2) so that small gaps keep full relative precision; other line
// configurations use the generic flow with the smallest neighbour distance as gap.
inline Trajectory integrate_to_collision(const PeakonState& s0, const IntegratorConfig& cfg,
                                         const IntegrateOptions& opt = {}) {
    validate(s0);
    validate(cfg);
    const DomainKind d = s0.domain;
    Trajectory tr;
    if (s0.size() == 2) {
        const double q0 = s0.positions[1] - s0.positions[0];
        if (!(q0 > cfg.q_min)) throw DomainError("initial gap must exceed q_min");
        std::array<double, 4> y0{s0.positions[0], q0, s0.momenta[0], s0.momenta[1]};
        auto rhs = [d](double, const std::array<double, 4>& y) { return rhs_2_peakon_gap(y, d); };
        auto gap = [](const std::array<double, 4>& y) { return y[1]; };
        const std::array<double, 4> atol{cfg.abs_tol, cfg.abs_tol * cfg.q_min, cfg.abs_tol,
                                         cfg.abs_tol};
        auto run = detail::run_to_gap(y0, s0.t, rhs, gap, atol, cfg, opt);
        for (const auto& [t, y] : run.samples) {
            tr.samples.push_back(PeakonState{t, {y[0], y[0] + y[1]}, {y[2], y[3]}, d});
            tr.gaps.push_back(y[1]);
        }
        if (run.event) tr.events.push_back(*run.event);
        tr.steps = run.steps;
        tr.terminal = tr.samples.back();
        if (tr.collided()) {
            const auto ts = to_transformed(tr.gaps.back(), tr.terminal.momenta[0],
                                           tr.terminal.momenta[1]);
            if (ts.p > 0.0 && ts.w < 0.0 && ts.z < 0.0) {
                const auto params = params_from_state(ts, d);
                tr.collision_time = tr.terminal.t + gap_time(params, GapMode::ExactF, ts.q);
            }
        }
        return tr;
    }
    if (d == DomainKind::Circle) (void)rhs_n_peakon(s0);  // throws UnsupportedError
    const std::size_t n = s0.size();
    if (n == 1 && !std::isfinite(opt.t_end))
        throw ConfigError("a single peakon never collides; pass a finite t_end");
    std::vector<double> y0(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        y0[j] = s0.positions[j];
        y0[n + j] = s0.momenta[j];
    }
    auto unpack = [n, d](double t, const std::vector<double>& y) {
        PeakonState s{t, std::vector<double>(y.begin(), y.begin() + n),
                      std::vector<double>(y.begin() + n, y.end()), d};
        return s;
    };
    auto rhs = [&](double t, const std::vector<double>& y) {
        std::vector<double> out(2 * n, std::numeric_limits<double>::quiet_NaN());
        for (double v : y)
            if (!std::isfinite(v)) return out;
        const auto der = rhs_n_peakon(unpack(t, y));
        for (std::size_t j = 0; j < n; ++j) {
            out[j] = der.dq[j];
            out[n + j] = der.dp[j];
        }
        return out;
    };
    auto gap = [n](const std::vector<double>& y) {
        if (n < 2) return std::numeric_limits<double>::infinity();
        std::vector<double> q(y.begin(), y.begin() + n);
        std::sort(q.begin(), q.end());
        double g = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j + 1 < n; ++j) g = std::min(g, q[j + 1] - q[j]);
        return g;
    };
    if (!(gap(y0) > cfg.q_min)) throw DomainError("initial gap must exceed q_min");
    const std::vector<double> atol(2 * n, cfg.abs_tol);
    IntegrateOptions generic = opt;
    generic.gap_levels.clear();
    auto run = detail::run_to_gap(y0, s0.t, rhs, gap, atol, cfg, generic);
    for (const auto& [t, y] : run.samples) tr.samples.push_back(unpack(t, y));
    if (run.event) tr.events.push_back(*run.event);
    tr.steps = run.steps;
    tr.terminal = tr.samples.back();
    return tr;
}

inline TerminalValues terminal_values(const ClosedFormParams& c, const Trajectory& tr) {
    if (tr.samples.empty()) return terminal_values(c, std::nullopt);
    return terminal_values(c, tr.terminal.positions.at(0));
}

struct TransformedRun {
    std::vector<double> t;
    std::vector<TransformedState> states;
    std::optional<Event> event;
};

// Direct integration of the (q, p, w, z) system, sampled at gap levels and at q_min.
inline TransformedRun integrate_transformed(const TransformedState& s0, DomainKind d,
                                            const IntegratorConfig& cfg,
                                            const std::vector<double>& gap_levels) {
    validate(cfg);
    if (!(s0.q > cfg.q_min)) throw DomainError("initial gap must exceed q_min");
    std::array<double, 4> y0{s0.q, s0.p, s0.w, s0.z};
    auto rhs = [d](double, const std::array<double, 4>& y) {
        if (!(y[0] > 0.0)) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            return std::array<double, 4>{nan, nan, nan, nan};
        }
        return transformed_rhs(y, d);
    };
    auto gap = [](const std::array<double, 4>& y) { return y[0]; };
    const std::array<double, 4> atol{cfg.abs_tol * cfg.q_min, cfg.abs_tol, cfg.abs_tol,
                                     cfg.abs_tol};
    IntegrateOptions opt;
    opt.gap_levels = gap_levels;
    if (opt.gap_levels.empty()) opt.gap_levels.push_back(cfg.q_min);
    auto run = detail::run_to_gap(y0, 0.0, rhs, gap, atol, cfg, opt);
    TransformedRun out;
    for (const auto& [t, y] : run.samples) {
        out.t.push_back(t);
        out.states.push_back({y[0], y[1], y[2], y[3]});
    }
    out.event = run.event;
    return out;
}

enum class ScalarGapKind { AutonomousF, DominatingG, PowerLaw };

struct ScalarGapRhs {
    ScalarGapKind kind = ScalarGapKind::AutonomousF;
    ClosedFormParams params;  // AutonomousF, DominatingG
    double r = 0.0;           // PowerLaw
    double kappa = 1.0;       // PowerLaw
};

struct ScalarGapResult {
    std::vector<double> t;
    std::vector<double> q;
    std::optional<Event> event;
    std::optional<double> zero_time;  // hitting time of q = 0
};

inline ScalarGapResult integrate_scalar_gap(double q0, const ScalarGapRhs& f,
                                            const IntegratorConfig& cfg,
                                            double t_end = std::numeric_limits<double>::infinity()) {
    validate(cfg);
    if (!(q0 > cfg.q_min)) throw DomainError("initial gap must exceed q_min");
    if (f.kind == ScalarGapKind::PowerLaw && f.r >= 1.0 && !std::isfinite(t_end))
        throw DomainError("power law with r >= 1 has no finite zero; pass a finite horizon");
    auto rate = [&](double q) {
        if (!(q > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        switch (f.kind) {
            case ScalarGapKind::AutonomousF: return autonomous_gap_rhs(std::min(q, f.params.q0), f.params);
            case ScalarGapKind::DominatingG: return dominating_gap_rhs(q, f.params);
            case ScalarGapKind::PowerLaw: return -f.kappa * std::pow(-std::expm1(-2.0 * q), f.r);
        }
        return 0.0;
    };
    std::array<double, 1> y0{q0};
    auto rhs = [&](double, const std::array<double, 1>& y) { return std::array<double, 1>{rate(y[0])}; };
    auto gap = [](const std::array<double, 1>& y) { return y[0]; };
    const std::array<double, 1> atol{cfg.abs_tol * cfg.q_min};
    IntegrateOptions opt;
    opt.t_end = t_end;
    // For r >= 1 the gap never vanishes, so q_min is not a stopping level; only the horizon is.
    IntegratorConfig run_cfg = cfg;
    if (f.kind == ScalarGapKind::PowerLaw && f.r >= 1.0)
        run_cfg.q_min = std::numeric_limits<double>::denorm_min();
    auto run = detail::run_to_gap(y0, 0.0, rhs, gap, atol, run_cfg, opt);
    ScalarGapResult out;
    for (const auto& [t, y] : run.samples) {
        out.t.push_back(t);
        out.q.push_back(y[0]);
    }
    out.event = run.event;
    if (run.event && run.event->kind == EventKind::Collision) {
        const double qe = out.q.back();
        double rest = 0.0;
        switch (f.kind) {
            case ScalarGapKind::AutonomousF: rest = gap_time(f.params, GapMode::ExactF, qe); break;
            case ScalarGapKind::DominatingG: rest = gap_time(f.params, GapMode::DominatingG, qe); break;
            case ScalarGapKind::PowerLaw: rest = power_law_zero_time(f.r, qe, f.kappa).quadrature; break;
        }
        out.zero_time = run.event->t + rest;
    }
    return out;
}

}  // namespace peakon
