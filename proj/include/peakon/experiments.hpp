#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "peakon/closed_form.hpp"
#include "peakon/csv.hpp"
#include "peakon/dynamics.hpp"
#include "peakon/error.hpp"
#include "peakon/integrate.hpp"
#include "peakon/kernel.hpp"
#include "peakon/sobolev.hpp"
#include "peakon/types.hpp"

namespace peakon {

struct ExperimentConfig {
    double epsilon = 0.1;
    double s = 1.0;
    DomainKind domain = DomainKind::Line;
    std::optional<InitialProfile> profile;  // nullopt: select_parameters(epsilon, s, domain)
    IntegratorConfig integrator;
    int sample_count = 200;
    std::string output_path;
};

struct PowerLawFit {
    double exponent = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::pair<double, double> window{0.0, 0.0};
};

// Least squares line through (log x, log y).
inline PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& series) {
    if (series.size() < 10) throw DataError("power-law fit needs at least 10 samples");
    double sx = 0, sy = 0;
    PowerLawFit fit;
    fit.window = {series.front().first, series.front().first};
    for (const auto& [x, y] : series) {
        if (!(x > 0.0) || !(y > 0.0)) throw DataError("power-law fit needs positive samples");
        sx += std::log(x);
        sy += std::log(y);
        fit.window.first = std::min(fit.window.first, x);
        fit.window.second = std::max(fit.window.second, x);
    }
    const double n = static_cast<double>(series.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : series) {
        const double dx = std::log(x) - mx, dy = std::log(y) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw DataError("power-law fit needs distinct abscissae");
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

inline std::string verdict_for(double s) {
    if (s > 1.25) return "inflation";
    if (s == 1.25) return "indeterminate per paper";
    return "convergence";
}

// Antipeakon-peakon data with lifespan below epsilon and H^s norm below epsilon.
// The gap satisfies 256 c_s C_s q0^{3-2s} (sinh^4 pi on the circle) <= epsilon^6, which
// bounds the Q_s part of the initial norm by epsilon^2 / 2; delta bounds the c_s part by
// epsilon^2 / 2. For s <= 1/2 the s = 1 construction is used and the H^1 norm dominates.
inline InitialProfile select_parameters(double epsilon, double s, DomainKind d) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be positive");
    if (!(s < 1.5)) throw DomainError("parameter selection is only defined for s < 3/2");
    const double se = s <= 0.5 ? 1.0 : s;
    const double c = c_s(se, d), C = estimate_Cs(se, d);
    const double scale = d == DomainKind::Line ? 1.0 : kSinhPi;
    const double delta = epsilon / (2.0 * scale * std::sqrt(2.0 * c));
    const double b = 1.0 / (delta * epsilon);
    const double s4 = scale * scale * scale * scale;
    const double q0 = std::pow(std::pow(epsilon, 6) / (256.0 * c * C * s4), 1.0 / (3.0 - 2.0 * se));
    return {0.5 * q0, b, delta};
}

// q_min used for a run: the configured value, or 1e-6 q0 when q0 is within 100 q_min.
inline double effective_q_min(double q0, double q_min) {
    return q0 < 100.0 * q_min ? 1e-6 * q0 : q_min;
}

inline std::vector<double> log_gap_levels(double q_hi, double q_lo, int count) {
    std::vector<double> lv;
    if (count < 2) return {q_lo};
    const double a = std::log(q_hi), b = std::log(q_lo);
    for (int i = 1; i < count; ++i) lv.push_back(std::exp(a + (b - a) * i / (count - 1)));
    lv.back() = q_lo;
    return lv;
}

inline SeriesRow make_row(const PeakonState& st, double gap, double s) {
    const double p1 = st.momenta[0], p2 = st.momenta[1];
    const auto rep = hs_norm_2peakon(st.t, gap, p1, p2, s, st.domain);
    return {st.t, st.positions[0], st.positions[1], p1, p2, gap, p2 - p1, p2 + p1, p1 * p2,
            h1_energy(st), rep.value_sq, rep.ratio_r};
}

struct ConservationReport {
    double max_drift = 0.0;
    std::vector<std::pair<double, double>> series;  // (t, relative drift)
};

inline ConservationReport conservation_report(const Trajectory& tr) {
    if (tr.samples.empty()) throw DataError("conservation report needs a non-empty trajectory");
    ConservationReport rep;
    const double e0 = h1_energy(tr.samples.front());
    for (const auto& st : tr.samples) {
        const double drift = std::abs(h1_energy(st) - e0) / std::abs(e0);
        rep.series.emplace_back(st.t, drift);
        rep.max_drift = std::max(rep.max_drift, drift);
    }
    return rep;
}

struct InflationResult {
    InitialProfile profile;
    double q_min = 0.0;
    std::vector<SeriesRow> rows;
    std::vector<Event> events;
    std::string verdict;
    std::optional<PowerLawFit> norm_fit;  // norm^2 against 1/q over [q_min, 100 q_min]
    std::optional<double> T;
    double w_T = 0.0;
    double q_T = 0.0;
    double h1_drift = 0.0;
};

// Integrates to collision sampling on log-spaced gap levels; the CSV is written when
// output_path is set, also for a run that stopped on a failure event.
inline InflationResult run_inflation(const ExperimentConfig& cfg) {
    if (!(cfg.s < 1.5)) throw DivergenceError("norm inflation runs need s < 3/2");
    InflationResult res;
    res.profile = cfg.profile ? *cfg.profile : select_parameters(cfg.epsilon, cfg.s, cfg.domain);
    const auto st0 = make_initial_state(res.profile, cfg.domain);
    const auto params = make_params(res.profile, cfg.domain);
    IntegratorConfig ic = cfg.integrator;
    ic.q_min = effective_q_min(params.q0, ic.q_min);
    res.q_min = ic.q_min;
    IntegrateOptions opt;
    opt.gap_levels = log_gap_levels(params.q0, ic.q_min, std::max(cfg.sample_count, 2));
    const auto tr = integrate_to_collision(st0, ic, opt);
    res.events = tr.events;
    for (std::size_t i = 0; i < tr.samples.size(); ++i)
        res.rows.push_back(make_row(tr.samples[i], tr.gaps[i], cfg.s));
    res.verdict = verdict_for(cfg.s);
    res.T = tr.collision_time;
    res.w_T = terminal_w(params);
    res.q_T = tr.terminal.positions[0];
    res.h1_drift = conservation_report(tr).max_drift;
    std::vector<std::pair<double, double>> window;
    for (const auto& r : res.rows)
        if (r.q <= 100.0 * ic.q_min * (1.0 + 1e-12)) window.emplace_back(1.0 / r.q, r.hs_sq);
    if (window.size() >= 10) res.norm_fit = fit_power_law(window);
    if (!cfg.output_path.empty()) write_series_csv(cfg.output_path, res.rows);
    return res;
}

struct DemoReport {
    double s = 1.0;
    double q_min = 0.0;
    double T = 0.0;
    double t_last = 0.0;
    double w_T = 0.0;
    double q_T = 0.0;
    double x0 = 0.0;
    double speed = 0.0;
    double pointwise_residual = 0.0;  // max |u(x, t_last) - v(x, T)| / |w_T| on 50 points
    double l2_gap = 0.0;              // ||u(t_last) - v(T)||_{L^2} / ||v(T)||_{L^2}
    double h1_gap = 0.0;              // same in H^1
    double hs_gap = 0.0;              // same in H^s
    double solitary_residual = 0.0;   // |speed - solitary_speed(w_T)|
    double h1_drift = 0.0;
    std::string verdict;
};

// Relative H^s distance between the 2-peakon state and the antipeakon v at time tv.
inline double hs_gap(const PeakonState& st, const SolitaryPeakon& v, double tv, double s) {
    PeakonState diff = st;
    diff.positions.push_back(v.position(tv));
    diff.momenta.push_back(-v.amplitude);
    const PeakonState single{tv, {v.position(tv)}, {v.amplitude}, v.domain};
    return std::sqrt(std::abs(hs_norm_direct(diff, s)) / hs_norm_direct(single, s));
}

inline DemoReport nonuniqueness_demo(const ExperimentConfig& cfg) {
    DemoReport rep;
    rep.s = cfg.s;
    const InitialProfile pr = cfg.profile ? *cfg.profile : InitialProfile{};
    const auto params = make_params(pr, cfg.domain);
    IntegratorConfig ic = cfg.integrator;
    ic.q_min = effective_q_min(params.q0, ic.q_min);
    rep.q_min = ic.q_min;
    const auto tr = integrate_to_collision(make_initial_state(pr, cfg.domain), ic);
    if (!tr.collided() || !tr.collision_time)
        throw NumericalError("non-uniqueness demo incomplete: collision not reached");
    const auto& last = tr.terminal;
    const auto tv = terminal_values(params, tr);
    rep.T = *tr.collision_time;
    rep.t_last = last.t;
    rep.w_T = tv.w_T;
    rep.q_T = tv.q_T;
    rep.speed = solitary_speed(tv.w_T, cfg.domain);
    rep.x0 = tv.q_T - rep.speed * rep.T;
    const auto v = make_solitary(tv.w_T, rep.x0, cfg.domain);
    rep.solitary_residual = std::abs(v.speed - solitary_speed(v.amplitude, v.domain));

    for (int i = 0; i < 50; ++i) {
        const double x = cfg.domain == DomainKind::Line ? tv.q_T - 2.0 + 4.0 * i / 49.0
                                                        : kTwoPi * i / 50.0;
        const double du = evaluate_superposition(last, x) - v.value(x, rep.T);
        rep.pointwise_residual = std::max(rep.pointwise_residual, std::abs(du) / std::abs(tv.w_T));
    }
    rep.l2_gap = lr_distance(last, v, 2.0, rep.T) / lr_norm(v, 2.0, rep.T);
    rep.h1_gap = hs_gap(last, v, rep.T, 1.0);
    rep.hs_gap = cfg.s < 1.5 ? hs_gap(last, v, rep.T, cfg.s) : std::nan("");
    rep.h1_drift = conservation_report(tr).max_drift;
    rep.verdict = verdict_for(cfg.s);
    return rep;
}

struct SelectionCheck {
    InitialProfile profile;
    double T = 0.0;
    double norm = 0.0;
    bool lifespan_ok = false;
    bool norm_ok = false;
};

inline SelectionCheck check_selection(double epsilon, double s, DomainKind d) {
    SelectionCheck c;
    c.profile = select_parameters(epsilon, s, d);
    const auto params = make_params(c.profile, d);
    c.T = collision_time(params, GapMode::ExactF);
    const auto st = make_initial_state(c.profile, d);
    c.norm = std::sqrt(hs_norm_2peakon(0.0, params.q0, st.momenta[0], st.momenta[1], s, d).value_sq);
    c.lifespan_ok = c.T < epsilon;
    c.norm_ok = c.norm < epsilon;
    return c;
}

// Runs jobs on at most `workers` threads; each job writes only its own outputs.
template <class Job>
void run_bounded(std::vector<Job>& jobs, int workers) {
    workers = std::max(1, workers);
    std::atomic<std::size_t> next{0};
    auto loop = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) jobs[i]();
    };
    std::vector<std::thread> pool;
    for (int k = 1; k < workers && static_cast<std::size_t>(k) < jobs.size(); ++k)
        pool.emplace_back(loop);
    loop();
    for (auto& th : pool) th.join();
}

}  // namespace peakon
