// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "peakon/experiments.hpp"

using namespace peakon;

namespace {

constexpr DomainKind kDomains[] = {DomainKind::Line, DomainKind::Circle};

int failures = 0;
double worst_drift = 0.0;  // over every trajectory integrated below

void report(int id, bool ok, const std::string& what) {
    std::printf("[%s] C%d %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Trajectory tracked(const PeakonState& s0, const IntegratorConfig& cfg, const IntegrateOptions& opt = {}) {
    auto tr = integrate_to_collision(s0, cfg, opt);
    worst_drift = std::max(worst_drift, conservation_report(tr).max_drift);
    return tr;
}

InflationResult tracked(const ExperimentConfig& cfg) {
    auto r = run_inflation(cfg);
    worst_drift = std::max(worst_drift, r.h1_drift);
    return r;
}

ExperimentConfig base_run(double s, DomainKind d) {
    ExperimentConfig cfg;
    cfg.s = s;
    cfg.domain = d;
    cfg.profile = InitialProfile{};
    return cfg;
}

void c1() {
    std::string msg = "closed-form equivalence (tol 1e-8 rel, < 10 s):";
    bool ok = true;
    for (auto d : kDomains) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto c = make_params(InitialProfile{}, d);
        IntegrateOptions opt;
        opt.gap_levels = log_gap_levels(c.q0, 1e-6, 51);
        const auto tr = tracked(make_initial_state(InitialProfile{}, d), IntegratorConfig{}, opt);
        double worst = 0.0;
        std::size_t n = 0;
        for (std::size_t i = 1; i < tr.samples.size(); ++i) {
            const auto s = to_transformed(tr.gaps[i], tr.samples[i].momenta[0], tr.samples[i].momenta[1]);
            const auto o = transformed_closed_form(s.q, c);
            worst = std::max({worst, std::abs(s.p / o.p - 1), std::abs(s.w / o.w - 1), std::abs(s.z / o.z - 1)});
            ++n;
        }
        const double secs = seconds_since(t0);
        ok = ok && tr.collided() && n == 50 && worst <= 1e-8 && secs < 10.0;
        msg += " " + to_string(d) + " samples=" + std::to_string(n) + fmt(" worst=%.2e", worst) +
               fmt(" time=%.2fs", secs);
    }
    report(1, ok, msg);
}

void c2() {
    std::string msg = "collision time (event vs quadrature tol 1e-6 rel; T <= 10/(delta sqrt(2b(b+delta)))):";
    bool ok = true;
    const InitialProfile pr{};
    const double bound = 10.0 / (pr.delta * std::sqrt(2.0 * pr.b * (pr.b + pr.delta)));
    for (auto d : kDomains) {
        const auto tr = tracked(make_initial_state(pr, d), IntegratorConfig{});
        const double tq = collision_time(make_params(pr, d), GapMode::ExactF);
        const double te = tr.collision_time.value_or(std::nan(""));
        const double rel = std::abs(te - tq) / tq;
        ok = ok && rel <= 1e-6 && tq <= bound;
        msg += " " + to_string(d) + fmt(" T=%.12g", tq) + fmt(" rel=%.2e", rel);
    }
    report(2, ok, msg + fmt(" bound=%.4g", bound));
}

void c3() {
    std::string msg = "blow-up exponents (slopes +-0.02 on [1e-6,1e-4]; |w/w_T - 1| <= 1e-3):";
    bool ok = true;
    for (auto d : kDomains) {
        const auto r = tracked(base_run(1.0, d));
        std::vector<std::pair<double, double>> p2, p1, z;
        for (const auto& row : r.rows)
            if (row.q <= 1e-4 * (1 + 1e-12)) {
                p2.emplace_back(row.q, row.p2);
                p1.emplace_back(row.q, -row.p1);
                z.emplace_back(row.q, -row.z);
            }
        const double e2 = fit_power_law(p2).exponent, e1 = fit_power_law(p1).exponent,
                     ez = fit_power_law(z).exponent;
        const double wdev = std::abs(r.rows.back().w / r.w_T - 1.0);
        ok = ok && std::abs(e2 + 0.25) <= 0.02 && std::abs(e1 + 0.25) <= 0.02 &&
             std::abs(ez + 0.5) <= 0.02 && std::isfinite(r.rows.back().w) && wdev <= 1e-3;
        msg += " " + to_string(d) + fmt(" p2=%.4f", e2) + fmt(" -p1=%.4f", e1) + fmt(" |z|=%.4f", ez) +
               fmt(" w_dev=%.3e", wdev);
    }
    report(3, ok, msg);
}

void c4() {
    std::string msg = "power-law zero times (q0=0.2, kappa=1; T in [1, 2^r] x asymptotic):";
    bool ok = true;
    double prev = 0.0;
    for (double r : {0.0, 0.25, 0.5, 0.75}) {
        const auto t = power_law_zero_time(r, 0.2, 1.0);
        const double ratio = t.quadrature / t.asymptotic;
        bool cell = ratio >= 1.0 && ratio <= std::pow(2.0, r);
        if (r == 0.0) cell = cell && t.quadrature == 0.2;
        ok = ok && cell && t.quadrature >= prev;
        prev = t.quadrature;
        msg += fmt(" r=%.2f", r) + fmt(" ratio=%.4f", ratio);
    }
    ScalarGapRhs f;
    f.kind = ScalarGapKind::PowerLaw;
    f.r = 1.0;
    const auto run = integrate_scalar_gap(0.2, f, IntegratorConfig{}, 10.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < run.t.size(); ++i)
        worst = std::max(worst, std::abs(run.q[i] - power_law_r1_solution(0.2, 1.0, run.t[i])) / run.q[i]);
    ok = ok && worst <= 1e-8 && !run.zero_time;
    report(4, ok, msg + fmt(" r=1 worst=%.2e", worst) + (run.zero_time ? " zero-event" : " no-zero-event"));
}

void c5() {
    std::string msg = "Q_s scaling (band < 3 on [1e-6,1e-2]):";
    bool ok = true;
    for (auto d : kDomains) {
        for (double s : {0.25, 0.5, 0.75, 1.0, 1.25}) {
            double lo = 1e300, hi = 0.0;
            for (int i = 0; i <= 40; ++i) {
                const double q = std::pow(10.0, -6.0 + 4.0 * i / 40.0);
                double denom = std::pow(q, 3.0 - 2.0 * s);
                if (s == 0.5) denom = q * q * std::log(1.0 / q);
                if (s == 0.25) denom = q * q;
                const double v = Q_s(q, s, d) / denom;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            ok = ok && hi / lo < 3.0;
            msg += " " + to_string(d) + fmt(":%.2f", s) + fmt("=%.3f", hi / lo);
        }
    }
    report(5, ok, msg);
}

void c6() {
    std::string msg = "norm inflation at s=1.4 (slope 0.30+-0.03, growth >= 5):";
    bool ok = true;
    for (auto d : kDomains) {
        const auto r = tracked(base_run(1.4, d));
        const double slope = r.norm_fit ? r.norm_fit->exponent : std::nan("");
        const double growth = std::sqrt(r.rows.back().hs_sq / r.rows.front().hs_sq);
        ok = ok && std::abs(slope - 0.30) <= 0.03 && growth >= 5.0;
        msg += " " + to_string(d) + fmt(" slope=%.4f", slope) + fmt(" growth=%.3f", growth);
    }
    report(6, ok, msg);
}

void c7() {
    std::string msg = "convergence at s=1 (limit within 1%, L2/H1 gaps < 5%, shrinking in q_min):";
    bool ok = true;
    for (auto d : kDomains) {
        const auto r = tracked(base_run(1.0, d));
        const double scale = d == DomainKind::Line ? 1.0 : kSinhPi * kSinhPi;
        const double lim = 4.0 * scale * c_s(1.0, d) * r.w_T * r.w_T;
        const double dev = std::abs(r.rows.back().hs_sq / lim - 1.0);
        ok = ok && dev <= 1e-2;
        double pl2 = 1e300, ph1 = 1e300;
        bool shrink = true;
        DemoReport last;
        for (double qm : {1e-4, 1e-5, 1e-6}) {
            auto cfg = base_run(1.0, d);
            cfg.integrator.q_min = qm;
            last = nonuniqueness_demo(cfg);
            worst_drift = std::max(worst_drift, last.h1_drift);
            shrink = shrink && last.l2_gap < pl2 && last.h1_gap < ph1;
            pl2 = last.l2_gap;
            ph1 = last.h1_gap;
        }
        ok = ok && shrink && last.l2_gap < 0.05 && last.h1_gap < 0.05;
        msg += " " + to_string(d) + fmt(" limit_dev=%.2e", dev) + fmt(" l2=%.4f", last.l2_gap) +
               fmt(" h1=%.4f", last.h1_gap) + (shrink ? " shrinking" : " not-shrinking");
    }
    report(7, ok, msg);
}

void c8() {
    std::string msg = "smallness construction (T < eps, norm < eps, < 60 s per cell):";
    bool ok = true;
    for (auto d : kDomains)
        for (double eps : {0.5, 0.1})
            for (double s : {0.8, 1.3}) {
                const auto t0 = std::chrono::steady_clock::now();
                const auto c = check_selection(eps, s, d);
                const double secs = seconds_since(t0);
                ok = ok && c.lifespan_ok && c.norm_ok && secs < 60.0;
                msg += " " + to_string(d) + fmt(":%.1f", eps) + fmt("/%.1f", s) + fmt(" T=%.6g", c.T) +
                       fmt(" norm=%.3g", c.norm);
            }
    report(8, ok, msg);
}

void c9() {
    IntegratorConfig cfg;
    cfg.dense_sample_dt = 0.05;
    IntegrateOptions opt;
    opt.t_end = 1.0;
    double worst = 0.0;
    for (double p : {-2.0, 0.5, 3.0}) {
        const auto tr = tracked(PeakonState{0.0, {0.1}, {p}, DomainKind::Line}, cfg, opt);
        for (const auto& s : tr.samples)
            worst = std::max({worst, std::abs(s.positions[0] - 0.1 - p * p * s.t), std::abs(s.momenta[0] - p)});
    }
    const bool ok = worst_drift <= 1e-6 && worst <= 1e-10;
    report(9, ok, "conservation (H1 drift <= 1e-6 over all runs; rigid motion <= 1e-10):" +
                      fmt(" drift=%.2e", worst_drift) + fmt(" rigid=%.2e", worst));
}

void c10() {
    int violations = 0;
    for (int i = 0; i <= 10000; ++i) {
        const double x = 0.5 * i / 10000.0;
        const double one_minus_e2 = one_minus_kernel_sq(x, DomainKind::Circle);
        if (!(3.0 * one_minus_e2 >= -std::expm1(-2.0 * x))) ++violations;
        if (!(one_minus_e2 >= x / 3.0)) ++violations;
    }
    report(10, violations == 0, "circle kernel inequalities on 10^4 grid: violations=" + std::to_string(violations));
}

}  // namespace

int main() {
    const std::vector<void (*)()> checks{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10};
    for (std::size_t i = 0; i < checks.size(); ++i) {
        try {
            checks[i]();
        } catch (const std::exception& e) {
            report(static_cast<int>(i + 1), false, std::string("raised: ") + e.what());
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, checks.size());
    return failures == 0 ? 0 : 1;
}
