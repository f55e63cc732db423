// Antipeakon-peakon collision on the line: closed-form gap velocity against the flow.

#include <cmath>
#include <cstdio>

#include "peakon/peakon.hpp"

int main() {
    using namespace peakon;
    const InitialProfile pr{0.1, 5.0, 0.5};
    const auto params = make_params(pr, DomainKind::Line);
    IntegrateOptions opt;
    opt.gap_levels = log_gap_levels(params.q0, 1e-6, 13);
    const auto tr = integrate_to_collision(make_initial_state(pr, DomainKind::Line), {}, opt);

    std::printf("%14s %14s %14s %14s %14s\n", "t", "q", "p1", "p2", "H^1 norm^2");
    for (std::size_t i = 0; i < tr.samples.size(); ++i) {
        const auto& s = tr.samples[i];
        const auto rep = hs_norm_2peakon(s.t, tr.gaps[i], s.momenta[0], s.momenta[1], 1.0, s.domain);
        std::printf("%14.8g %14.8g %14.8g %14.8g %14.8g\n", s.t, tr.gaps[i], s.momenta[0],
                    s.momenta[1], rep.value_sq);
    }
    std::printf("collision time %.12g (quadrature %.12g)\n", tr.collision_time.value_or(NAN),
                collision_time(params, GapMode::ExactF));
    const double wT = terminal_w(params);
    std::printf("limit norm^2 4 c_1 w_T^2 = %.12g\n", 4.0 * c_s(1.0, DomainKind::Line) * wT * wT);
}
