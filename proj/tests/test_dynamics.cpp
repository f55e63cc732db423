#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "peakon/dynamics.hpp"
#include "peakon/error.hpp"

using namespace peakon;

namespace {

// u(q_j)^2 and -u(q_j) u_x(q_j) p_j from the pointwise superposition.
std::array<double, 4> pointwise_flow(const PeakonState& s) {
    std::array<double, 4> out{};
    for (int j = 0; j < 2; ++j) {
        const double u = evaluate_superposition(s, s.positions[j]);
        const double ux = evaluate_superposition_slope(s, s.positions[j]);
        out[j] = u * u;
        out[2 + j] = -u * ux * s.momenta[j];
    }
    return out;
}

// Composite Simpson for the energy density between kinks; the endpoints are nudged inside
// so the one-sided slope is used at the kinks.
double simpson_energy(const PeakonState& s, double lo, double hi, int n) {
    auto f = [&](double x) {
        const double u = evaluate_superposition(s, x), ux = evaluate_superposition_slope(s, x);
        return u * u + ux * ux;
    };
    const double h = (hi - lo) / n;
    const double eps = 1e-12 * (hi - lo);
    double acc = f(lo + eps) + f(hi - eps);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
    return acc * h / 3.0;
}

PeakonState random_pair(std::mt19937& rng, DomainKind d) {
    std::uniform_real_distribution<double> q(0.0, 2.0), gap(1e-3, d == DomainKind::Line ? 8.0 : 6.2),
        p(-5.0, 5.0);
    const double q1 = q(rng);
    return PeakonState{0.0, {q1, q1 + gap(rng)}, {p(rng), p(rng)}, d};
}

}  // namespace

TEST(RhsNPeakon, SingleLinePeakonTravelsAtSquaredAmplitude) {
    const auto d = rhs_n_peakon(PeakonState{0.0, {0.0}, {3.0}, DomainKind::Line});
    EXPECT_DOUBLE_EQ(d.dq[0], 9.0);
    EXPECT_DOUBLE_EQ(d.dp[0], 0.0);
}

TEST(RhsNPeakon, MatchesTwoPeakonFormOnRandomLineStates) {
    std::mt19937 rng(21);
    for (int i = 0; i < 1000; ++i) {
        const auto s = random_pair(rng, DomainKind::Line);
        const auto g = rhs_n_peakon(s);
        const auto c = rhs_2_peakon(s);
        const double v[4] = {g.dq[0], g.dq[1], g.dp[0], g.dp[1]};
        for (int k = 0; k < 4; ++k) EXPECT_NEAR(v[k], c[k], 1e-12 * std::max(1.0, std::abs(c[k])));
    }
}

TEST(RhsNPeakon, CircleHyperbolicFormMatchesKernelForm) {
    std::mt19937 rng(22);
    for (int i = 0; i < 1000; ++i) {
        const auto s = random_pair(rng, DomainKind::Circle);
        const auto g = rhs_n_peakon(s);
        const auto c = rhs_2_peakon(s);
        const auto o = pointwise_flow(s);
        const double v[4] = {g.dq[0], g.dq[1], g.dp[0], g.dp[1]};
        for (int k = 0; k < 4; ++k) {
            const double tol = 1e-12 * std::max(1.0, std::abs(o[k]));
            EXPECT_NEAR(v[k], o[k], tol);
            EXPECT_NEAR(c[k], o[k], tol);
        }
    }
}

TEST(RhsNPeakon, CircleWithThreePeakonsIsUnsupported) {
    const PeakonState s{0.0, {0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}, DomainKind::Circle};
    EXPECT_THROW(rhs_n_peakon(s), UnsupportedError);
}

TEST(RhsNPeakon, PositionsNeverMoveLeft) {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> x(-5.0, 5.0);
    for (int i = 0; i < 300; ++i) {
        PeakonState s{0.0, {x(rng), x(rng), x(rng), x(rng)}, {x(rng), x(rng), x(rng), x(rng)},
                      DomainKind::Line};
        for (double v : rhs_n_peakon(s).dq) EXPECT_GE(v, 0.0);
        const auto c = random_pair(rng, DomainKind::Circle);
        for (double v : rhs_n_peakon(c).dq) EXPECT_GE(v, 0.0);
    }
}

TEST(RhsNPeakon, RejectsMismatchedState) {
    const PeakonState s{0.0, {0.0, 1.0}, {1.0}, DomainKind::Line};
    EXPECT_THROW(rhs_n_peakon(s), ConfigError);
}

TEST(Rhs2Peakon, HandEvaluatedInitialProfile) {
    const auto s = make_initial_state(InitialProfile{}, DomainKind::Line);
    const double e = std::exp(-0.2), p1 = -5.5, p2 = 5.0;
    const auto r = rhs_2_peakon(s);
    EXPECT_NEAR(r[0], (p1 + p2 * e) * (p1 + p2 * e), 1e-14);
    EXPECT_NEAR(r[1], (p1 * e + p2) * (p1 * e + p2), 1e-14);
    EXPECT_NEAR(r[2], -p1 * p2 * (p1 + p2 * e) * e, 1e-13);
    EXPECT_NEAR(r[3], p1 * p2 * (p1 * e + p2) * e, 1e-13);
}

TEST(Rhs2Peakon, SymmetricPairSharesRates) {
    // p1 = -p2 on the line: u(q1) = -u(q2), so both positions advance at the same rate
    // and both momenta shift by the same amount.
    const PeakonState s{0.0, {-0.5, 0.5}, {-1.0, 1.0}, DomainKind::Line};
    const auto r = rhs_2_peakon(s);
    EXPECT_NEAR(r[0], r[1], 1e-15);
    EXPECT_NEAR(r[2], r[3], 1e-15);
}

TEST(Rhs2Peakon, CrossedGapThrows) {
    const PeakonState s{0.0, {1.0, 1.0}, {-1.0, 1.0}, DomainKind::Line};
    EXPECT_THROW(rhs_2_peakon(s), CollisionCrossedError);
    const PeakonState t{0.0, {1.0, 0.5}, {-1.0, 1.0}, DomainKind::Circle};
    EXPECT_THROW(rhs_2_peakon(t), CollisionCrossedError);
}

TEST(Rhs2PeakonGap, AgreesWithPositionForm) {
    std::mt19937 rng(24);
    for (auto d : {DomainKind::Line, DomainKind::Circle}) {
        for (int i = 0; i < 500; ++i) {
            const auto s = random_pair(rng, d);
            const double q = s.positions[1] - s.positions[0];
            const auto g = rhs_2_peakon_gap({s.positions[0], q, s.momenta[0], s.momenta[1]}, d);
            const auto c = rhs_2_peakon(s);
            const double scale = std::max({1.0, std::abs(c[0]), std::abs(c[1])});
            EXPECT_NEAR(g[0], c[0], 1e-13 * scale);
            EXPECT_NEAR(g[1], c[1] - c[0], 1e-12 * scale);
            EXPECT_NEAR(g[2], c[2], 1e-13 * std::max(1.0, std::abs(c[2])));
            EXPECT_NEAR(g[3], c[3], 1e-13 * std::max(1.0, std::abs(c[3])));
        }
    }
    const auto bad = rhs_2_peakon_gap({0.0, -1e-9, -1.0, 1.0}, DomainKind::Line);
    EXPECT_TRUE(std::isnan(bad[1]));
}

TEST(H1Energy, SingleLinePeakon) {
    EXPECT_NEAR(h1_energy(PeakonState{0.0, {0.3}, {1.0}, DomainKind::Line}), 2.0, 1e-15);
    EXPECT_NEAR(h1_energy(PeakonState{0.0, {0.3}, {-3.0}, DomainKind::Line}), 18.0, 1e-13);
}

TEST(H1Energy, LineMatchesSimpsonQuadrature) {
    const PeakonState s{0.0, {-0.7, 0.4, 1.9}, {-2.0, 1.5, 0.5}, DomainKind::Line};
    const double q = simpson_energy(s, -40.0, -0.7, 20000) + simpson_energy(s, -0.7, 0.4, 2000) +
                     simpson_energy(s, 0.4, 1.9, 2000) + simpson_energy(s, 1.9, 40.0, 20000);
    EXPECT_NEAR(h1_energy(s), q, 1e-9 * q);
}

TEST(H1Energy, CoincidentAntipeakonPairVanishes) {
    const PeakonState s{0.0, {0.0, 0.0}, {-2.0, 2.0}, DomainKind::Line};
    EXPECT_NEAR(h1_energy(s), 0.0, 1e-14);
}

TEST(H1Energy, CircleMatchesHyperbolicClosedForm) {
    std::mt19937 rng(25);
    for (int i = 0; i < 50; ++i) {
        const auto s = random_pair(rng, DomainKind::Circle);
        double closed = 0.0;
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                closed += s.momenta[j] * s.momenta[k] *
                          std::cosh(periodize(s.positions[j] - s.positions[k]) - kPi);
        closed *= 2.0 * std::sinh(kPi);
        EXPECT_NEAR(h1_energy(s), closed, 1e-10 * std::max(1.0, std::abs(closed)));
    }
}

TEST(H1Energy, CircleMatchesSimpsonQuadrature) {
    const PeakonState s{0.0, {1.0, 2.5}, {-1.5, 0.8}, DomainKind::Circle};
    const double q = simpson_energy(s, 1.0, 2.5, 4000) + simpson_energy(s, 2.5, 1.0 + kTwoPi, 8000);
    EXPECT_NEAR(h1_energy(s), q, 1e-10 * q);
}

TEST(MakeInitialState, DefaultProfile) {
    const auto s = make_initial_state(InitialProfile{}, DomainKind::Line);
    EXPECT_EQ(s.positions, (std::vector<double>{-0.1, 0.1}));
    EXPECT_EQ(s.momenta, (std::vector<double>{-5.5, 5.0}));
    EXPECT_DOUBLE_EQ(s.t, 0.0);
}

TEST(MakeInitialState, RejectsInvalidProfiles) {
    EXPECT_THROW(make_initial_state({0.0, 5.0, 0.5}, DomainKind::Line), ConfigError);
    EXPECT_THROW(make_initial_state({0.1, 5.0, 0.0}, DomainKind::Line), ConfigError);
    EXPECT_THROW(make_initial_state({0.25, 5.0, 0.5}, DomainKind::Circle), ConfigError);
    EXPECT_THROW(make_initial_state({0.1, -1.0, 0.5}, DomainKind::Line), ConfigError);
    EXPECT_THROW(make_initial_state({std::nan(""), 5.0, 0.5}, DomainKind::Line), ConfigError);
}

TEST(MakeInitialState, SmallBWarns) {
    std::vector<std::string> warnings;
    const auto s = make_initial_state({0.1, 0.5, 0.5}, DomainKind::Line, &warnings);
    EXPECT_EQ(s.size(), 2u);
    EXPECT_EQ(warnings.size(), 1u);
}
