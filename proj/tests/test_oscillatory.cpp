// Bessel-kernel integrals: diagonal asymptotics, Hankel transform scaling,
// and the non-stationary-phase size check.
#include <gtest/gtest.h>

#include "twistsum/oscillatory.hpp"
#include "twistsum/records.hpp"

using namespace twistsum;

TEST(IkIntegral, DiagonalAsymptoticResidual) {
    const auto cal = CalibrationData::load(default_data_dir() + "/calibration.json");
    for (double a : {0.5, 1.0, 2.0})
        for (double X : {1e3, 1e4, 1e5}) {
            cplx exact = I_k(a, a, X, 12);
            cplx main = I_k_diagonal_main(a, X, 12);
            double budget = cal.diag_C * X / std::pow(a * a * X, 0.75);
            EXPECT_LE(std::abs(exact - main), budget) << "a=" << a << " X=" << X;
        }
}

TEST(IkIntegral, SmallParameterAgainstPlainQuadrature) {
    // at tiny a, b the integrand barely oscillates; a flat fixed-panel rule
    // is an independent oracle
    const double a = 0.02, b = 0.015, X = 100.0;
    const int k = 12;
    const auto& g = gl40();
    KahanSum acc;
    const int P = 64;
    for (int p = 0; p < P; ++p) {
        double lo = 1.0 + double(p) / P, hi = 1.0 + double(p + 1) / P;
        double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        for (int i = 0; i < 40; ++i) {
            double u = c + h * g.x[size_t(i)];
            double s = std::sqrt(X * u);
            acc.add(h * g.w[size_t(i)] * X * bump_U(u) * e_of(2.0 * a * s) *
                    bessel_J(k - 1, 4.0 * PI * b * s));
        }
    }
    EXPECT_LE(std::abs(I_k(a, b, X, k) - acc.value()), 1e-10);
}

TEST(HankelTransform, ScalingRelation) {
    // with G(x) = F(c x): G_check(y) = F_check(y / c) / c
    const int k = 12;
    const double c = 2.5, y = 0.8;
    auto F = [](double x) { return bump_U(x / 20.0); };       // support [20, 40]
    auto G = [&](double x) { return F(c * x); };              // support [8, 16]
    QuadOptions qo;
    qo.abs_tol = 1e-13;
    cplx lhs = hankel_transform(G, 20.0 / c, 40.0 / c, y, k, qo);
    cplx rhs = hankel_transform(F, 20.0, 40.0, y / c, k, qo) / c;
    EXPECT_LE(std::abs(lhs - rhs), 1e-9 * (1.0 + std::abs(rhs)));
}

TEST(HankelTransform, VanishesAtZeroFrequency) {
    // J_{k-1}(0) = 0 for k >= 2, so F_check(0) = 0
    auto F = [](double x) { return bump_U(x / 10.0); };
    cplx v = hankel_transform(F, 10.0, 20.0, 0.0, 12);
    EXPECT_LE(std::abs(v), 1e-12);
}

TEST(StationaryPhase, NonStationaryBoundHolds) {
    // phase 50 x on [1,2]: |phase'| = 50, no stationary point; amplitude U
    auto amp = [](double x) { return cplx(bump_U(x), 0.0); };
    auto phase = [](double x) { return 50.0 * x; };
    // Z = max U, U' scale ~ 1/10 of the interval, Y: |phase''| = 0
    auto rep = stationary_phase_check(amp, phase, 1.0, 2.0, 49.9, 1.0, 0.05, 0.0,
                                      std::exp(-32.0 / 9.0), 1);
    EXPECT_TRUE(rep.pass);
    EXPECT_GE(rep.min_abs_phase_deriv, 49.9);
}

TEST(StationaryPhase, RejectsViolatedDerivativeBound) {
    // phase x^2 - 3x has a stationary point at x = 1.5 inside [1,2]
    auto amp = [](double) { return cplx(1.0, 0.0); };
    auto phase = [](double x) { return x * x - 3.0 * x; };
    EXPECT_THROW(
        stationary_phase_check(amp, phase, 1.0, 2.0, 0.5, 1.0, 1.0, 2.0, 1.0, 1),
        DerivativeBoundViolated);
}
