// Shape checks for the nested oscillatory integrals J and L on the frozen
// calibration grid: in-range size, out-of-range negligibility, and the
// central value at equal moduli.  Constants come from the data file.
#include <gtest/gtest.h>

#include "twistsum/jintegrals.hpp"
#include "twistsum/records.hpp"

using namespace twistsum;

namespace {
// frozen calibration grid
JLParams grid_params() {
    JLParams P;
    P.N = 3000;
    P.T = 1000;
    P.p = 3;
    P.gamma = 3;
    P.beta = 2;
    P.k = 12;
    const auto cal = CalibrationData::load(default_data_dir() + "/calibration.json");
    P.x_min = cal.x_min_for(P.k);
    // X chosen so K = sqrt(N X) / h = 100 at q = 151
    const double q = 151.0, K = 100.0;
    double h = 9.0 * q;
    P.X = K * K * h * h / P.N;
    return P;
}
const i64 Q_GRID = 151;
}  // namespace

TEST(JIntegral, InRangeSizeBound) {
    const auto cal = CalibrationData::load(default_data_dir() + "/calibration.json");
    JLParams P = grid_params();
    const double bound = cal.jl_C / std::sqrt(P.T);
    // r within the allowed window |r| <~ S p^gamma q / N
    const double r_edge = P.S_scale() * std::pow(3.0, 3) * double(Q_GRID) / P.N;
    for (double y : {P.X * 1.1, P.X * 1.7})
        for (double r : {0.0, 1.0, -3.0, 0.25 * r_edge, -0.5 * r_edge}) {
            cplx J = J_integral(y, r, Q_GRID, P);
            EXPECT_LE(std::abs(J), bound) << "y/X=" << y / P.X << " r=" << r;
        }
}

TEST(JIntegral, NegligibleFarOutOfRange) {
    JLParams P = grid_params();
    const double r_edge = P.S_scale() * 27.0 * double(Q_GRID) / P.N;
    QuadOptions opt;
    opt.abs_tol = 1e-13;
    for (double r : {6.0 * r_edge, -6.0 * r_edge}) {
        cplx J = J_integral(P.X * 1.3, r, Q_GRID, P, opt);
        EXPECT_LE(std::abs(J), std::pow(P.N, -3.0)) << "r=" << r;
    }
}

TEST(LIntegral, ThreeRegimes) {
    const auto cal = CalibrationData::load(default_data_dir() + "/calibration.json");
    JLParams P = grid_params();
    const double K = std::sqrt(P.N * P.X) / P.h_of(Q_GRID);
    ASSERT_NEAR(K, 100.0, 1e-9);
    JCache cache{&P, {}, {}};
    cache.inner_opt.abs_tol = 1e-13;
    cache.inner_opt.max_panels = 200000;

    // central value, equal moduli
    cplx L0 = L_integral(0.0, 1.0, 1.0, Q_GRID, Q_GRID, P, &cache);
    EXPECT_LE(std::abs(L0), cal.jl_C / P.T);

    // intermediate regime K^2/T <~ |x| < K: |L| <= C / (T sqrt|x|)
    for (double x : {K * K / P.T, 30.0, 0.99 * K}) {
        cplx L = L_integral(x, 1.0, 1.0, Q_GRID, Q_GRID, P, &cache);
        EXPECT_LE(std::abs(L), cal.jl_C / (P.T * std::sqrt(std::abs(x)))) << "x=" << x;
    }

    // negligible regime |x| >= 2K
    cplx Lfar = L_integral(2.0 * K, 1.0, 1.0, Q_GRID, Q_GRID, P, &cache);
    EXPECT_LE(std::abs(Lfar), 1e-6);

    // a mixed (r1 != r2) configuration in the intermediate regime
    cplx Lmix = L_integral(30.0, 1.0, 2.0, Q_GRID, Q_GRID, P, &cache);
    EXPECT_LE(std::abs(Lmix), cal.jl_C / (P.T * std::sqrt(30.0)));
}
