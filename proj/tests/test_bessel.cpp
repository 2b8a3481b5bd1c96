// Bessel J wrapper: power-series oracle at small argument, three-term
// recurrence across the working range, known zeros, and order limits.
#include <gtest/gtest.h>

#include "twistsum/bessel.hpp"
#include "twistsum/common.hpp"

using namespace twistsum;

namespace {
// J_nu(x) = sum_m (-1)^m (x/2)^{nu+2m} / (m! (nu+m)!); fine for x <= 4.
double bessel_series(int nu, double x) {
    double term = std::pow(0.5 * x, nu);
    for (int j = 1; j <= nu; ++j) term /= double(j);
    double sum = term;
    for (int m = 1; m < 60; ++m) {
        term *= -0.25 * x * x / (double(m) * double(nu + m));
        sum += term;
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return sum;
}
}  // namespace

TEST(Bessel, SmallArgumentSeries) {
    for (int nu = 0; nu <= 15; ++nu)
        for (double x : {0.1, 0.5, 1.0, 2.0, 3.5})
            EXPECT_NEAR(bessel_J(nu, x), bessel_series(nu, x), 1e-12)
                << "nu=" << nu << " x=" << x;
}

TEST(Bessel, KnownValues) {
    EXPECT_DOUBLE_EQ(bessel_J(0, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(bessel_J(1, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(bessel_J(11, 0.0), 0.0);
    // first zero of J_0
    EXPECT_NEAR(bessel_J(0, 2.404825557695773), 0.0, 1e-13);
}

TEST(Bessel, RecurrenceRelation) {
    // J_{nu-1}(x) + J_{nu+1}(x) = (2 nu / x) J_nu(x), relative 1e-8
    for (int nu = 1; nu <= 20; ++nu)
        for (double x = 1.0; x <= 100.0; x *= 1.37) {
            double lhs = bessel_J(nu - 1, x) + bessel_J(nu + 1, x);
            double rhs = 2.0 * nu / x * bessel_J(nu, x);
            double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
            EXPECT_NEAR(lhs, rhs, 1e-8 * scale) << "nu=" << nu << " x=" << x;
        }
}

TEST(Bessel, LargeArgumentEnvelope) {
    // |J_nu(x)| <= sqrt(2/(pi x)) (1 + small) in the asymptotic regime
    for (double x : {50.0, 500.0, 5e3, 5e5})
        for (int nu : {0, 11, 15}) {
            if (x < 4.0 * nu * nu) continue;  // stay clear of the turning point
            EXPECT_LE(std::abs(bessel_J(nu, x)), 1.05 * std::sqrt(2.0 / (PI * x)))
                << "nu=" << nu << " x=" << x;
        }
}

TEST(Bessel, OrderLimits) {
    EXPECT_THROW(bessel_J(-1, 1.0), OrderTooLarge);
    EXPECT_THROW(bessel_J(201, 1.0), OrderTooLarge);
    EXPECT_NO_THROW(bessel_J(200, 10.0));
}
