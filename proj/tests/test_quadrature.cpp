// Oscillatory quadrature against closed forms: linear phases, linear phases
// with polynomial amplitude, exponential damping, and Fresnel (quadratic
// phase) cases with a power-series oracle.  Also checks that the returned
// error estimate dominates the true error on every closed-form case.
#include <gtest/gtest.h>

#include "twistsum/quadrature.hpp"

using namespace twistsum;

namespace {

constexpr cplx I2PI(0.0, TWO_PI);

// int_a^b e(w x) dx
cplx linear_exact(double w, double a, double b) {
    return (e_of(w * b) - e_of(w * a)) / (I2PI * w);
}

// int_0^b x e(w x) dx  (integration by parts)
cplx linear_x_exact(double w, double b) {
    return b * e_of(w * b) / (I2PI * w) - (e_of(w * b) - 1.0) / ((I2PI * w) * (I2PI * w));
}

// int_0^b e^{-x} e(w x) dx
cplx damped_exact(double w, double b) {
    cplx s = cplx(-1.0, TWO_PI * w);
    return (std::exp(s * b) - 1.0) / s;
}

// Fresnel C(x) + i S(x) = int_0^x exp(i pi t^2 / 2) dt by power series;
// accurate to ~1e-10 for x <= 3 in double precision.
cplx fresnel_series(double x) {
    const cplx c = cplx(0.0, PI / 2.0) * x * x;
    cplx a(1.0);  // (i pi/2 x^2)^n / n!
    cplx sum(0.0);
    for (int n = 0; n < 200; ++n) {
        cplx term = a * (x / double(2 * n + 1));
        sum += term;
        if (n > 5 && std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
        a *= c / double(n + 1);
    }
    return sum;
}

// int_0^b e(w x^2) dx = (1 / (2 sqrt w)) * Fresnel(2 b sqrt w)
cplx fresnel_exact(double w, double b) {
    double s = std::sqrt(w);
    return fresnel_series(2.0 * b * s) / (2.0 * s);
}

struct Case {
    std::function<cplx(double)> f;
    std::function<double(double)> freq;
    double a, b;
    cplx exact;
    std::string name;
};

std::vector<Case> closed_form_cases() {
    std::vector<Case> cs;
    for (double w : {1.0, 5.5, 40.0, 333.0, 2000.0}) {
        cs.push_back({[w](double x) { return e_of(w * x); },
                      [w](double) { return w; }, 0.0, 1.0, linear_exact(w, 0.0, 1.0),
                      "linear w=" + std::to_string(w)});
        cs.push_back({[w](double x) { return x * e_of(w * x); },
                      [w](double) { return w; }, 0.0, 1.0, linear_x_exact(w, 1.0),
                      "linear_x w=" + std::to_string(w)});
        cs.push_back({[w](double x) { return std::exp(-x) * e_of(w * x); },
                      [w](double) { return w; }, 0.0, 30.0, damped_exact(w, 30.0),
                      "damped w=" + std::to_string(w)});
    }
    for (double w : {1.0, 4.0, 16.0}) {
        double b = 1.4 / std::sqrt(w);  // keep the series oracle accurate
        cs.push_back({[w](double x) { return e_of(w * x * x); },
                      [w](double x) { return 2.0 * w * std::abs(x) + 1.0; }, 0.0, b,
                      fresnel_exact(w, b), "fresnel w=" + std::to_string(w)});
    }
    // shifted interval
    cs.push_back({[](double x) { return e_of(7.25 * x); },
                  [](double) { return 7.25; }, 2.0, 5.0, linear_exact(7.25, 2.0, 5.0),
                  "linear shifted"});
    cs.push_back({[](double x) { return e_of(-11.0 * x); },
                  [](double) { return 11.0; }, -1.0, 1.0, linear_exact(-11.0, -1.0, 1.0),
                  "negative frequency"});
    return cs;
}

}  // namespace

TEST(GaussLegendre, PolynomialExactness) {
    // an n-point rule integrates degree 2n-1 exactly
    const auto& g = gl20();
    for (int d = 0; d <= 39; ++d) {
        double s = 0;
        for (int i = 0; i < 20; ++i) s += g.w[size_t(i)] * std::pow(g.x[size_t(i)], d);
        double exact = (d % 2 == 0) ? 2.0 / (d + 1) : 0.0;
        EXPECT_NEAR(s, exact, 1e-13) << "degree " << d;
    }
}

TEST(Quadrature, ClosedFormSuite) {
    auto cases = closed_form_cases();
    ASSERT_GE(cases.size(), 20u);
    QuadOptions opts;
    opts.max_panels = 60000;  // the w=2000 damped case needs > 20000 initial panels
    for (const auto& c : cases) {
        auto res = integrate_oscillatory(c.f, c.a, c.b, c.freq, opts);
        double err = std::abs(res.value - c.exact);
        EXPECT_LE(err, 1e-7 * (1.0 + std::abs(c.exact))) << c.name;
        // the reported estimate must dominate the true error
        EXPECT_LE(err, res.error_estimate + 1e-13) << c.name;
    }
}

TEST(Quadrature, AmpPhaseWrapper) {
    auto res = integrate_amp_phase([](double) { return cplx(1.0); },
                                   [](double x) { return 55.0 * x; }, 0.0, 1.0);
    EXPECT_LE(std::abs(res.value - linear_exact(55.0, 0.0, 1.0)), 1e-8);
}

TEST(Quadrature, EmptyAndDegenerateIntervals) {
    auto res = integrate_oscillatory([](double) { return cplx(1.0); }, 1.0, 1.0, nullptr);
    EXPECT_EQ(res.value, cplx(0.0));
    auto res2 = integrate_oscillatory([](double) { return cplx(1.0); }, 2.0, 1.0, nullptr);
    EXPECT_EQ(res2.value, cplx(0.0));
}

TEST(Quadrature, BudgetExceededThrows) {
    QuadOptions opt;
    opt.max_panels = 4;
    auto f = [](double x) { return e_of(5000.0 * x); };
    auto freq = [](double) { return 5000.0; };
    EXPECT_THROW(integrate_oscillatory(f, 0.0, 1.0, freq, opt), BudgetExceeded);
}
