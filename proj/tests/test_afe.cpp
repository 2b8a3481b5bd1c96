// Central values via the smoothed functional-equation expansion: log-gamma
// oracle, root number, cutoff shape, truncation stability, and an independent
// Abel-smoothed cross-check at the central point.
#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "twistsum/afe.hpp"

using namespace twistsum;

namespace {

const HeckeEigenvalueTable& shared_form() {
    static HeckeEigenvalueTable tab = HeckeEigenvalueTable::delta_form(200000);
    return tab;
}

struct Ctx {
    std::shared_ptr<PrimePowerModulus> mod;
    std::unique_ptr<DirichletCharacter> chi;
    AfeContext ctx;
    Ctx() : mod(std::make_shared<PrimePowerModulus>(5, 2)) {
        auto prim = enumerate_primitive(mod);
        chi = std::make_unique<DirichletCharacter>(prim[prim.size() / 3]);
        ctx.form = &shared_form();
        ctx.chi = chi.get();
    }
};

}  // namespace

TEST(LogGamma, KnownValues) {
    EXPECT_NEAR(std::abs(log_gamma(cplx(1.0, 0.0))), 0.0, 1e-13);
    EXPECT_NEAR(log_gamma(cplx(5.0, 0.0)).real(), std::log(24.0), 1e-13);
    EXPECT_NEAR(log_gamma(cplx(0.5, 0.0)).real(), 0.5 * std::log(PI), 1e-13);
    // |Gamma(1/2 + it)|^2 = pi / cosh(pi t)
    double t = 3.0;
    double lg2 = 2.0 * log_gamma(cplx(0.5, t)).real();
    EXPECT_NEAR(lg2, std::log(PI / std::cosh(PI * t)), 1e-12);
    // recurrence Gamma(z+1) = z Gamma(z) at a complex point
    cplx z(1.7, 0.9);
    cplx lhs = log_gamma(z + 1.0) - log_gamma(z);
    EXPECT_NEAR(std::abs(std::exp(lhs) - z), 0.0, 1e-12);
}

TEST(Afe, RootNumberUnitModulus) {
    Ctx f;
    cplx e0 = f.ctx.root_number();
    EXPECT_NEAR(std::abs(e0), 1.0, 1e-12);
    // weight 12: i^k = 1 and tau(conj chi) = chi(-1) conj(tau(chi)), so the
    // conjugate character carries the conjugate root number
    DirichletCharacter chib = f.chi->conj();
    AfeContext ctx2 = f.ctx;
    ctx2.chi = &chib;
    cplx e0b = ctx2.root_number();
    EXPECT_NEAR(std::abs(e0b - std::conj(e0)), 0.0, 1e-12);
}

TEST(Afe, CutoffShape) {
    Ctx f;
    // near 1 far below the conductor scale, negligible far above
    cplx w_small = afe_cutoff(f.ctx, 0.0, 1e-2);
    EXPECT_NEAR(std::abs(w_small - cplx(1.0)), 0.0, 1e-2);
    cplx w_mid = afe_cutoff(f.ctx, 0.0, 1.0);
    EXPECT_NEAR(std::abs(w_mid - cplx(1.0)), 0.0, 0.1);
    cplx w_large = afe_cutoff(f.ctx, 0.0, 1e6);
    EXPECT_LE(std::abs(w_large), 1e-10);
    // monotone decay across the transition (spot scale comparison)
    EXPECT_GT(std::abs(afe_cutoff(f.ctx, 0.0, 10.0)), std::abs(afe_cutoff(f.ctx, 0.0, 1000.0)));
}

TEST(Afe, TruncationStability) {
    Ctx f;
    for (double t : {0.0, 1.0}) {
        cplx a = afe_L_value(f.ctx, t, 3.0);
        cplx b = afe_L_value(f.ctx, t, 6.0);
        EXPECT_LE(std::abs(a - b), 1e-6 * (1.0 + std::abs(a))) << "t=" << t;
    }
}

TEST(Afe, AbelCrossCheckAtCentralPoint) {
    Ctx f;
    cplx l_afe = afe_L_value(f.ctx, 0.0, 3.0);
    cplx l_abel = abel_L_half(shared_form(), *f.chi, 2000.0);
    EXPECT_LE(std::abs(l_afe - l_abel), 1e-4 * (1.0 + std::abs(l_afe)))
        << "afe=" << std::abs(l_afe) << " abel=" << std::abs(l_abel);
}

TEST(Afe, TableTooShortThrows) {
    Ctx f;
    HeckeEigenvalueTable small = HeckeEigenvalueTable::delta_form(100);
    AfeContext ctx2 = f.ctx;
    ctx2.form = &small;
    EXPECT_THROW(afe_L_value(ctx2, 0.0), CoefficientTableTooShort);
    EXPECT_THROW(abel_L_half(small, *f.chi, 2000.0), CoefficientTableTooShort);
}
