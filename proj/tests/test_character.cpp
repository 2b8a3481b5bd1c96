// Dirichlet characters mod odd prime powers: multiplicativity, primitivity,
// Gauss-sum modulus, and the induced additive character.
#include <gtest/gtest.h>

#include "twistsum/character.hpp"

using namespace twistsum;

namespace {
std::shared_ptr<const PrimePowerModulus> mod(i64 p, i64 g) {
    return std::make_shared<const PrimePowerModulus>(p, g);
}
}  // namespace

TEST(Character, MultiplicativityExhaustive) {
    // chi(ab) = chi(a) chi(b) for every character index and all a, b
    for (auto [p, g] : std::vector<std::pair<i64, i64>>{{3, 3}, {5, 2}, {7, 1}}) {
        auto m = mod(p, g);
        const i64 q = m->q_val();
        auto roots = std::make_shared<const UnitRoots>(m->phi());
        for (i64 j = 0; j < m->phi(); j += std::max<i64>(1, m->phi() / 10)) {
            DirichletCharacter chi(m, j, roots);
            for (i64 a = 0; a < q; ++a)
                for (i64 b = 0; b < q; b += 3) {
                    cplx lhs = chi(a * b), rhs = chi(a) * chi(b);
                    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12)
                        << "p=" << p << " gamma=" << g << " j=" << j
                        << " a=" << a << " b=" << b;
                }
        }
    }
}

TEST(Character, ValuesAreUnitsOrZero) {
    auto m = mod(5, 3);
    DirichletCharacter chi(m, 7);
    for (i64 n = 0; n < m->q_val(); ++n) {
        cplx v = chi(n);
        if (n % 5 == 0)
            EXPECT_EQ(v, cplx(0, 0));
        else
            EXPECT_NEAR(std::abs(v), 1.0, 1e-14);
    }
    // periodicity
    EXPECT_EQ(chi(3), chi(3 + m->q_val()));
}

TEST(Character, PrimitivityCriterion) {
    // chi restricted to 1 + p^{gamma-1} Z is nontrivial iff primitive
    for (auto [p, g] : std::vector<std::pair<i64, i64>>{{3, 2}, {3, 4}, {5, 3}, {7, 2}}) {
        auto m = mod(p, g);
        i64 step = m->q_val() / p;  // p^{gamma-1}
        for (i64 j = 0; j < m->phi(); ++j) {
            DirichletCharacter chi(m, j);
            bool nontrivial_on_tail = false;
            for (i64 x = 1; x < p; ++x)
                if (std::abs(chi(1 + x * step) - cplx(1, 0)) > 1e-9)
                    nontrivial_on_tail = true;
            EXPECT_EQ(chi.is_primitive(), nontrivial_on_tail)
                << "p=" << p << " gamma=" << g << " j=" << j;
        }
    }
}

TEST(Character, PrimitiveCount) {
    // #primitive = phi(p^gamma) - phi(p^{gamma-1})
    auto m = mod(5, 2);
    EXPECT_EQ(i64(enumerate_primitive(m).size()), 20 - 4);
    auto m2 = mod(3, 1);
    EXPECT_EQ(i64(enumerate_primitive(m2).size()), 2 - 1);
}

TEST(Character, GaussSumModulus) {
    // |tau(chi)| = p^{gamma/2} for primitive chi (spot grid; the full grid
    // runs in the acceptance gate)
    for (auto [p, g] : std::vector<std::pair<i64, i64>>{{3, 1}, {3, 3}, {5, 2}, {11, 2}}) {
        auto m = mod(p, g);
        UnitRoots eq(m->q_val());
        double expect = std::sqrt(double(m->q_val()));
        for (const auto& chi : enumerate_primitive(m))
            EXPECT_NEAR(std::abs(chi.gauss_sum(&eq)), expect, 1e-9);
    }
}

TEST(Character, GaussSumRequiresPrimitive) {
    auto m = mod(3, 2);
    DirichletCharacter chi(m, 3);  // 3 | index, gamma >= 2: imprimitive
    ASSERT_FALSE(chi.is_primitive());
    EXPECT_THROW(chi.gauss_sum(), NotPrimitive);
}

TEST(Character, ConjugateInverts) {
    auto m = mod(7, 2);
    DirichletCharacter chi(m, 5);
    auto chib = chi.conj();
    for (i64 n = 1; n < m->q_val(); ++n) {
        if (n % 7 == 0) continue;
        EXPECT_NEAR(std::abs(chi(n) * chib(n) - cplx(1, 0)), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(chib(n) - std::conj(chi(n))), 0.0, 1e-12);
    }
}

TEST(Character, PsiAdditive) {
    // psi(x) = chi(1 + x p^{gamma-nu}) is additive mod p^nu and nontrivial
    // for primitive chi
    for (auto [p, g] : std::vector<std::pair<i64, i64>>{{3, 4}, {5, 4}, {7, 2}}) {
        auto m = mod(p, g);
        auto prim = enumerate_primitive(m);
        const auto& chi = prim[prim.size() / 3];
        for (i64 nu = 1; nu <= g / 2; ++nu) {
            i64 pnu = 1;
            for (i64 i = 0; i < nu; ++i) pnu *= p;
            bool nontrivial = false;
            for (i64 x = 0; x < pnu; ++x) {
                for (i64 y = 0; y < pnu; y += 2) {
                    cplx lhs = psi_additive(chi, nu, x + y);
                    cplx rhs = psi_additive(chi, nu, x) * psi_additive(chi, nu, y);
                    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-11);
                }
                if (std::abs(psi_additive(chi, nu, x) - cplx(1, 0)) > 1e-9)
                    nontrivial = true;
            }
            EXPECT_TRUE(nontrivial) << "p=" << p << " gamma=" << g << " nu=" << nu;
        }
    }
}

TEST(Character, SharedRootTableRejectsWrongOrder) {
    auto m = mod(3, 2);
    auto wrong = std::make_shared<const UnitRoots>(5);
    EXPECT_THROW(DirichletCharacter(m, 1, wrong), std::invalid_argument);
}
