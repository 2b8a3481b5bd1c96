// ============================================================================
// voronoi.hpp
//
// Two-sided numeric verification of Voronoi summation for a level-M newform
// g with trivial nebentypus (the built-in forms have M = 1):
//
//   sum_n lambda(n) e(a n / c) F(n)
//     = (eta_g / (c sqrt M)) sum_n conj(lambda(n)) e(-abar n / c)
//                                 F_check(n / (c^2 M)),
//
// gcd(a,c) = 1, gcd(c,M) = 1, abar = a^{-1} mod c, and F_check the Hankel
// transform 2 pi i^k int F(x) J_{k-1}(4 pi sqrt(xy)) dx.  eta_g is the
// Atkin-Lehner pseudo-eigenvalue, |eta_g| = 1; for level 1 the calibration
// run at c = 1 fixes it (expected +1) and it is carried as config, never
// asserted a priori.
//
// The dual sum converges super-polynomially: over the support [x_lo, x_hi]
// of F the kernel runs ~ 2 sqrt(x_hi y) - 2 sqrt(x_lo y) cycles and the
// smooth compactly supported F forces decay faster than any power of that
// count.  Truncation rule: stop after 10 consecutive terms with
// |term| < abs_tol = 1e-12; give up (TruncationNotReached) at 1e6 terms.
// ============================================================================
#pragma once

#include "cuspform.hpp"
#include "oscillatory.hpp"

namespace twistsum {

struct TruncationNotReached : std::runtime_error {
    explicit TruncationNotReached(const std::string& m) : std::runtime_error(m) {}
};

struct VoronoiInstance {
    const HeckeEigenvalueTable* form = nullptr;
    i64 a = 0, c = 1;
    std::function<double(double)> F;  // smooth, supported in [x_lo, x_hi]
    double x_lo = 0.0, x_hi = 0.0;
    cplx eta_g{1.0, 0.0};

    void validate() const {
        if (!form || c < 1 || !(x_lo > 0.0) || !(x_hi > x_lo))
            throw std::invalid_argument("VoronoiInstance: bad fields");
        if (gcd_i64(a, c) != 1) throw std::invalid_argument("VoronoiInstance: (a,c) != 1");
        if (gcd_i64(c, form->level()) != 1)
            throw std::invalid_argument("VoronoiInstance: (c,M) != 1");
        if (std::abs(std::abs(eta_g) - 1.0) > 1e-12)
            throw std::invalid_argument("VoronoiInstance: |eta_g| != 1");
    }
};

// Deterministic pairwise tree reduction (fixed association order regardless
// of how the terms were produced).
inline cplx tree_sum(std::vector<cplx> v) {
    if (v.empty()) return cplx(0.0);
    while (v.size() > 1) {
        size_t half = (v.size() + 1) / 2;
        for (size_t i = 0; i + half < v.size(); ++i) v[i] += v[i + half];
        v.resize(half);
    }
    return v[0];
}

inline cplx voronoi_lhs(const VoronoiInstance& inst) {
    inst.validate();
    i64 lo = std::max<i64>(1, i64(std::ceil(inst.x_lo)));
    i64 hi = i64(std::floor(inst.x_hi));
    if (hi > inst.form->n_max())
        throw CoefficientTableTooShort("voronoi_lhs: table ends before " + std::to_string(hi));
    std::vector<cplx> terms;
    UnitRoots ec(inst.c);
    for (i64 n = lo; n <= hi; ++n)
        terms.push_back(inst.form->lambda(n) * ec(inst.a % inst.c * (n % inst.c)) *
                        inst.F(double(n)));
    return tree_sum(std::move(terms));
}

inline cplx voronoi_rhs(const VoronoiInstance& inst, i64* n_terms_out = nullptr,
                        i64 max_terms = 1000000) {
    inst.validate();
    const double M = double(inst.form->level());
    const double cc = double(inst.c);
    const i64 abar = (inst.c == 1) ? 0 : mod_inverse(inst.a, inst.c);
    UnitRoots ec(inst.c);
    QuadOptions qo;
    qo.rel_tol = 1e-9;
    qo.abs_tol = 1e-14;
    std::vector<cplx> terms;
    int consecutive_small = 0;
    for (i64 n = 1; n <= max_terms; ++n) {
        if (n > inst.form->n_max())
            throw CoefficientTableTooShort("voronoi_rhs: table ends at " +
                                           std::to_string(inst.form->n_max()));
        double y = double(n) / (cc * cc * M);
        cplx Fch = hankel_transform(inst.F, inst.x_lo, inst.x_hi, y,
                                    int(inst.form->weight()), qo);
        cplx term = inst.form->lambda(n) * ec(mod_norm(-abar * (n % inst.c), inst.c)) * Fch;
        terms.push_back(term);
        consecutive_small = (std::abs(term) < 1e-12) ? consecutive_small + 1 : 0;
        if (consecutive_small >= 10) {
            if (n_terms_out) *n_terms_out = n;
            return inst.eta_g / (cc * std::sqrt(M)) * tree_sum(std::move(terms));
        }
    }
    throw TruncationNotReached("voronoi_rhs: no 10-term quiet stretch within " +
                               std::to_string(max_terms) + " terms");
}

}  // namespace twistsum
