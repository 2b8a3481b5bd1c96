// ============================================================================
// afe.hpp
//
// Central values L(1/2 + it, g x chi) by the approximate functional equation.
//
// Completed L-function.  For a holomorphic newform g of weight k, level M,
// trivial nebentypus, twisted by a primitive character chi mod p^gamma with
// (p, M) = 1, the twist has conductor M p^{2 gamma} and
//
//     Lambda(s) = gamma_full(s) L(s, g x chi),
//     gamma_full(s) = (p^gamma sqrt(M) / (2 pi))^s Gamma(s + (k-1)/2),
//     Lambda(s) = eps_0 conj(Lambda(conj(1 - s))),
//
// with root number (level M = 1, trivial nebentypus)
//
//     eps_0 = i^k tau(chi)^2 / p^gamma,        |eps_0| = 1.
//
// Standard contour manipulation (mollifier G == 1, even, G(0) = 1) gives
//
//     L(1/2 + it) = sum_n lambda(n) chi(n) n^{-1/2 - it} W_{+}(n)
//                 + eps(1/2 + it) sum_n conj(lambda(n) chi(n)) n^{-1/2 + it}
//                       W_{-}(n),
//
//     W_{+-}(y) = (1/2 pi i) int_{(2)} y^{-s}
//                     gamma_full(1/2 +- it + s) / gamma_full(1/2 +- it) ds/s,
//     eps(1/2 + it) = eps_0 gamma_full(1/2 - it) / gamma_full(1/2 + it).
//
// With G == 1 the cutoff is an incomplete-gamma ratio: W(y) ~ 1 for y well
// below the functional-equation length and decays like exp(-2 pi y / C) beyond
// (C = conductor_root), so both sums truncate at a small multiple of the
// analytic conductor's square root with exponentially small tails.  The
// contour integral is evaluated by trapezoid on Re s = 2; the only decay on
// the line comes from the gamma factor (|Gamma| ~ e^{-pi |v| / 2} times a
// polynomial), so |Im s| <= 60 with step 0.05 leaves the tail and the
// trapezoid discretization error far below 1e-14 of the gamma-ratio scale.
//
// Log-gamma is the Lanczos approximation (g = 7, 9 terms), accurate to ~1e-14
// relative for Re z > 0; arguments here have Re z >= 1/2 + (k-1)/2 >= 6.
// ============================================================================
#pragma once

#include "character.hpp"
#include "cuspform.hpp"
#include "pipeline.hpp"

namespace twistsum {

// Lanczos log-gamma for Re z > 0.
inline cplx log_gamma(cplx z) {
    static const double g = 7.0;
    static const double c[9] = {0.99999999999980993,  676.5203681218851,
                                -1259.1392167224028,  771.32342877765313,
                                -176.61502916214059,  12.507343278686905,
                                -0.13857109526572012, 9.9843695780195716e-6,
                                1.5056327351493116e-7};
    if (z.real() < 0.5)  // reflection (not hit by this module's arguments)
        return std::log(PI / std::sin(PI * z)) - log_gamma(1.0 - z);
    z -= 1.0;
    cplx a = c[0];
    for (int i = 1; i < 9; ++i) a += c[i] / (z + double(i));
    cplx t = z + g + 0.5;
    return 0.5 * std::log(TWO_PI) + (z + 0.5) * std::log(t) - t + std::log(a);
}

struct AfeContext {
    const HeckeEigenvalueTable* form = nullptr;
    const DirichletCharacter* chi = nullptr;
    cplx eps0{0.0, 0.0};  // root number; computed on demand when M = 1

    double conductor_root() const {
        return double(chi->modulus().q_val()) * std::sqrt(double(form->level()));
    }
    cplx log_gamma_full(cplx s) const {
        double k = double(form->weight());
        return s * std::log(conductor_root() / TWO_PI) + log_gamma(s + (k - 1.0) / 2.0);
    }
    cplx root_number() const {
        if (eps0 != cplx(0.0)) return eps0;
        if (form->level() != 1)
            throw ParamsViolated("root number must be supplied for level > 1");
        cplx tau = chi->gauss_sum();
        double pg = double(chi->modulus().q_val());
        return i_pow(form->weight() % 4) * tau * tau / pg;
    }
};

// W_{+-}(y): the Mellin cutoff above, with sign carried in t's sign.
inline cplx afe_cutoff(const AfeContext& ctx, double t, double y) {
    const double sigma = 2.0, v_max = 60.0, dv = 0.05;
    const cplx lg_half = ctx.log_gamma_full(cplx(0.5, t));
    KahanSum sum;
    for (double v = -v_max; v <= v_max + 1e-12; v += dv) {
        cplx s(sigma, v);
        cplx integrand =
            std::exp(-s * std::log(y) + ctx.log_gamma_full(cplx(0.5, t) + s) - lg_half) /
            s;
        sum.add(integrand);
    }
    return sum.value() * dv / TWO_PI;  // ds = i dv; 1/(2 pi i) * i dv = dv/(2 pi)
}

inline cplx afe_L_value(const AfeContext& ctx, double t, double truncation_mult = 3.0) {
    const HeckeEigenvalueTable& f = *ctx.form;
    const DirichletCharacter& chi = *ctx.chi;
    const double C = ctx.conductor_root();  // sqrt(analytic conductor) / (1+|t|) scale
    const double k = double(f.weight());
    const double n_stop =
        truncation_mult * C * (std::abs(t) + (k + 1.0) / 2.0) / TWO_PI * 1.5 + 50.0;
    if (i64(n_stop) > f.n_max())
        throw CoefficientTableTooShort("afe_L_value: need lambda up to " +
                                       std::to_string(i64(n_stop)));
    cplx eps_t = ctx.root_number() *
                 std::exp(ctx.log_gamma_full(cplx(0.5, -t)) - ctx.log_gamma_full(cplx(0.5, t)));
    KahanSum first, second;
    for (i64 n = 1; n <= i64(n_stop); ++n) {
        cplx ch = chi(n);
        if (ch == cplx(0.0)) continue;
        double lam = f.lambda(n);
        cplx nits = std::exp(cplx(0.0, -t * std::log(double(n))));
        double rn = 1.0 / std::sqrt(double(n));
        first.add(lam * ch * rn * nits * afe_cutoff(ctx, t, double(n)));
        second.add(lam * std::conj(ch) * rn * std::conj(nits) *
                   afe_cutoff(ctx, -t, double(n)));
    }
    return first.value() + eps_t * second.value();
}

// Slow independent check at t = 0: Abel-smoothed Dirichlet series
//   A(Y) = sum lambda(n) chi(n) n^{-1/2} e^{-n/Y} = L(1/2) + a/Y + O(Y^{-2}),
// so 2 A(2Y) - A(Y) = L(1/2) + O(Y^{-2}).
inline cplx abel_L_half(const HeckeEigenvalueTable& f, const DirichletCharacter& chi,
                        double Y) {
    auto smoothed = [&](double YY) {
        i64 n_stop = i64(42.0 * YY);
        if (n_stop > f.n_max())
            throw CoefficientTableTooShort("abel_L_half: need lambda up to " +
                                           std::to_string(n_stop));
        KahanSum s;
        for (i64 n = 1; n <= n_stop; ++n) {
            cplx ch = chi(n);
            if (ch == cplx(0.0)) continue;
            s.add(f.lambda(n) * ch * std::exp(-double(n) / YY) / std::sqrt(double(n)));
        }
        return s.value();
    };
    return 2.0 * smoothed(2.0 * Y) - smoothed(Y);
}

}  // namespace twistsum
