// ============================================================================
// expsums.hpp
//
// Exact complex evaluation of the finite exponential / character sums:
//
//  * Kloosterman sums  S(r,n;c) = sum*_{a mod c} e((a r + abar n)/c),
//    with a table-backed evaluator using the twisted multiplicativity
//        S(m,n;uv) = S(m vbar, n vbar; u) * S(m ubar, n ubar; v),  (u,v)=1,
//    and, inside a prime power p^j, the reductions
//        S(x,y;p^j) = S(1, xy; p^j)            if p does not divide x or y,
//        S(px,py;p^j) = p * S(x,y;p^(j-1)).
//
//  * The twisted Kloosterman average ("C sum"), for chi primitive mod p^gamma,
//    c = p^alpha q^tau, d = p^gamma q^tau, (q,p)=1:
//
//        C_chi(n,r,c,d) = (1/d) sum_{b mod d} chi(b) S(b,n;c) e(r b/d),
//
//    together with its reciprocity-reduced closed form
//
//        C_chi(n,r,p^a q,p^g q)
//          = (chi(q) tau(chi)/p^g) * e(-p^g pbar^(2a) rbar n / q)
//            * sum*_{a mod p^a} chibar(r + a p^(g-a)) e( inv(aq) n / p^a )
//
//    (tau=1; the tau=0 variant drops the q-factors).  The inner normalized
//    a-sum is exposed separately as Calpha(n,r,q).
//
//  * The Cauchy-square character sum ("E sum")
//
//        E(n; r1,r2,q1,q2)
//          = (1/(p^a q1 q2)) sum_{b mod p^a q1 q2}
//                Calpha(b,r1,q1) conj(Calpha(b,r2,q2)) e(n b / (p^a q1 q2)),
//
//    its single-a-sum closed form gated by the congruence
//        p^(g-a) (r2bar q1 - r1bar q2) + n == 0  (mod q1 q2),
//    the exact evaluation at n == 0 (mod p^a), and the bound for
//    n != 0 (mod p^a).
//
//  * The helper sums over a1 / a0 mod p^nu with chi(u + v w a p^(gamma-nu))
//    arguments (full, unit, and quadratic Gauss-type variants).
//
// Brute-force paths are written directly from the defining multiple sums and
// serve as oracles; fast paths implement the closed forms.  Where the closed
// form's inner inverse inv(abar q2 + n) does not exist mod p, the term is
// dropped -- this matches the brute-force value (the dropped term corresponds
// to an empty inner congruence class); the count of dropped terms is
// reported through an optional out-parameter.
// ============================================================================
#pragma once

#include <optional>

#include "character.hpp"
#include "common.hpp"
#include "modular.hpp"

namespace twistsum {

struct PreconditionViolated : std::domain_error {
    explicit PreconditionViolated(const std::string& msg) : std::domain_error(msg) {}
};

inline i64 ipow(i64 b, i64 e) {
    i64 r = 1;
    for (i64 i = 0; i < e; ++i) r *= b;
    return r;
}

// ----------------------------------------------------------------------------
// Kloosterman sums
// ----------------------------------------------------------------------------

// Direct O(c log c) evaluation from the definition.
inline cplx kloosterman(i64 r, i64 n, i64 c) {
    if (c < 1) throw std::invalid_argument("kloosterman: c >= 1 required");
    if (c == 1) return cplx(1, 0);
    UnitRoots ec(c);
    KahanSum acc;
    for (i64 a = 1; a < c; ++a) {
        if (gcd_i64(a, c) != 1) continue;
        i64 abar = mod_inverse(a, c);
        acc.add(ec(a * r % c + abar * n % c));
    }
    return acc.value();
}

// Table-backed evaluator for a fixed modulus c.  Construction costs
// O(sum over prime powers P || c of phi(P) * P); evaluation is O(#prime
// factors) lookups.  Intended for the million-pair loops of the pipeline.
class KloostermanEvaluator {
  public:
    explicit KloostermanEvaluator(i64 c) : c_(c) {
        if (c < 1) throw std::invalid_argument("KloostermanEvaluator: c >= 1");
        // factor c
        i64 m = c;
        for (i64 d = 2; d * d <= m; ++d) {
            if (m % d == 0) {
                Factor f;
                f.p = d;
                f.e = 0;
                f.pe = 1;
                while (m % d == 0) { m /= d; f.e++; f.pe *= d; }
                factors_.push_back(std::move(f));
            }
        }
        if (m > 1) factors_.push_back(Factor{m, 1, m, {}});
        // cofactor inverses and 1D tables per level
        for (auto& f : factors_) {
            i64 cof = c_ / f.pe;
            f.cof_inv = (cof % f.pe == 0) ? 0 : mod_inverse(cof % f.pe, f.pe);
            f.levels.resize(static_cast<size_t>(f.e) + 1);
            i64 pj = 1;
            for (i64 j = 0; j <= f.e; ++j) {
                if (j > 0) pj *= f.p;
                if (j == 0) { f.levels[0] = {cplx(1, 0)}; continue; }
                // T_j[m] = S(1,m;p^j) for all m, built by scattering each
                // unit a's contribution e(a/p^j) onto m -> e(abar m/p^j).
                std::vector<cplx>& T = f.levels[static_cast<size_t>(j)];
                T.assign(static_cast<size_t>(pj), cplx(0, 0));
                UnitRoots roots(pj);
                for (i64 a = 1; a < pj; ++a) {
                    if (a % f.p == 0) continue;
                    i64 abar = mod_inverse(a, pj);
                    const cplx ea = roots(a);
                    for (i64 mres = 0; mres < pj; ++mres)
                        T[static_cast<size_t>(mres)] += ea * roots(abar * (mres % pj) % pj);
                }
            }
        }
    }

    i64 modulus() const { return c_; }

    // S(r, n; c)
    cplx eval(i64 r, i64 n) const {
        cplx prod(1, 0);
        for (const auto& f : factors_) {
            i64 rr = mul_mod(mod_norm(r, f.pe), f.cof_inv, f.pe);
            i64 nn = mul_mod(mod_norm(n, f.pe), f.cof_inv, f.pe);
            prod *= eval_pp_(f, rr, nn, f.e);
        }
        return prod;
    }

  private:
    struct Factor {
        i64 p, e, pe;
        std::vector<std::vector<cplx>> levels;  // levels[j][m] = S(1,m;p^j)
        i64 cof_inv = 0;
    };
    i64 c_;
    std::vector<Factor> factors_;

    static cplx eval_pp_(const Factor& f, i64 x, i64 y, i64 j) {
        if (j == 0) return cplx(1, 0);
        i64 pj = 1;
        for (i64 i = 0; i < j; ++i) pj *= f.p;
        x = mod_norm(x, pj);
        y = mod_norm(y, pj);
        if (x % f.p != 0 || y % f.p != 0)
            return f.levels[static_cast<size_t>(j)][static_cast<size_t>(
                mul_mod(x, y, pj))];
        // both divisible: S(px', py'; p^j) = p * S(x', y'; p^(j-1)) for
        // j >= 2 (each unit a mod p^(j-1) has p lifts with equal phase).
        // At j == 1 the sum runs over the p - 1 units directly: S(0,0;p)
        // = phi(p), not p.
        if (j == 1) return cplx(double(f.p - 1), 0.0);
        return double(f.p) * eval_pp_(f, x / f.p, y / f.p, j - 1);
    }
};

// ----------------------------------------------------------------------------
// The "C sum" and its closed form
// ----------------------------------------------------------------------------

// Fixed (chi, alpha, q, tau) context with cached tables; evaluates the sum
// brute-force and via the closed form for varying (n, r).
class CharsumC {
  public:
    CharsumC(DirichletCharacter chi, i64 alpha, i64 q, int tau)
        : chi_(std::move(chi)), alpha_(alpha), q_(q), tau_(tau) {
        const auto& m = chi_.modulus();
        if (alpha < 0 || alpha > m.gamma())
            throw PreconditionViolated("CharsumC: need 0 <= alpha <= gamma");
        if (q < 1 || gcd_i64(q, m.p()) != 1)
            throw PreconditionViolated("CharsumC: need q >= 1 coprime to p");
        if (tau != 0 && tau != 1) throw PreconditionViolated("CharsumC: tau in {0,1}");
        p_a_ = ipow(m.p(), alpha);
        c_ = p_a_ * (tau ? q : 1);
        d_ = m.q_val() * (tau ? q : 1);
        tau_chi_ = chi_.gauss_sum();
    }

    const DirichletCharacter& chi() const { return chi_; }
    i64 c() const { return c_; }
    i64 d() const { return d_; }

    // (1/d) sum_{b mod d} chi(b) S(b,n;c) e(rb/d), straight from the
    // definition.  O(d) per call after the first (tables are lazy).
    cplx bruteforce(i64 n, i64 r) const {
        if (!kl_) kl_.emplace(c_);
        if (!ed_) ed_.emplace(d_);
        KahanSum acc;
        for (i64 b = 0; b < d_; ++b) {
            cplx ch = chi_(b);
            if (ch == cplx(0, 0)) continue;
            acc.add(ch * kl_->eval(b, n) * (*ed_)(mod_norm(r, d_) * b % d_));
        }
        return acc.value() / double(d_);
    }

    // Normalized a-sum:  Calpha(n,r,q) =
    //   e(-p^gamma pbar^(2 alpha) rbar n / q)
    //   * sum*_{a mod p^alpha} chibar(r + a p^(gamma-alpha)) e( inv(a q) n / p^alpha ).
    // Defined for (r,q)=1; the empty a-sum convention at alpha=0 is the
    // single term chibar(r).
    cplx c_alpha(i64 n, i64 r) const {
        const auto& m = chi_.modulus();
        cplx outer(1, 0);
        if (q_ > 1) {
            if (gcd_i64(r, q_) != 1)
                throw PreconditionViolated("CharsumC::c_alpha: (r,q)=1 required");
            i64 pbar = mod_inverse(m.p() % q_, q_);
            i64 rbar = mod_inverse(r, q_);
            i64 t = mod_norm(m.q_val(), q_);
            t = mul_mod(t, pow_mod(pbar, 2 * alpha_, q_), q_);
            t = mul_mod(t, rbar, q_);
            t = mul_mod(t, mod_norm(n, q_), q_);
            outer = e_of(-double(t) / double(q_));
        }
        if (alpha_ == 0) return outer * std::conj(chi_(r));
        i64 shift = ipow(m.p(), m.gamma() - alpha_);
        UnitRoots ep(p_a_);
        auto chibar = chi_.conj();
        KahanSum acc;
        for (i64 a = 1; a < p_a_; ++a) {
            if (a % m.p() == 0) continue;
            i64 aq_inv = mod_inverse(mul_mod(a, mod_norm(q_, p_a_), p_a_), p_a_);
            acc.add(chibar(r + a * shift) * ep(aq_inv * mod_norm(n, p_a_) % p_a_));
        }
        return outer * acc.value();
    }

    // Closed form: (chi(q)^tau tau(chi) / p^gamma) * Calpha-style sum.
    cplx fast(i64 n, i64 r) const {
        const auto& m = chi_.modulus();
        cplx pref = tau_chi_ / double(m.q_val());
        if (tau_) {
            pref *= chi_(q_);
            return pref * c_alpha(n, r);
        }
        // tau = 0: no q-factors at all (q plays no role in the sum)
        if (alpha_ == 0) return pref * std::conj(chi_(r));
        i64 shift = ipow(m.p(), m.gamma() - alpha_);
        UnitRoots ep(p_a_);
        auto chibar = chi_.conj();
        KahanSum acc;
        for (i64 a = 1; a < p_a_; ++a) {
            if (a % m.p() == 0) continue;
            i64 abar = mod_inverse(a, p_a_);
            acc.add(chibar(r + a * shift) * ep(abar * mod_norm(n, p_a_) % p_a_));
        }
        return pref * acc.value();
    }

  private:
    DirichletCharacter chi_;
    i64 alpha_, q_;
    int tau_;
    i64 p_a_, c_, d_;
    cplx tau_chi_;
    mutable std::optional<KloostermanEvaluator> kl_;
    mutable std::optional<UnitRoots> ed_;
};

// One-shot wrappers.
inline cplx charsum_C_bruteforce(const DirichletCharacter& chi, i64 n, i64 r,
                                 i64 alpha, i64 q, int tau) {
    return CharsumC(chi, alpha, q, tau).bruteforce(n, r);
}
inline cplx charsum_C_fast(const DirichletCharacter& chi, i64 n, i64 r,
                           i64 alpha, i64 q, int tau) {
    return CharsumC(chi, alpha, q, tau).fast(n, r);
}

// ----------------------------------------------------------------------------
// The "E sum"
// ----------------------------------------------------------------------------

struct CharSumInput {
    DirichletCharacter chi;
    i64 alpha;
    i64 r1, r2;
    i64 q1, q2;
    i64 n;

    void validate() const {
        const auto& m = chi.modulus();
        if (alpha < 0 || alpha > 2 * (m.gamma() / 3))
            throw PreconditionViolated("CharSumInput: alpha <= 2*floor(gamma/3) required");
        if (q1 < 1 || q2 < 1 || gcd_i64(q1 * q2, m.p()) != 1)
            throw PreconditionViolated("CharSumInput: (q1 q2, p) = 1 required");
        if (gcd_i64(r1, q1) != 1 || gcd_i64(r2, q2) != 1)
            throw PreconditionViolated("CharSumInput: (r_i, q_i) = 1 required");
    }
};

// Fixed (chi, alpha, r1, r2, q1, q2) context; evaluates E(n) for varying n.
class CharsumE {
  public:
    explicit CharsumE(const CharSumInput& in)
        : chi_(in.chi), alpha_(in.alpha), r1_(in.r1), r2_(in.r2), q1_(in.q1),
          q2_(in.q2) {
        in.validate();
        const auto& m = chi_.modulus();
        p_ = m.p();
        gamma_ = m.gamma();
        p_a_ = ipow(p_, alpha_);
        period_ = p_a_ * q1_ * q2_;
    }

    i64 period() const { return period_; }

    // Definition: (1/(p^a q1 q2)) sum_b Calpha(b,r1,q1) conj(Calpha(b,r2,q2))
    //             e(n b / (p^a q1 q2)).
    cplx bruteforce(i64 n) const {
        ensure_tables_();
        KahanSum acc;
        const i64 P = period_;
        i64 nn = mod_norm(n, P);
        for (i64 b = 0; b < P; ++b) {
            acc.add(tab1_[static_cast<size_t>(b % m1_)] *
                    std::conj(tab2_[static_cast<size_t>(b % m2_)]) *
                    (*eP_)(nn * b % P));
        }
        return acc.value() / double(P);
    }

    // Closed form.  Exact-zero gates:
    //   (i) the congruence p^(g-a)(r2bar q1 - r1bar q2) + n == 0 (mod q1 q2);
    //  (ii) for n == 0 (mod p^a): r1 q1 == r2 q2 (mod p^(a-1)), with the two
    //       exact values of the n == 0 case;
    // otherwise the single a-sum, dropping terms whose inner inverse does not
    // exist mod p (matches the brute-force oracle; count reported through
    // *dropped when non-null).
    cplx fast(i64 n, i64* dropped = nullptr) const {
        if (dropped) *dropped = 0;
        if (!congruence_gate_(n)) return cplx(0, 0);
        if (alpha_ == 0) return std::conj(chi_(r1_)) * chi_(r2_);
        if (mod_norm(n, p_a_) == 0) return exact_n0_();
        // generic single a-sum
        i64 shift = ipow(p_, gamma_ - alpha_);
        auto chibar = chi_.conj();
        KahanSum acc;
        i64 count_dropped = 0;
        for (i64 a = 1; a < p_a_; ++a) {
            if (a % p_ == 0) continue;
            i64 abar = mod_inverse(a, p_a_);
            i64 inner = mod_norm(abar * mod_norm(q2_, p_a_) % p_a_ + mod_norm(n, p_a_), p_a_);
            if (inner % p_ == 0) { ++count_dropped; continue; }
            i64 inner_inv = mod_inverse(inner, p_a_);
            acc.add(chibar(r1_ + a * shift) *
                    chi_(r2_ + mul_mod(inner_inv, mod_norm(q1_, p_a_), p_a_) * shift));
        }
        if (dropped) *dropped = count_dropped;
        return acc.value();
    }

    // Lemma bound for n != 0 (mod p^a):
    //   p^(ceil(a/2) + ord_p(n))     if n != 0 (mod p^(floor(a/2)))
    //   p^(ceil(a/2) + ord_p(n)/2)   otherwise,
    // and 0 when the congruence r1 q1 == r2 q2 (mod p^(ord_p n)) fails.
    // The absolute constant is exposed separately by bound_constant().
    double bound(i64 n) const {
        if (n != 0 && mod_norm(n, p_a_) == 0)
            // ord >= alpha behaves as the n == 0 (mod p^a) case
            throw PreconditionViolated("CharsumE::bound: requires n != 0 mod p^alpha");
        if (n == 0) throw PreconditionViolated("CharsumE::bound: requires n != 0 mod p^alpha");
        i64 delta = ord_p(n, p_);
        i64 pd = ipow(p_, delta);
        if (mod_norm(r1_ * q1_ - r2_ * q2_, pd) != 0) return 0.0;
        i64 ceil_half = (alpha_ + 1) / 2;
        if (mod_norm(n, ipow(p_, alpha_ / 2)) != 0)
            return std::pow(double(p_), double(ceil_half + delta));
        return std::pow(double(p_), double(ceil_half) + 0.5 * double(delta));
    }

    // 2 for the (n,p)=1 quadratic-equation case, 1 otherwise.
    double bound_constant(i64 n) const {
        return (n != 0 && ord_p(n, p_) == 0) ? 2.0 : 1.0;
    }

  private:
    DirichletCharacter chi_;
    i64 alpha_, r1_, r2_, q1_, q2_;
    i64 p_, gamma_, p_a_, period_;
    mutable std::vector<cplx> tab1_, tab2_;
    mutable i64 m1_ = 0, m2_ = 0;
    mutable std::optional<UnitRoots> eP_;

    void ensure_tables_() const {
        if (!tab1_.empty()) return;
        CharsumC cs1(chi_, alpha_, q1_, 1), cs2(chi_, alpha_, q2_, 1);
        m1_ = p_a_ * q1_;
        m2_ = p_a_ * q2_;
        tab1_.resize(static_cast<size_t>(m1_));
        tab2_.resize(static_cast<size_t>(m2_));
        for (i64 b = 0; b < m1_; ++b) tab1_[static_cast<size_t>(b)] = cs1.c_alpha(b, r1_);
        for (i64 b = 0; b < m2_; ++b) tab2_[static_cast<size_t>(b)] = cs2.c_alpha(b, r2_);
        eP_.emplace(period_);
    }

    bool congruence_gate_(i64 n) const {
        i64 q12 = q1_ * q2_;
        if (q12 == 1) return true;
        i64 r1b = mod_inverse(mod_norm(r1_, q1_) == 0 ? 1 : mod_norm(r1_, q1_), q1_);
        i64 r2b = mod_inverse(mod_norm(r2_, q2_) == 0 ? 1 : mod_norm(r2_, q2_), q2_);
        // well-defined mod q1 q2: changing r2b by q2 shifts the expression
        // by a multiple of q1 q2 (and symmetrically for r1b)
        i64 shift = 1;
        for (i64 i = 0; i < gamma_ - alpha_; ++i) shift = mul_mod(shift, p_, q12);
        i64 t = mod_norm(mul_mod(shift, mod_norm(r2b * q1_ - r1b * q2_, q12), q12) +
                             mod_norm(n, q12),
                         q12);
        return t == 0;
    }

    cplx exact_n0_() const {
        // n == 0 (mod p^a), alpha >= 1
        cplx base = chi_(mul_mod(mod_inverse(mod_norm(r1_, chi_.modulus().q_val()),
                                             chi_.modulus().q_val()),
                                 mod_norm(r2_, chi_.modulus().q_val()),
                                 chi_.modulus().q_val()));
        double pam1 = std::pow(double(p_), double(alpha_ - 1));
        if (mod_norm(r1_ * q1_ - r2_ * q2_, p_a_) == 0)
            return base * pam1 * double(p_ - 1);
        if (mod_norm(r1_ * q1_ - r2_ * q2_, p_a_ / p_) == 0) return -base * pam1;
        return cplx(0, 0);
    }
};

inline cplx charsum_E_bruteforce(const CharSumInput& in) {
    return CharsumE(in).bruteforce(in.n);
}
inline cplx charsum_E_fast(const CharSumInput& in, i64* dropped = nullptr) {
    return CharsumE(in).fast(in.n, dropped);
}
inline double charsum_E_bound(const CharSumInput& in) {
    return CharsumE(in).bound(in.n);
}

// ----------------------------------------------------------------------------
// Helper sums over a mod p^nu (full / unit / quadratic variants)
// ----------------------------------------------------------------------------

enum class ChiSumVariant { full, unit, quadratic };

// variant=full:       sum_{a mod p^nu}  chi(u + v w a p^(gamma-nu))
// variant=unit:       sum*_{a mod p^nu} chi(u + v w a p^(gamma-nu))
// variant=quadratic:  sum*_{a mod p^nu} chi(u + v w a p^(gamma-nu) + w' a^2 p^(gamma-nu+mu))
// Preconditions: mu < nu <= gamma/2, (w,p)=1, (u,p)=1; (w',p)=1 for quadratic.
inline cplx lemma_sum_of_chi(const DirichletCharacter& chi, i64 nu, i64 mu,
                             i64 u, i64 v, i64 w, i64 w_prime,
                             ChiSumVariant variant) {
    const auto& m = chi.modulus();
    const i64 p = m.p(), gamma = m.gamma(), Q = m.q_val();
    if (!(mu < nu && 2 * nu <= gamma))
        throw PreconditionViolated("lemma_sum_of_chi: need mu < nu <= gamma/2");
    if (mu < 0) throw PreconditionViolated("lemma_sum_of_chi: mu >= 0");
    if (gcd_i64(w, p) != 1 || gcd_i64(u, p) != 1)
        throw PreconditionViolated("lemma_sum_of_chi: (uw, p) = 1 required");
    if (variant == ChiSumVariant::quadratic && gcd_i64(w_prime, p) != 1)
        throw PreconditionViolated("lemma_sum_of_chi: (w', p) = 1 required");
    const i64 pnu = ipow(p, nu);
    const i64 lin_shift = ipow(p, gamma - nu);          // p^(gamma-nu) mod: exact
    const i64 quad_shift = ipow(p, gamma - nu + mu);
    const i64 vw = mul_mod(mod_norm(v, Q), mod_norm(w, Q), Q);
    KahanSum acc;
    for (i64 a = 0; a < pnu; ++a) {
        if (variant != ChiSumVariant::full && a % p == 0) continue;
        i64 arg = mod_norm(u, Q);
        arg = mod_norm(arg + mul_mod(vw, mul_mod(a, lin_shift % Q, Q), Q), Q);
        if (variant == ChiSumVariant::quadratic) {
            i64 a2 = mul_mod(a, a, Q);
            arg = mod_norm(
                arg + mul_mod(mod_norm(w_prime, Q), mul_mod(a2, quad_shift % Q, Q), Q), Q);
        }
        acc.add(chi(arg));
    }
    return acc.value();
}

}  // namespace twistsum
