// ============================================================================
// pipeline.hpp
//
// The end-to-end objects: the twisted exponential sum
//
//     S(N) = sum_n lambda(n) chi(n) e(T phi(n/N)) V(n/N),
//
// its sharp-cutoff variant, derived-parameter selection, the delta-method
// decomposition into reversed-Voronoi pieces, an exact leakage predictor for
// the decomposition error, and empirical exponent scans against the target
// bound shape.
//
// Decomposition: with h = p^beta q (beta = 2 floor(gamma/3), q prime
// > max{p, M}), X >~ h^2/N, X^{1-eps} > N,
//
//   S(N) = sum_{alpha=0}^{beta} ( S*(p^alpha q, h) + S*(p^alpha, h) ) + err,
//
// where S*(c,h) is evaluated in the reversed-Voronoi form
//
//   S*(c,h) = (xi(c) h^{1/2} N^{1/4} / (c X^{3/4}))
//             sum_r chi(r) e(f(r)) V_nat(r/N)
//             sum_n conj(lambda(n)) S(r,n;c) e(2 sqrt(nr)/(sqrt M c))
//                   U(h^2 n / (M X c^2)),
//
// an exact identity per term (Voronoi), so `err` is exactly the leakage of
// the collapsed delta-identity: only the diagonal n = r plus the
// off-diagonal residues n = r + jh (j != 0) survive the modular a-sum, and
//
//   err = sum_r chi(r) e(f(r)) sum_{j != 0} lambda(r + jh) W(r, r + jh),
//   W(r,n) = xi(-1) 2 pi i^k r^{1/4} V(r/N) V_k(sqrt(rX)/h)
//            I_k(sqrt r/h, sqrt n/h; X) / (h^{1/2} X^{3/4}),
//
// with W(r,r) = V(r/N) by the identity's normalization.  The predictor
// computes `err` directly (a handful of I_k quadratures per r), which is
// orders of magnitude cheaper than the decomposition itself and pins the
// achievable tolerance before the expensive run.
// ============================================================================
#pragma once

#include "bump.hpp"
#include "cuspform.hpp"
#include "jintegrals.hpp"
#include "voronoi.hpp"

namespace twistsum {

struct RangeGateFailed : std::runtime_error {
    explicit RangeGateFailed(const std::string& m) : std::runtime_error(m) {}
};

struct SumSpec {
    const HeckeEigenvalueTable* form = nullptr;
    const DirichletCharacter* chi = nullptr;  // primitive mod p^gamma
    double N = 1, T = 1, Delta = 1;
    double eps = 0.05;
    std::function<double(double)> phi;  // default -log(x)/(2 pi)
    std::function<double(double)> V;    // default canonical bump on [1,2]

    double phi_eval(double x) const { return phi ? phi(x) : -std::log(x) / TWO_PI; }
    double V_eval(double x) const { return V ? V(x) : bump_U(x); }
    double f_eval(double n) const { return T * phi_eval(n / N); }
    i64 p() const { return chi->modulus().p(); }
    i64 gamma() const { return chi->modulus().gamma(); }
};

struct DerivedParams {
    i64 beta = 0;
    double S = 0, K = 0, Q = 0, H = 0, X = 0;
    i64 Qstar = 0;  // exact count of primes in [Q, 2Q]
    bool gate_q_enlarged = false;  // Q > N^{1+eps}/K (off-diagonal analysis)
    bool gate_K_large = false;     // K > sqrt(T) N^eps (L-integral regime 2)
};

inline bool is_prime_i64(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline i64 count_primes_in(i64 lo, i64 hi) {
    i64 c = 0;
    for (i64 n = lo; n <= hi; ++n) c += is_prime_i64(n) ? 1 : 0;
    return c;
}

inline DerivedParams choose_parameters(const SumSpec& spec, double K_override = 0,
                                       double Q_override = 0) {
    const double N = spec.N, T = spec.T, eps = spec.eps;
    const double p = double(spec.p());
    const double M = spec.form ? double(spec.form->level()) : 1.0;
    const i64 gamma = spec.gamma();
    DerivedParams d;
    d.beta = 2 * (gamma / 3);
    d.S = T + spec.Delta * std::pow(N, eps);
    d.K = (K_override > 0) ? K_override : std::pow(T, 2.0 / 3.0);
    d.Q = (Q_override > 0) ? Q_override : std::pow(N, 1.0 + eps) / std::sqrt(T);

    if ((T + spec.Delta) * std::pow(p, double(gamma + 1)) >= std::pow(N, 1.5))
        throw RangeGateFailed("(T+Delta) p^{gamma+1} < N^{3/2} violated");
    if (!(std::pow(N, eps) < d.K))
        throw RangeGateFailed("N^eps < K violated");
    if (!(d.K < std::pow(T, 1.0 - eps)))
        throw RangeGateFailed("K < T^{1-eps} violated");

    d.H = std::pow(p, double(d.beta)) * d.Q;
    d.X = d.H * d.H * d.K * d.K / N;
    if (!(d.H > std::pow(N, 1.0 + eps) / d.K))
        throw RangeGateFailed("H > N^{1+eps}/K violated");
    if (!(d.Q > std::max(p, M)))
        throw RangeGateFailed("Q > max{p, M} violated");

    d.gate_q_enlarged = d.Q > std::pow(N, 1.0 + eps) / d.K;
    d.gate_K_large = d.K > std::sqrt(T) * std::pow(N, eps);
    d.Qstar = count_primes_in(i64(std::ceil(d.Q)), i64(std::floor(2.0 * d.Q)));
    return d;
}

// Sharp-cutoff Delta choice: the three-regime table for T^5 < p^{3 floor(gamma/3)},
// else Delta = T.
inline double corollary_delta(double T, double p, i64 gamma, double N) {
    double pg = std::pow(p, double(gamma));
    if (std::pow(T, 5.0) >= std::pow(p, 3.0 * double(gamma / 3))) return T;
    if (N >= std::pow(T, 4.0 / 9.0) * std::pow(pg, 10.0 / 9.0))
        return std::pow(T, 4.0 / 9.0) * std::pow(pg, 1.0 / 9.0);
    if (N >= std::pow(T, 8.0 / 3.0) * std::pow(pg, 2.0 / 3.0))
        return std::pow(T, 1.0 / 3.0) * std::pow(N, 0.25) / std::pow(pg, 1.0 / 6.0);
    return T;
}

inline cplx S_direct(const SumSpec& spec) {
    i64 lo = i64(std::floor(spec.N)) + 1, hi = i64(std::ceil(2.0 * spec.N)) - 1;
    lo = std::max<i64>(lo, 1);
    if (hi > spec.form->n_max())
        throw CoefficientTableTooShort("S_direct: need lambda up to " + std::to_string(hi));
    std::vector<cplx> terms;
    for (i64 n = lo; n <= hi; ++n) {
        double v = spec.V_eval(double(n) / spec.N);
        if (v == 0.0) continue;
        terms.push_back(spec.form->lambda(n) * (*spec.chi)(n) * e_of(spec.f_eval(double(n))) *
                        v);
    }
    return tree_sum(std::move(terms));
}

inline cplx S_sharp(const SumSpec& spec, i64 N_cut) {
    if (N_cut > spec.form->n_max())
        throw CoefficientTableTooShort("S_sharp: need lambda up to " + std::to_string(N_cut));
    std::vector<cplx> terms;
    for (i64 n = 1; n <= N_cut; ++n)
        terms.push_back(spec.form->lambda(n) * (*spec.chi)(n) * e_of(spec.f_eval(double(n))));
    return tree_sum(std::move(terms));
}

// --- the reversed-Voronoi piece -------------------------------------------

// Full table of S(1, m; c) for composite c = u * v with (u,v) = 1, assembled
// from the per-factor tables by twisted multiplicativity:
//   S(1, m; uv) = S(1, m vbar^2; u) S(1, m ubar^2; v).
class KloostermanTable {
  public:
    explicit KloostermanTable(i64 c) : c_(c), tab_(static_cast<size_t>(c)) {
        std::vector<std::pair<i64, int>> fac;  // prime power factorization
        i64 m = c;
        for (i64 d = 2; d * d <= m; ++d)
            if (m % d == 0) {
                int e = 0;
                while (m % d == 0) { m /= d; ++e; }
                fac.emplace_back(d, e);
            }
        if (m > 1) fac.emplace_back(m, 1);
        std::fill(tab_.begin(), tab_.end(), 1.0);
        for (const auto& [pp, e] : fac) {
            i64 u = ipow(pp, e), v = c / u;
            // S(1, m; uv) = S(1, m vbar^2; u) S(1, m ubar^2; v) for (u,v)=1.
            i64 vbar2 = (u == c) ? 1 : mul_mod(mod_inverse(v % u, u), mod_inverse(v % u, u), u);
            // Dense table of S(1, j; u) = sum_{(a,u)=1} e((a + abar j)/u):
            // scatter each unit's phase, walking the index incrementally so
            // the inner loop is add-compare only.  O(phi(u) u) total.
            std::vector<double> su(static_cast<size_t>(u), 0.0);
            UnitRoots e_u(u);
            for (i64 a = 1; a < u; ++a) {
                if (a % pp == 0) continue;  // (a, p^e) = 1 iff p does not divide a
                i64 ab = mod_inverse(a, u);
                for (i64 j = 0, ph = a; j < u; ++j, ph = ph + ab >= u ? ph + ab - u : ph + ab)
                    su[static_cast<size_t>(j)] += e_u(ph).real();
            }
            for (i64 j = 0, jm = 0; j < c; ++j, jm = jm + 1 >= u ? 0 : jm + 1)
                tab_[static_cast<size_t>(j)] *= su[static_cast<size_t>(mul_mod(jm, vbar2, u))];
        }
    }

    i64 modulus() const { return c_; }
    // S(r, n; c) for (r, c) = 1 equals S(1, r n; c).
    double S1(i64 m) const { return tab_[static_cast<size_t>(mod_norm(m, c_))]; }

  private:
    i64 c_;
    std::vector<double> tab_;
};

struct SStarContext {
    const SumSpec* spec;
    const DerivedParams* params;
    double x_min = 2.0;  // calibrated V_k threshold
    cplx eta_g{1.0, 0.0};
};

// S*(c, h) with c = p^alpha q^tau, h = p^beta q, in the reversed-Voronoi
// form.  The coefficient table must cover the n-window (2 M X c^2 / h^2).
inline cplx S_star(int alpha, int tau, i64 q, const SStarContext& ctx) {
    const SumSpec& sp = *ctx.spec;
    const DerivedParams& pr = *ctx.params;
    const double N = sp.N, X = pr.X, M = double(sp.form->level());
    const i64 p = sp.p();
    const i64 c = ipow(p, alpha) * (tau ? q : 1);
    const double h = double(ipow(p, pr.beta)) * double(q);
    const double cc = double(c);

    // n-window from the support of U(h^2 n/(M X c^2))
    const double n_scale = M * X * cc * cc / (h * h);
    i64 n_lo = i64(std::floor(n_scale)) + 1;
    i64 n_hi = i64(std::ceil(2.0 * n_scale)) - 1;
    n_lo = std::max<i64>(n_lo, 1);
    if (n_hi < n_lo) return cplx(0.0);  // empty window
    if (n_hi > sp.form->n_max())
        throw CoefficientTableTooShort("S_star: need lambda up to " + std::to_string(n_hi));

    // per-window precomputation
    const size_t W = static_cast<size_t>(n_hi - n_lo + 1);
    std::vector<double> lamU(W), sqn(W);
    for (size_t i = 0; i < W; ++i) {
        i64 n = n_lo + i64(i);
        lamU[i] = sp.form->lambda(n) * bump_U(h * h * double(n) / (M * X * cc * cc));
        sqn[i] = std::sqrt(double(n));
    }
    KloostermanTable KT(c);

    const i64 r_lo = i64(std::floor(N)) + 1, r_hi = i64(std::ceil(2.0 * N)) - 1;
    KahanSum outer;
    for (i64 r = r_lo; r <= r_hi; ++r) {
        cplx chr = (*sp.chi)(r);
        if (chr == cplx(0.0)) continue;
        double v = sp.V_eval(double(r) / N);
        if (v == 0.0) continue;
        // V_nat(x) = eta_g xi(-1) x^{1/4} V(x) V_k(sqrt(NXx)/h) / sqrt(M);
        // xi(-1) = (-1)^k = +1 for the even-weight trivial-nebentypus forms
        // supported here.
        cplx vnat = (ctx.eta_g / std::abs(ctx.eta_g)) * std::pow(double(r) / N, 0.25) * v *
                    V_k_profile(std::sqrt(double(r) * X) / h, int(sp.form->weight()),
                                ctx.x_min) /
                    std::sqrt(M);
        cplx coeff = chr * e_of(sp.f_eval(double(r))) * vnat;

        KahanSum inner;
        const double w = 2.0 / (std::sqrt(M) * cc);  // e(w sqrt r sqrt n)
        const double wr = w * std::sqrt(double(r));
        // Phase e(wr sqrt n) advances by a slowly varying increment; walk it
        // with a per-step rotation held fixed inside blocks and recomputed
        // exactly at block starts.  The block length is capped so the
        // curvature error wr B^2 / (8 n^{3/2}) stays below 1e-9 cycles.
        constexpr size_t BLK = 256;
        const bool use_table = (c > 1) && gcd_i64(mod_norm(r, c), c) == 1;
        // r sharing a factor with c (possible only through q^tau) is rare:
        // fall back to the direct evaluator for those r.
        std::unique_ptr<KloostermanEvaluator> KE;
        if (c > 1 && !use_table) KE = std::make_unique<KloostermanEvaluator>(c);
        i64 rc = use_table ? mod_norm(r, c) : 0;
        i64 m = use_table ? mul_mod(rc, mod_norm(n_lo, c), c) : 0;
        size_t i = 0;
        while (i < W) {
            const double nn = double(n_lo + i64(i));
            size_t blk = BLK;
            const double b2 = 8e-9 * nn * std::sqrt(nn) / std::max(wr, 1e-300);
            if (b2 < double(BLK) * double(BLK))
                blk = std::max<size_t>(1, size_t(std::sqrt(b2)));
            const size_t end = std::min(W, i + blk);
            cplx ph = e_of(wr * sqn[i]);
            const cplx rot =
                (blk > 1 && i + 1 < W) ? e_of(wr * (sqn[i + 1] - sqn[i])) : cplx(1.0);
            for (; i < end; ++i) {
                double wgt = lamU[i];
                if (use_table) {
                    wgt *= KT.S1(m);
                    m += rc;
                    if (m >= c) m -= c;
                } else if (KE) {
                    wgt *= KE->eval(r, n_lo + i64(i)).real();
                }
                inner.add(wgt * ph);
                ph *= rot;
            }
        }
        outer.add(coeff * inner.value());
    }
    cplx pref = std::sqrt(h) * std::pow(N, 0.25) / (cc * std::pow(X, 0.75));
    return pref * outer.value();
}

struct DecompositionReport {
    cplx direct{0.0};
    cplx decomposed{0.0};
    double diff = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    // per-q, per-alpha pieces: terms[qi][alpha] = S*(p^a q,h) + S*(p^a,h)
    std::vector<std::vector<cplx>> terms;
};

inline DecompositionReport decomposition_check(const SumSpec& spec, const DerivedParams& params,
                                               const std::vector<i64>& q_list,
                                               const SStarContext& ctx_in = {}) {
    if (!(spec.N <= 1e4)) throw ParamsViolated("decomposition_check: N too large (desk scale)");
    SStarContext ctx = ctx_in;
    ctx.spec = &spec;
    ctx.params = &params;
    DecompositionReport rep;
    rep.direct = S_direct(spec);
    KahanSum avg;
    for (i64 q : q_list) {
        if (!is_prime_i64(q) || q <= std::max<i64>(spec.p(), spec.form->level()))
            throw ParamsViolated("decomposition_check: q must be prime > max{p, M}");
        std::vector<cplx> per_alpha;
        KahanSum sum_q;
        for (int a = 0; a <= int(params.beta); ++a) {
            cplx t = S_star(a, 1, q, ctx) + S_star(a, 0, q, ctx);
            per_alpha.push_back(t);
            sum_q.add(t);
        }
        rep.terms.push_back(std::move(per_alpha));
        avg.add(sum_q.value());
    }
    rep.decomposed = avg.value() / double(q_list.size());
    rep.diff = std::abs(rep.direct - rep.decomposed);
    rep.tolerance = 10.0 / params.X;
    rep.pass = rep.diff <= rep.tolerance;
    return rep;
}

// Exact leakage of the collapsed delta-identity (see file header): the
// predicted value of decomposed - direct, at a fraction of the cost.
inline cplx predict_decomposition_error(const SumSpec& spec, const DerivedParams& params,
                                        i64 q, double x_min, int j_max = 8) {
    const double N = spec.N, X = params.X;
    const double h = double(ipow(spec.p(), params.beta)) * double(q);
    const int k = int(spec.form->weight());
    const i64 r_lo = i64(std::floor(N)) + 1, r_hi = i64(std::ceil(2.0 * N)) - 1;
    KahanSum acc;
    for (i64 r = r_lo; r <= r_hi; ++r) {
        cplx chr = (*spec.chi)(r);
        if (chr == cplx(0.0)) continue;
        double v = spec.V_eval(double(r) / N);
        if (v == 0.0) continue;
        cplx vk = V_k_profile(std::sqrt(double(r) * X) / h, k, x_min);
        cplx base = chr * e_of(spec.f_eval(double(r))) * ((k % 2 == 0 ? 1.0 : -1.0)) *
                    2.0 * PI * i_pow(k) * std::pow(double(r), 0.25) * v * vk /
                    (std::sqrt(h) * std::pow(X, 0.75));
        // Anchor the quadrature tolerance well below the diagonal scale of
        // the kernel, |I(r,r)| = X / (2 pi sqrt(x) |vk|); a tolerance tied
        // only to the (tiny) off-diagonal budget lets the integrator accept
        // coarse panels whose error estimate is deceptively small.
        const double x = std::sqrt(double(r) * X) / h;
        const double diag_scale = X / (TWO_PI * std::sqrt(x) * std::abs(vk));
        QuadOptions qo;
        qo.abs_tol = 1e-9 * diag_scale;
        qo.rel_tol = 1e-8;
        for (int sgn : {+1, -1}) {
            for (int j = 1; j <= j_max; ++j) {
                double n = double(r) + sgn * j * h;
                if (n < 1.0) break;
                if (i64(n) > spec.form->n_max()) break;
                cplx Iod = I_k(std::sqrt(double(r)) / h, std::sqrt(n) / h, X, k, qo);
                cplx term = base * spec.form->lambda(i64(n)) * Iod;
                acc.add(term);
                if (std::abs(term) < 1e-16) break;
            }
        }
    }
    return acc.value();
}

// --- exponent scan ----------------------------------------------------------

struct ScanRow {
    double T, N;
    i64 p, gamma;
    double abs_S, bound, ratio;
};

inline double scan_bound(double T, double p, i64 gamma, double N) {
    i64 fl = gamma / 3;
    return std::pow(T, 1.0 / 3.0) * std::pow(p, double(gamma - fl) / 2.0) * std::sqrt(N) +
           N / (std::pow(T, 1.0 / 6.0) * std::pow(p, double(fl) / 2.0));
}

inline std::vector<ScanRow> exponent_scan(const HeckeEigenvalueTable& form,
                                          const DirichletCharacter& chi, double T,
                                          const std::vector<double>& N_list,
                                          bool mutate_no_cancellation = false) {
    std::vector<ScanRow> rows;
    for (double N : N_list) {
        SumSpec spec;
        spec.form = &form;
        spec.chi = &chi;
        spec.N = N;
        spec.T = T;
        double aS;
        if (!mutate_no_cancellation) {
            aS = std::abs(S_direct(spec));
        } else {
            // synthetic no-cancellation sequence: every term replaced by its
            // weight, so |S| grows linearly in N
            double s = 0;
            for (i64 n = i64(N) + 1; n < i64(2 * N); ++n) s += spec.V_eval(double(n) / N);
            aS = s;
        }
        double p = double(chi.modulus().p());
        i64 g = chi.modulus().gamma();
        double b = scan_bound(T, p, g, N);
        rows.push_back({T, N, i64(p), g, aS, b, aS / b});
    }
    return rows;
}

// Least-squares slope of log(ratio) against log(N).
inline double scan_log_slope(const std::vector<ScanRow>& rows) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& r : rows) {
        if (r.ratio <= 0) continue;
        double x = std::log(r.N), y = std::log(r.ratio);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace twistsum
