// ============================================================================
// delta_method.hpp
//
// The Bessel delta-identity machinery.  The diagonal Bessel integral defines
// a one-variable profile I_k via
//
//     I_k(a,a;X) = (i^k X / (2 pi)) * Ik_profile(a sqrt X),
//
// which is X-free, and V_k(x) = 1/(sqrt(x) Ik_profile(x)).  The identity
//
//     delta(r=n) = (2 pi r^{1/4} / (i^k h^{1/2} X^{3/4}))
//                  * [h | n-r] * I_k(sqrt r / h, sqrt n / h; X)
//                  * V_k(sqrt(rX)/h)  +  (negligible)
//
// holds for r, n in [N,2N] once X >~ h^2/N and X^{1-eps} > N.  (The modular
// a-sum (1/h) sum_{a mod h} e(a(n-r)/h) collapses exactly to the
// divisibility indicator; we use the indicator.)
//
// Evaluating Ik_profile(x):
//   The integrand U(u) e(2a sqrt(Xu)) J_{k-1}(4 pi a sqrt(Xu)) splits along
//   the Hankel asymptotic
//       J_nu(z) = sqrt(2/(pi z)) Re[ (P + iQ)(z) e^{i omega} ],
//       omega = z - nu pi/2 - pi/4,
//   into an e^{-i omega} half whose oscillation cancels the explicit phase
//   exactly (smooth integrand, plain quadrature) and an e^{+i omega} half of
//   doubled frequency whose contribution decays like exp(-c sqrt(x)) by the
//   bump's Gevrey regularity.  For x >= X_CROSS = 200 the second half is
//   below double precision and we compute only
//
//     Ik_profile(x) = e^{-i pi/4} / sqrt(2x)
//                     * int_1^2 U(u) u^{-1/4} (P - iQ)(nu, 4 pi x sqrt u) du,
//
//   with (P - iQ)(nu, z) = sum_m (-i)^m (nu,m)/(2z)^m (truncated once the
//   terms fall under 1e-17; at z >= 2500 they shrink geometrically).  For
//   x < X_CROSS the full Bessel integral is evaluated directly by the
//   oscillatory engine at a reference X (a few hundred cycles, cheap).
//
//   A per-weight Chebyshev interpolant in log x caches the profile across
//   [1, 3e6]; it is validated against off-node direct evaluations at build.
//
// x_min: |Ik_profile(x)| sqrt(x) tends to u_tilde_34()/sqrt(2) but may dip
// near zero for small x; V_k is only served above a calibrated threshold
// (see calibrate_x_min), below which BelowCalibratedRange is thrown.
// ============================================================================
#pragma once

#include <map>
#include <mutex>

#include "modular.hpp"
#include "oscillatory.hpp"

namespace twistsum {

struct BelowCalibratedRange : std::domain_error {
    explicit BelowCalibratedRange(const std::string& m) : std::domain_error(m) {}
};
struct ParamsViolated : std::invalid_argument {
    explicit ParamsViolated(const std::string& m) : std::invalid_argument(m) {}
};

namespace detail {

// (P - iQ)(nu, z) = sum_m (-i)^m a_m(nu) / z^m,
// a_m(nu) = prod_{j=1}^m (4 nu^2 - (2j-1)^2) / (8^m m!),
// so the term ratio is a_m / (a_{m-1} z) = (4 nu^2 - (2m-1)^2) / (8 m z).
inline cplx hankel_envelope(int nu, double z) {
    const double fournu2 = 4.0 * double(nu) * double(nu);
    cplx sum(1.0, 0.0);
    double t = 1.0;
    cplx ipow_m(1.0, 0.0);
    const cplx minus_i(0.0, -1.0);
    for (int m = 1; m <= 80; ++m) {
        double num = fournu2 - double(2 * m - 1) * double(2 * m - 1);
        double t_next = t * num / (8.0 * m * z);
        if (std::abs(t_next) >= std::abs(t) && m > nu) break;  // divergence onset
        t = t_next;
        ipow_m *= minus_i;
        sum += ipow_m * t;
        if (std::abs(t) < 1e-17) break;
    }
    return sum;
}

}  // namespace detail

inline constexpr double IK_X_CROSS = 40.0;

// Smooth-half evaluation, valid (to below double precision) for x >= IK_X_CROSS.
inline cplx I_k_profile_smooth(double x, int k) {
    const int nu = k - 1;
    const auto& g = gl40();
    KahanSum acc;
    const int P = 40;
    for (int p = 0; p < P; ++p) {
        double lo = 1.0 + double(p) / P, hi = 1.0 + double(p + 1) / P;
        double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        for (int i = 0; i < 40; ++i) {
            double u = c + h * g.x[static_cast<size_t>(i)];
            double w = h * g.w[static_cast<size_t>(i)];
            double su = std::sqrt(u);
            acc.add(w * bump_U(u) * std::pow(u, -0.25) *
                    detail::hankel_envelope(nu, 4.0 * PI * x * su));
        }
    }
    return std::exp(cplx(0.0, -PI / 4.0)) / std::sqrt(2.0 * x) * acc.value();
}

// Direct evaluation via the full Bessel integral at a reference X; X-free by
// construction (the reference only sets the substitution scale).
inline cplx I_k_profile_direct(double x, int k, double X_ref = 1e4) {
    double a = x / std::sqrt(X_ref);
    cplx I = I_k(a, a, X_ref, k);
    return 2.0 * PI / (i_pow(k) * X_ref) * I;
}

inline cplx I_k_profile_uncached(double x, int k) {
    return (x >= IK_X_CROSS) ? I_k_profile_smooth(x, k) : I_k_profile_direct(x, k);
}

// Chebyshev interpolant of g(t) = Ik_profile(e^t) e^{t/2} (slowly varying,
// tends to the constant e^{-i pi/4} u_tilde_34()/sqrt 2) on [log x_lo, log x_hi],
// split into pieces of length ~0.6 with 24 nodes each.
class IkProfileCache {
  public:
    IkProfileCache(int k, double x_lo = 1.0, double x_hi = 3e6) : k_(k), t_lo_(std::log(x_lo)),
                                                                  t_hi_(std::log(x_hi)) {
        // Below the envelope crossover the profile carries a residual
        // oscillation of local frequency ~5x cycles per unit log x (damped
        // like exp(-c sqrt(x)), but far above the interpolation tolerance for
        // x up to ~40).  Piece lengths shrink accordingly: at most ~4 cycles
        // per 24-node piece small-x, a fixed smooth length past the crossover.
        const int n_nodes = 24;
        double t = t_lo_;
        while (t < t_hi_) {
            double x = std::exp(t);
            double len = (x < IK_X_CROSS) ? std::min(0.6, 0.4 / x) : 0.6;
            double b = std::min(t_hi_, t + len);
            breaks_.push_back(t);
            t = b;
        }
        breaks_.push_back(t_hi_);
        const size_t n_pieces = breaks_.size() - 1;
        pieces_.resize(n_pieces);
        for (size_t p = 0; p < n_pieces; ++p) {
            double a = breaks_[p], b = breaks_[p + 1];
            auto& coef = pieces_[p];
            std::vector<cplx> vals(n_nodes);
            for (int j = 0; j < n_nodes; ++j) {
                double th = PI * (j + 0.5) / n_nodes;
                double tj = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(th);
                vals[static_cast<size_t>(j)] =
                    I_k_profile_uncached(std::exp(tj), k) * std::exp(0.5 * tj);
            }
            coef.assign(static_cast<size_t>(n_nodes), cplx(0.0));
            for (int m = 0; m < n_nodes; ++m) {
                cplx s(0.0);
                for (int j = 0; j < n_nodes; ++j)
                    s += vals[static_cast<size_t>(j)] *
                         std::cos(m * PI * (j + 0.5) / n_nodes);
                coef[static_cast<size_t>(m)] = s * (2.0 / n_nodes);
            }
        }
        // validate off-node
        for (size_t p = 0; p < n_pieces; p += std::max<size_t>(1, n_pieces / 16)) {
            double tv = breaks_[p] + 0.37 * (breaks_[p + 1] - breaks_[p]);
            cplx ref = I_k_profile_uncached(std::exp(tv), k) * std::exp(0.5 * tv);
            double err = std::abs(eval_g_(tv) - ref);
            if (err > 1e-8 * (1.0 + std::abs(ref)))
                throw std::runtime_error(
                    "IkProfileCache: interpolant validation failed at x = " +
                    std::to_string(std::exp(tv)) + " (error " + std::to_string(err) + ")");
        }
    }

    cplx operator()(double x) const {
        double t = std::log(x);
        if (t < t_lo_ || t > t_hi_)
            throw std::out_of_range("IkProfileCache: x outside cached domain");
        return eval_g_(t) * std::exp(-0.5 * t);
    }

  private:
    cplx eval_g_(double t) const {
        size_t p = static_cast<size_t>(
            std::upper_bound(breaks_.begin(), breaks_.end(), t) - breaks_.begin());
        p = (p == 0) ? 0 : std::min(p - 1, pieces_.size() - 1);
        double a = breaks_[p], b = breaks_[p + 1];
        double y = (2.0 * t - a - b) / (b - a);  // in [-1,1]
        const auto& c = pieces_[p];
        // Clenshaw
        cplx b1(0.0), b2(0.0);
        for (int m = int(c.size()) - 1; m >= 1; --m) {
            cplx tmp = 2.0 * y * b1 - b2 + c[static_cast<size_t>(m)];
            b2 = b1;
            b1 = tmp;
        }
        return y * b1 - b2 + 0.5 * c[0];
    }

    int k_;
    double t_lo_, t_hi_;
    std::vector<double> breaks_;
    std::vector<std::vector<cplx>> pieces_;
};

inline const IkProfileCache& ik_cache(int k) {
    static std::map<int, IkProfileCache> caches;
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    auto it = caches.find(k);
    if (it == caches.end()) it = caches.emplace(k, IkProfileCache(k)).first;
    return it->second;
}

inline cplx I_k_profile(double x, int k) {
    if (x < 1.0) throw BelowCalibratedRange("I_k_profile: x < 1");
    return ik_cache(k)(x);
}

// Smallest threshold beyond which |Ik_profile(x)| sqrt x stays above
// `floor_frac` times its limiting value on the scanned range.
inline double calibrate_x_min(int k, double floor_frac = 0.3, double scan_hi = 400.0) {
    const double limit = u_tilde_34() / std::sqrt(2.0);
    double x_min = 1.0;
    for (double x = 1.0; x <= scan_hi; x += 0.25) {
        double m = std::abs(I_k_profile(x, k)) * std::sqrt(x);
        if (m < floor_frac * limit) x_min = x + 0.25;
    }
    return x_min;
}

inline cplx V_k_profile(double x, int k, double x_min) {
    if (x < x_min)
        throw BelowCalibratedRange("V_k_profile: x below calibrated threshold " +
                                   std::to_string(x_min));
    return 1.0 / (std::sqrt(x) * I_k_profile(x, k));
}

struct DeltaParams {
    i64 h;      // modulus, shape p^beta * q
    double X;   // >~ h^2/N and X^{1-eps} > N
    double N;   // dyadic window [N, 2N]
    int k;      // weight
    double eps = 0.05;
    double x_min = 2.0;  // calibrated V_k threshold

    void validate() const {
        if (h < 1 || X <= 1.0 || N <= 1.0) throw ParamsViolated("DeltaParams: h,X,N ranges");
        if (X < 0.5 * double(h) * double(h) / N)
            throw ParamsViolated("DeltaParams: X >~ h^2/N violated");
        if (std::pow(X, 1.0 - eps) <= N)
            throw ParamsViolated("DeltaParams: X^{1-eps} > N violated");
    }
};

inline cplx delta_identity_eval(i64 r, i64 n, const DeltaParams& P) {
    P.validate();
    if (r < i64(P.N) || r > i64(2 * P.N) || n < i64(P.N) || n > i64(2 * P.N))
        throw ParamsViolated("delta_identity_eval: r,n must lie in [N,2N]");
    if ((n - r) % P.h != 0) return cplx(0.0);  // the collapsed a-sum vanishes
    const double h = double(P.h);
    cplx pref = 2.0 * PI * std::pow(double(r), 0.25) /
                (i_pow(P.k) * std::sqrt(h) * std::pow(P.X, 0.75));
    cplx V = V_k_profile(std::sqrt(double(r) * P.X) / h, P.k, P.x_min);
    // The quadrature only needs to resolve I to ~1e-6 of the final value's
    // scale; the default absolute target (1e-12) can be unreachable through
    // the cancellation in the off-diagonal integrand.
    QuadOptions qo;
    qo.abs_tol = 1e-6 / std::abs(pref * V);
    qo.rel_tol = 1e-9;
    cplx I = I_k(std::sqrt(double(r)) / h, std::sqrt(double(n)) / h, P.X, P.k, qo);
    return pref * I * V;
}

}  // namespace twistsum
