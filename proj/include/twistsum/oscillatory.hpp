// ============================================================================
// oscillatory.hpp
//
// The Bessel-kernel oscillatory integrals:
//
//   I_k(a,b;X) = int U(x/X) e(2a sqrt x) J_{k-1}(4 pi b sqrt x) dx
//              = X int_1^2 U(u) e(2a sqrt(Xu)) J_{k-1}(4 pi b sqrt(Xu)) du,
//
//   Hankel transform  F_check(y) = 2 pi i^k int F(x) J_{k-1}(4 pi sqrt(xy)) dx.
//
// For panel sizing: the explicit phase 2a sqrt(Xu) runs a sqrt(X)/sqrt(u)
// cycles per unit u, and the kernel J_{k-1}(4 pi b sqrt(Xu)) itself
// oscillates like cos(4 pi b sqrt(Xu) - const) for large argument, i.e.
// b sqrt(X)/sqrt(u) cycles per unit u; the engine gets the first as the
// freq callback and the second through extra_freq.
//
// The diagonal a=b has the closed asymptotic
//
//   I_k(a,a;X) ~ (1+i) i^{k-1} Utilde(3/4) X / (4 pi (a^2 X)^{1/4}),
//
// with Utilde(3/4) = int_1^2 U(x) x^{-1/4} dx: the e(-2a sqrt x) half of the
// Bessel kernel cancels the explicit phase exactly, leaving a smooth
// integrand, while the e(+2a sqrt x) half doubles the frequency and decays
// super-polynomially.
//
// stationary_phase_check verifies the first-derivative (non-stationary)
// bound: if |phase'| >= R on [a,b], amplitude bounded by Z with derivative
// scale P and phase second-derivative mass Y, then
//
//   |int| <= (b-a) Z (Y/(R^2 P^2) + 1/(R P) + 1/(R U'))^A.
// ============================================================================
#pragma once

#include "bessel.hpp"
#include "bump.hpp"
#include "quadrature.hpp"

namespace twistsum {

struct DerivativeBoundViolated : std::runtime_error {
    explicit DerivativeBoundViolated(const std::string& m) : std::runtime_error(m) {}
};

inline cplx I_k(double a, double b, double X, int k, const QuadOptions& opt_in = {}) {
    QuadOptions opt = opt_in;
    const double sX = std::sqrt(X);
    opt.extra_freq = std::abs(b) * sX;
    auto f = [&](double u) -> cplx {
        double s = std::sqrt(X * u);
        return X * bump_U(u) * e_of(2.0 * a * s) * bessel_J(k - 1, 4.0 * PI * b * s);
    };
    auto freq = [&](double u) { return std::abs(a) * sX / std::sqrt(std::max(u, 1.0)); };
    return integrate_oscillatory(f, 1.0, 2.0, freq, opt).value;
}

// Leading term of the diagonal asymptotic above.
inline cplx I_k_diagonal_main(double a, double X, int k) {
    return (cplx(1.0, 1.0) * i_pow(k - 1)) * u_tilde_34() * X /
           (4.0 * PI * std::pow(a * a * X, 0.25));
}

// F_check(y) = 2 pi i^k int F(x) J_{k-1}(4 pi sqrt(xy)) dx, F supported in
// [x_lo, x_hi] strictly inside (0, inf).
inline cplx hankel_transform(const std::function<double(double)>& F, double x_lo, double x_hi,
                             double y, int k, const QuadOptions& opt_in = {}) {
    QuadOptions opt = opt_in;
    opt.extra_freq = std::sqrt(y / x_lo);  // kernel cycles: d/dx 2 sqrt(xy) = sqrt(y/x)
    auto f = [&](double x) -> cplx {
        return cplx(F(x) * bessel_J(k - 1, 4.0 * PI * std::sqrt(x * y)), 0.0);
    };
    cplx v = integrate_oscillatory(f, x_lo, x_hi, nullptr, opt).value;
    return 2.0 * PI * i_pow(k) * v;
}

struct StationaryPhaseReport {
    cplx value;
    double bound = 0.0;
    double min_abs_phase_deriv = 0.0;
    bool pass = false;
};

// First-derivative test: amplitude W with |W| <= Z, |W'| <= Z/U1, phase f
// with |f'| >= R and |f''| <= Y/P^2 on [a,b].  The derivative lower bound is
// confirmed on a fine difference grid before anything is asserted.
inline StationaryPhaseReport stationary_phase_check(const std::function<cplx(double)>& amp,
                                                    const std::function<double(double)>& phase,
                                                    double a, double b, double R, double P,
                                                    double U1, double Y, double Z, int A) {
    const int G = 2000;
    double mind = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= G; ++i) {
        double x = a + (b - a) * i / G;
        double h = (b - a) * 1e-7;
        double lo = std::max(a, x - h), hi = std::min(b, x + h);
        mind = std::min(mind, std::abs(phase(hi) - phase(lo)) / (hi - lo));
    }
    if (mind < R)
        throw DerivativeBoundViolated("stationary_phase_check: |phase'| dips to " +
                                      std::to_string(mind) + " below stated R=" +
                                      std::to_string(R));
    StationaryPhaseReport rep;
    rep.min_abs_phase_deriv = mind;
    rep.value = integrate_amp_phase(amp, phase, a, b).value;
    double base = Y / (R * R * P * P) + 1.0 / (R * P) + 1.0 / (R * U1);
    rep.bound = (b - a) * Z * std::pow(base, double(A));
    rep.pass = std::abs(rep.value) <= rep.bound;
    return rep;
}

}  // namespace twistsum
