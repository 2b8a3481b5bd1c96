// ============================================================================
// bump.hpp
//
// The canonical smooth cutoffs used throughout the toolkit.
//
//   U(x) = exp(-1/((x-1)(2-x))) / exp(-4/9)   on (1,2),  0 elsewhere,
//
// peaking at U(3/2) = e^{-32/9}.  U is C^infinity with compact support
// [1,2]; all derivatives vanish at the endpoints, so Fourier-type integrals
// against U decay faster than any power (in fact like exp(-c sqrt(freq))).
//
// V(x) is a second bump of the same shape used for dual-variable cutoffs.
//
// u_tilde_34 = int_1^2 U(x) x^(-1/4) dx is the constant that appears in the
// diagonal main term of the averaged Bessel integral; it is computed once by
// high-order Gauss-Legendre on the (smooth, non-oscillatory) integrand.
// ============================================================================
#pragma once

#include "quadrature.hpp"

namespace twistsum {

inline double bump_U(double x) {
    if (x <= 1.0 || x >= 2.0) return 0.0;
    return std::exp(-1.0 / ((x - 1.0) * (2.0 - x)) + 4.0 / 9.0);
}

inline double bump_V(double x) { return bump_U(x); }

// int_1^2 U(x) x^s dx for real s (smooth integrand; 200 GL40 panels give
// far beyond double accuracy).
inline double u_tilde(double s) {
    const auto& g = gl40();
    KahanSum acc;
    const int P = 200;
    for (int p = 0; p < P; ++p) {
        double lo = 1.0 + double(p) / P, hi = 1.0 + double(p + 1) / P;
        double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        for (int i = 0; i < 40; ++i) {
            double x = c + h * g.x[static_cast<size_t>(i)];
            acc.add(cplx(h * g.w[static_cast<size_t>(i)] * bump_U(x) * std::pow(x, s), 0.0));
        }
    }
    return acc.value().real();
}

inline double u_tilde_34() {
    static const double v = u_tilde(-0.25);
    return v;
}

}  // namespace twistsum
