// ============================================================================
// fft.hpp
//
// Minimal iterative radix-2 complex FFT, used for double-precision power
// series multiplication when extending coefficient tables into the millions.
// Accuracy for convolution is ~1e-15 relative to the l2 mass of the inputs,
// which is far below the 1e-9 comparison tolerances used downstream.
// ============================================================================
#pragma once

#include <vector>

#include "common.hpp"

namespace twistsum {

inline void fft_inplace(std::vector<cplx>& a, bool inverse) {
    const size_t n = a.size();
    // bit reversal
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 1.0 : -1.0) * TWO_PI / double(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            cplx w(1, 0);
            for (size_t j = 0; j < len / 2; ++j) {
                // resync the running twiddle periodically; the recurrence
                // alone drifts by ~j*eps, which matters once len ~ 2^20+
                if ((j & 63u) == 0 && j)
                    w = cplx(std::cos(ang * double(j)), std::sin(ang * double(j)));
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        const double s = 1.0 / double(n);
        for (auto& z : a) z *= s;
    }
}

// Cyclic-safe linear convolution of real sequences, truncated to out_len.
inline std::vector<double> convolve_truncated(const std::vector<double>& x,
                                              const std::vector<double>& y,
                                              size_t out_len) {
    size_t need = std::min(out_len, x.size() + y.size() - 1);
    size_t n = 1;
    while (n < x.size() + y.size() - 1) n <<= 1;
    std::vector<cplx> a(n, cplx(0, 0));
    // pack both real inputs into one complex transform
    for (size_t i = 0; i < x.size(); ++i) a[i] = cplx(x[i], 0);
    for (size_t i = 0; i < y.size(); ++i) a[i] += cplx(0, y[i]);
    fft_inplace(a, false);
    // X(k) = (A(k) + conj(A(n-k)))/2,  Y(k) = (A(k) - conj(A(n-k)))/(2i)
    std::vector<cplx> prod(n);
    for (size_t k = 0; k < n; ++k) {
        size_t kr = (n - k) & (n - 1);
        cplx Ak = a[k], Akr = std::conj(a[kr]);
        cplx X = 0.5 * (Ak + Akr);
        cplx Y = cplx(0, -0.5) * (Ak - Akr);
        prod[k] = X * Y;
    }
    fft_inplace(prod, true);
    std::vector<double> out(need);
    for (size_t i = 0; i < need; ++i) out[i] = prod[i].real();
    return out;
}

// Linear self-convolution x*x truncated to out_len, using a single complex
// array (half the footprint of convolve_truncated) — needed when extending
// coefficient tables into the tens of millions under tight memory.
inline std::vector<double> self_convolve_truncated(const std::vector<double>& x,
                                                   size_t out_len) {
    size_t need = std::min(out_len, 2 * x.size() - 1);
    size_t n = 1;
    while (n < 2 * x.size() - 1) n <<= 1;
    std::vector<cplx> a(n, cplx(0, 0));
    for (size_t i = 0; i < x.size(); ++i) a[i] = cplx(x[i], 0);
    fft_inplace(a, false);
    for (auto& z : a) z *= z;
    fft_inplace(a, true);
    std::vector<double> out(need);
    for (size_t i = 0; i < need; ++i) out[i] = a[i].real();
    return out;
}

}  // namespace twistsum
