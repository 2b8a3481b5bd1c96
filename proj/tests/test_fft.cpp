// FFT-based power series multiplication against direct O(n^2) convolution.
#include <gtest/gtest.h>

#include "twistsum/common.hpp"
#include "twistsum/fft.hpp"

using namespace twistsum;

namespace {
std::vector<double> convolve_direct(const std::vector<double>& x,
                                    const std::vector<double>& y, size_t out_len) {
    std::vector<double> out(out_len, 0.0);
    for (size_t i = 0; i < x.size(); ++i) {
        if (i >= out_len) break;
        for (size_t j = 0; j < y.size() && i + j < out_len; ++j)
            out[i + j] += x[i] * y[j];
    }
    return out;
}
}  // namespace

TEST(Fft, RoundTrip) {
    SplitMix64 rng(11);
    std::vector<cplx> a(256);
    for (auto& z : a) z = cplx(rng.next_double() - 0.5, rng.next_double() - 0.5);
    auto b = a;
    fft_inplace(b, false);
    fft_inplace(b, true);
    for (size_t i = 0; i < a.size(); ++i)
        EXPECT_NEAR(std::abs(a[i] - b[i]), 0.0, 1e-13);
}

TEST(Fft, ConvolutionMatchesDirect) {
    SplitMix64 rng(3);
    for (size_t n : {size_t(10), size_t(100), size_t(1000)}) {
        std::vector<double> x(n), y(n + 7);
        for (auto& v : x) v = rng.next_double() * 2.0 - 1.0;
        for (auto& v : y) v = rng.next_double() * 2.0 - 1.0;
        size_t out_len = n + 5;
        auto fast = convolve_truncated(x, y, out_len);
        auto slow = convolve_direct(x, y, out_len);
        for (size_t i = 0; i < out_len; ++i)
            EXPECT_NEAR(fast[i], slow[i], 1e-11 * double(n));
    }
}

TEST(Fft, SelfConvolutionMatchesDirect) {
    SplitMix64 rng(5);
    std::vector<double> x(2000);
    for (auto& v : x) v = rng.next_double() * 2.0 - 1.0;
    auto fast = self_convolve_truncated(x, x.size());
    auto slow = convolve_direct(x, x, x.size());
    for (size_t i = 0; i < x.size(); ++i)
        EXPECT_NEAR(fast[i], slow[i], 1e-9);
}

TEST(Fft, LongTransformPhaseAccuracy) {
    // a pure root-of-unity input transforms to a single spike; long lengths
    // stress twiddle-factor drift
    const size_t n = 1 << 18;
    const size_t bin = 12345;
    std::vector<cplx> a(n);
    for (size_t j = 0; j < n; ++j)
        a[j] = e_of(double(bin) * double(j) / double(n));
    fft_inplace(a, false);
    for (size_t j : {size_t(0), bin - 1, bin, bin + 1, n / 2}) {
        double want = (j == bin) ? double(n) : 0.0;
        EXPECT_NEAR(std::abs(a[j]), want, 1e-7 * double(n));
    }
}
