// ============================================================================
// common.hpp
//
// Shared small utilities: the additive character e(x) = exp(2*pi*i*x), a
// compensated (Kahan) complex accumulator for long sums, a table of unit
// roots e(k/m) for exact-period exponential sums, and a tiny deterministic
// RNG (splitmix64) for sampled grids.
// ============================================================================
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace twistsum {

using cplx = std::complex<double>;

inline constexpr double PI = 3.14159265358979323846264338327950288;
inline constexpr double TWO_PI = 2.0 * PI;

// e(x) = exp(2 pi i x).  The argument is reduced mod 1 first so that huge
// phases (frequencies up to ~1e9 appear in the pipeline sums) do not lose
// precision inside sin/cos argument reduction more than necessary.
inline cplx e_of(double x) {
    double r = x - std::floor(x);
    double t = TWO_PI * r;
    return cplx(std::cos(t), std::sin(t));
}

// i^k for integer k (exact).
inline cplx i_pow(long k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return cplx(1, 0);
        case 1: return cplx(0, 1);
        case 2: return cplx(-1, 0);
        default: return cplx(0, -1);
    }
}

// --------------------------------------------------------------------------
// Kahan-compensated complex accumulator.  Used in every sum whose length can
// exceed ~1e6 terms; the equality tests downstream demand 1e-9 absolute.
// --------------------------------------------------------------------------
struct KahanSum {
    double sr = 0, si = 0;  // running sums
    double cr = 0, ci = 0;  // compensations

    inline void add(const cplx& z) {
        double yr = z.real() - cr;
        double tr = sr + yr;
        cr = (tr - sr) - yr;
        sr = tr;
        double yi = z.imag() - ci;
        double ti = si + yi;
        ci = (ti - si) - yi;
        si = ti;
    }
    inline cplx value() const { return cplx(sr, si); }
};

// --------------------------------------------------------------------------
// Table of the m-th roots of unity: root(j) = e(j/m), with j reduced mod m.
// Direct per-index evaluation (not repeated multiplication), so each entry
// is accurate to ~1 ulp; memory is the only cost.
// --------------------------------------------------------------------------
class UnitRoots {
  public:
    explicit UnitRoots(std::int64_t m) : m_(m), tab_(static_cast<size_t>(m)) {
        if (m <= 0) throw std::invalid_argument("UnitRoots: modulus must be positive");
        for (std::int64_t j = 0; j < m; ++j)
            tab_[static_cast<size_t>(j)] = e_of(double(j) / double(m));
    }
    std::int64_t modulus() const { return m_; }
    inline const cplx& operator()(std::int64_t j) const {
        std::int64_t r = j % m_;
        if (r < 0) r += m_;
        return tab_[static_cast<size_t>(r)];
    }

  private:
    std::int64_t m_;
    std::vector<cplx> tab_;
};

// --------------------------------------------------------------------------
// splitmix64: deterministic, seedable, trivially reproducible across
// platforms (unlike std::mt19937's distribution wrappers).
// --------------------------------------------------------------------------
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    inline std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // uniform in [0,1)
    inline double next_double() { return double(next() >> 11) * 0x1.0p-53; }
    // uniform integer in [0, n)
    inline std::uint64_t next_below(std::uint64_t n) { return next() % n; }
};

}  // namespace twistsum
