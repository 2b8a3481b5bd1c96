// ============================================================================
// cuspform.hpp
//
// Hecke eigenvalue tables for the built-in holomorphic newforms:
//
//   * the discriminant form (weight 12, level 1): tau(n) from the exact
//     integer q-expansion  Delta = q prod (1-q^n)^24, computed through
//     Jacobi's sparse cube
//         prod (1-q^n)^3 = sum_{j>=0} (-1)^j (2j+1) q^(j(j+1)/2)
//     raised to the 8th power (one sparse-sparse square, then six
//     dense-sparse passes) in 128-bit integers;
//
//   * a weight 16, level 1 form: E4 * Delta with
//     E4 = 1 + 240 sum sigma_3(n) q^n, also exact.
//
// Normalization: lambda(n) = a(n) / n^((k-1)/2), so lambda(1) = 1 and
// |lambda(n)| <= d(n)  (Deligne).
//
// Exact integer expansion is used up to EXACT_CAP; beyond that the table is
// extended in double precision by FFT-squared power series (relative error
// ~1e-15, cross-checked against the exact range at construction).  The
// extension exists because the decomposition identity's dual sums need
// lambda(n) for n into the millions, where 128-bit exact passes are too slow
// on one core.
// ============================================================================
#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "character.hpp"
#include "common.hpp"
#include "fft.hpp"
#include "modular.hpp"

namespace twistsum {

struct MissingPrime : std::runtime_error {
    explicit MissingPrime(const std::string& m) : std::runtime_error(m) {}
};
struct OutOfRange : std::out_of_range {
    explicit OutOfRange(const std::string& m) : std::out_of_range(m) {}
};
struct CoefficientTableTooShort : std::runtime_error {
    explicit CoefficientTableTooShort(const std::string& m) : std::runtime_error(m) {}
};
struct LoadError : std::runtime_error {
    explicit LoadError(const std::string& m) : std::runtime_error(m) {}
};

// Jacobi's sparse series prod(1-q^n)^3 up to degree n_max (inclusive):
// pairs (degree, coefficient).
inline std::vector<std::pair<i64, i64>> eta_cube_sparse(i64 n_max) {
    std::vector<std::pair<i64, i64>> f;
    for (i64 j = 0;; ++j) {
        i64 d = j * (j + 1) / 2;
        if (d > n_max) break;
        f.emplace_back(d, (j % 2 == 0) ? (2 * j + 1) : -(2 * j + 1));
    }
    return f;
}

// Exact coefficients of prod(1-q^n)^24 up to degree n_max, in 128-bit ints.
// (tau(n) is the coefficient of q^(n-1) here.)  Magnitudes stay far below
// the 128-bit limit for n_max <= ~2e6.
inline std::vector<i128> eta24_exact(i64 n_max) {
    const auto f = eta_cube_sparse(n_max);
    const size_t L = static_cast<size_t>(n_max) + 1;
    // f^2 by sparse x sparse
    std::vector<i128> acc(L, 0);
    for (const auto& [d1, c1] : f)
        for (const auto& [d2, c2] : f) {
            i64 d = d1 + d2;
            if (d > n_max) break;  // f is sorted by degree
            acc[static_cast<size_t>(d)] += i128(c1) * c2;
        }
    // six dense x sparse passes: acc *= f, repeated
    std::vector<i128> next(L);
    for (int pass = 0; pass < 6; ++pass) {
        std::fill(next.begin(), next.end(), i128(0));
        for (const auto& [d, c] : f) {
            const i128 cc = c;
            const size_t lim = L - static_cast<size_t>(d);
            for (size_t i = 0; i < lim; ++i)
                next[i + static_cast<size_t>(d)] += cc * acc[i];
        }
        std::swap(acc, next);
    }
    return acc;
}

// Double-precision coefficients of prod(1-q^n)^24 up to degree n_max via
// three FFT squarings of the sparse cube.
inline std::vector<double> eta24_double(i64 n_max) {
    const auto f = eta_cube_sparse(n_max);
    // f^2 directly from the sparse pairs (O(#pairs^2) = O(n_max))
    std::vector<double> sq(static_cast<size_t>(n_max) + 1, 0.0);
    for (const auto& [d1, c1] : f)
        for (const auto& [d2, c2] : f) {
            i64 d = d1 + d2;
            if (d > n_max) break;  // f is sorted by degree
            sq[static_cast<size_t>(d)] += double(c1) * double(c2);
        }
    auto q4 = self_convolve_truncated(sq, sq.size());  // f^4
    return self_convolve_truncated(q4, q4.size());     // f^8
}

// d(n) for n = 1..N (divisor-count sieve).
inline std::vector<i64> divisor_count_sieve(i64 N) {
    std::vector<i64> d(static_cast<size_t>(N) + 1, 0);
    for (i64 i = 1; i <= N; ++i)
        for (i64 j = i; j <= N; j += i) d[static_cast<size_t>(j)]++;
    return d;
}

class HeckeEigenvalueTable {
  public:
    static constexpr i64 EXACT_CAP = 200000;

    i64 weight() const { return k_; }
    i64 level() const { return M_; }
    i64 n_max() const { return n_max_; }
    bool nebentypus_trivial() const { return !xi_.has_value(); }
    const std::optional<DirichletCharacter>& nebentypus() const { return xi_; }

    double lambda(i64 n) const {
        if (n < 1 || n > n_max_)
            throw OutOfRange("lambda: n out of table range");
        return lam_[static_cast<size_t>(n)];
    }
    const std::vector<double>& lambdas() const { return lam_; }

    // Exact integer coefficient a(n) (unnormalized), available for
    // n <= exact_up_to().
    i128 exact_coefficient(i64 n) const {
        if (n < 1 || n > exact_cap_)
            throw OutOfRange("exact_coefficient: beyond exact range");
        return exact_[static_cast<size_t>(n)];
    }
    i64 exact_up_to() const { return exact_cap_; }

    // --- constructors -------------------------------------------------------

    // Discriminant form, weight 12, level 1.
    static HeckeEigenvalueTable delta_form(i64 n_max) {
        HeckeEigenvalueTable t;
        t.k_ = 12;
        t.M_ = 1;
        t.n_max_ = n_max;
        t.exact_cap_ = std::min(n_max, EXACT_CAP);
        auto f8 = eta24_exact(t.exact_cap_ - 1);  // coefficient of q^(n-1)
        t.exact_.assign(static_cast<size_t>(t.exact_cap_) + 1, 0);
        for (i64 n = 1; n <= t.exact_cap_; ++n)
            t.exact_[static_cast<size_t>(n)] = f8[static_cast<size_t>(n - 1)];
        t.lam_.assign(static_cast<size_t>(n_max) + 1, 0.0);
        for (i64 n = 1; n <= t.exact_cap_; ++n)
            t.lam_[static_cast<size_t>(n)] =
                double(t.exact_[static_cast<size_t>(n)]) / std::pow(double(n), 5.5);
        if (n_max > t.exact_cap_) {
            // Extend in doubling segments.  Truncating the power series at
            // any length reproduces the same coefficients, while the FFT
            // roundoff — absolute, set by the largest coefficients present
            // in the transform — stays proportional to the coefficients in
            // the top half of each segment.  A single full-length build
            // would swamp the mid-range coefficients.
            i64 done = t.exact_cap_;
            while (done < n_max) {
                const i64 hi = std::min(n_max, 2 * done);
                auto f8d = eta24_double(hi - 1);
                for (i64 n = done + 1; n <= hi; ++n)
                    t.lam_[static_cast<size_t>(n)] =
                        f8d[static_cast<size_t>(n - 1)] / std::pow(double(n), 5.5);
                // sentinel: the bottom of this segment (its worst-conditioned
                // region) must agree with the previously computed values
                for (i64 n = done - 1000; n <= done; ++n) {
                    double ex = t.lam_[static_cast<size_t>(n)];
                    double fl = f8d[static_cast<size_t>(n - 1)] / std::pow(double(n), 5.5);
                    if (std::abs(ex - fl) > 1e-9 * (1.0 + std::abs(ex)))
                        throw std::runtime_error(
                            "delta_form: float extension disagrees on segment overlap");
                }
                done = hi;
            }
            // Hecke-relation sweep across the extended range:
            // lambda(3) lambda(n/3) = lambda(n) + [9|n] lambda(n/9)
            for (double g = double(t.exact_cap_); g < double(n_max) / 1.07;
                 g *= 1.07) {
                i64 n = 3 * (i64(g) / 3 + 1);
                if (n > n_max) break;
                double lhs = t.lam_[3] * t.lam_[static_cast<size_t>(n / 3)];
                double rhs = t.lam_[static_cast<size_t>(n)] +
                             (n % 9 == 0 ? t.lam_[static_cast<size_t>(n / 9)] : 0.0);
                if (std::abs(lhs - rhs) > 1e-8 * (1.0 + std::abs(lhs)))
                    throw std::runtime_error(
                        "delta_form: float extension fails Hecke consistency");
            }
        }
        return t;
    }

    // Weight 16, level 1 form: E4 * Delta, exact 128-bit convolution.
    // O(n_max^2); intended for cross-checks at moderate n_max.
    static HeckeEigenvalueTable weight16_form(i64 n_max) {
        if (n_max > 30000)
            throw std::invalid_argument("weight16_form: n_max too large for O(n^2) build");
        HeckeEigenvalueTable t;
        t.k_ = 16;
        t.M_ = 1;
        t.n_max_ = n_max;
        t.exact_cap_ = n_max;
        auto tau = eta24_exact(n_max - 1);  // tau(n) = tau[n-1]
        // sigma_3 sieve
        std::vector<i64> s3(static_cast<size_t>(n_max) + 1, 0);
        for (i64 i = 1; i <= n_max; ++i) {
            i64 i3 = i * i * i;
            for (i64 j = i; j <= n_max; j += i) s3[static_cast<size_t>(j)] += i3;
        }
        t.exact_.assign(static_cast<size_t>(n_max) + 1, 0);
        for (i64 n = 1; n <= n_max; ++n) {
            i128 c = tau[static_cast<size_t>(n - 1)];  // E4(0) * tau(n)
            for (i64 m = 1; m <= n - 1; ++m)
                c += i128(240) * s3[static_cast<size_t>(m)] *
                     tau[static_cast<size_t>(n - m - 1)];
            t.exact_[static_cast<size_t>(n)] = c;
        }
        t.lam_.assign(static_cast<size_t>(n_max) + 1, 0.0);
        for (i64 n = 1; n <= n_max; ++n)
            t.lam_[static_cast<size_t>(n)] =
                double(t.exact_[static_cast<size_t>(n)]) / std::pow(double(n), 7.5);
        return t;
    }

    // Rebuild all lambda(n) from the prime values via the Hecke recursion
    //   lambda(p^(j+1)) = lambda(p) lambda(p^j) - lambda(p^(j-1))
    // (level 1 / p coprime to level) and coprime multiplicativity.
    // Requires every prime <= n_max to be present (<= primes_given_up_to).
    HeckeEigenvalueTable hecke_extend(i64 primes_given_up_to) const {
        HeckeEigenvalueTable t = *this;
        const i64 N = n_max_;
        // smallest prime factor sieve
        std::vector<i64> spf(static_cast<size_t>(N) + 1, 0);
        for (i64 i = 2; i <= N; ++i)
            if (spf[static_cast<size_t>(i)] == 0)
                for (i64 j = i; j <= N; j += i)
                    if (spf[static_cast<size_t>(j)] == 0) spf[static_cast<size_t>(j)] = i;
        std::vector<double>& L = t.lam_;
        L.assign(static_cast<size_t>(N) + 1, 0.0);
        L[1] = 1.0;
        for (i64 n = 2; n <= N; ++n) {
            i64 p = spf[static_cast<size_t>(n)];
            if (p == n) {  // prime: must come from the source table
                if (n > primes_given_up_to)
                    throw MissingPrime("hecke_extend: prime beyond given range: " +
                                       std::to_string(n));
                L[static_cast<size_t>(n)] = lam_[static_cast<size_t>(n)];
                continue;
            }
            i64 pe = p, m = n / p;
            while (m % p == 0) { m /= p; pe *= p; }
            if (m > 1) {  // coprime split
                L[static_cast<size_t>(n)] =
                    L[static_cast<size_t>(pe)] * L[static_cast<size_t>(m)];
            } else {  // pure prime power p^j, j >= 2: recursion
                L[static_cast<size_t>(n)] =
                    L[static_cast<size_t>(p)] * L[static_cast<size_t>(n / p)] -
                    L[static_cast<size_t>(n / p / p)];
            }
        }
        return t;
    }

    // Partial Rankin-Selberg sum: sum_{n<=N} lambda(n)^2.
    double rankin_selberg_partial(i64 N) const {
        if (N < 1 || N > n_max_) throw OutOfRange("rankin_selberg_partial: N out of range");
        KahanSum acc;
        for (i64 n = 1; n <= N; ++n) {
            double l = lam_[static_cast<size_t>(n)];
            acc.add(cplx(l * l, 0));
        }
        return acc.value().real();
    }

    // --- import / export ----------------------------------------------------
    //
    // Format: header "#k=<k> M=<M> xi=<index or trivial>", then lines
    // "n<TAB>lambda_n".  The loader enforces lambda(1)=1 and the Deligne
    // bound |lambda(n)| <= d(n) with tolerance 1e-6.

    static HeckeEigenvalueTable load(std::istream& is) {
        HeckeEigenvalueTable t;
        std::string line;
        if (!std::getline(is, line) || line.rfind("#k=", 0) != 0)
            throw LoadError("coefficient import: missing '#k=' header");
        long k = 0, M = 0;
        char xibuf[64] = {0};
        if (std::sscanf(line.c_str(), "#k=%ld M=%ld xi=%63s", &k, &M, xibuf) != 3)
            throw LoadError("coefficient import: malformed header: " + line);
        t.k_ = k;
        t.M_ = M;
        std::string xis(xibuf);
        if (xis != "trivial") t.xi_index_hint_ = std::stoll(xis);
        std::vector<double> vals{0.0};  // 1-indexed
        i64 expect = 1;
        while (std::getline(is, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            i64 n;
            double l;
            if (!(ls >> n >> l)) throw LoadError("coefficient import: bad line: " + line);
            if (n != expect)
                throw LoadError("coefficient import: expected n=" + std::to_string(expect));
            vals.push_back(l);
            ++expect;
        }
        if (vals.size() < 2) throw LoadError("coefficient import: no coefficients");
        if (std::abs(vals[1] - 1.0) > 1e-6)
            throw LoadError("coefficient import: lambda(1) != 1");
        t.n_max_ = i64(vals.size()) - 1;
        auto d = divisor_count_sieve(t.n_max_);
        for (i64 n = 1; n <= t.n_max_; ++n)
            if (std::abs(vals[static_cast<size_t>(n)]) >
                double(d[static_cast<size_t>(n)]) + 1e-6)
                throw LoadError("coefficient import: Deligne bound violated at n=" +
                                std::to_string(n));
        t.lam_ = std::move(vals);
        t.exact_cap_ = 0;
        return t;
    }

    void save(std::ostream& os) const {
        os << "#k=" << k_ << " M=" << M_ << " xi="
           << (xi_ ? std::to_string(xi_->index()) : std::string("trivial")) << "\n";
        char buf[64];
        for (i64 n = 1; n <= n_max_; ++n) {
            std::snprintf(buf, sizeof buf, "%lld\t%.17g\n",
                          static_cast<long long>(n), lam_[static_cast<size_t>(n)]);
            os << buf;
        }
    }

    i64 xi_index_hint() const { return xi_index_hint_; }

  private:
    i64 k_ = 12, M_ = 1, n_max_ = 0, exact_cap_ = 0;
    std::optional<DirichletCharacter> xi_;  // trivial when empty
    i64 xi_index_hint_ = -1;                // from import header, if any
    std::vector<double> lam_;               // 1-indexed normalized coefficients
    std::vector<i128> exact_;               // 1-indexed unnormalized, exact range
};

inline HeckeEigenvalueTable delta_coefficients(i64 n_max) {
    return HeckeEigenvalueTable::delta_form(n_max);
}

}  // namespace twistsum
