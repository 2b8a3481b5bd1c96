// ============================================================================
// modular.hpp
//
// Exact modular arithmetic over prime powers and composites: inverses, CRT,
// primitive roots, discrete logarithms, p-adic valuation.
//
// PrimePowerModulus packages an odd prime power p^gamma together with a
// deterministic generator of (Z/p^gamma Z)^x and a discrete-log facility:
// a full lookup table when p^gamma <= TABLE_CAP (exhaustive tests live
// there), baby-step/giant-step above.
// ============================================================================
#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace twistsum {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

struct NonInvertible : std::domain_error {
    explicit NonInvertible(const std::string& msg) : std::domain_error(msg) {}
};
struct NotCoprime : std::domain_error {
    explicit NotCoprime(const std::string& msg) : std::domain_error(msg) {}
};
struct UndefinedForZero : std::domain_error {
    explicit UndefinedForZero(const std::string& msg) : std::domain_error(msg) {}
};

inline i64 gcd_i64(i64 a, i64 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) { i64 t = a % b; a = b; b = t; }
    return a;
}

// Canonical residue in [0, m).
inline i64 mod_norm(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline i64 mul_mod(i64 a, i64 b, i64 m) {
    return i64((i128(a) * i128(b)) % m);
}

inline i64 pow_mod(i64 a, i64 e, i64 m) {
    a = mod_norm(a, m);
    i64 r = 1 % m;
    while (e > 0) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

// mod_inverse(a, m): the unique b in [0,m) with a*b == 1 (mod m).
// Extended Euclid; throws NonInvertible when gcd(a,m) != 1.
inline i64 mod_inverse(i64 a, i64 m) {
    if (m <= 0) throw std::invalid_argument("mod_inverse: modulus must be positive");
    if (m == 1) return 0;
    i64 a0 = mod_norm(a, m);
    i64 r0 = m, r1 = a0;
    i64 t0 = 0, t1 = 1;
    while (r1 != 0) {
        i64 q = r0 / r1;
        i64 r2 = r0 - q * r1; r0 = r1; r1 = r2;
        i64 t2 = t0 - q * t1; t0 = t1; t1 = t2;
    }
    if (r0 != 1)
        throw NonInvertible("mod_inverse: gcd(" + std::to_string(a) + ", " +
                            std::to_string(m) + ") = " + std::to_string(r0));
    return mod_norm(t0, m);
}

// ord_p(n): the exact power of p dividing n.  Undefined at n = 0 (callers
// must branch on the n == 0 mod p^alpha case separately).
inline i64 ord_p(i64 n, i64 p) {
    if (n == 0) throw UndefinedForZero("ord_p: valuation of zero is undefined");
    if (n < 0) n = -n;
    i64 d = 0;
    while (n % p == 0) { n /= p; ++d; }
    return d;
}

// crt_combine: unique residue modulo the product of pairwise-coprime moduli.
// Returns (value, modulus).
inline std::pair<i64, i64> crt_combine(const std::vector<std::pair<i64, i64>>& residues) {
    i64 x = 0, m = 1;
    for (const auto& [v, mod] : residues) {
        if (mod <= 0) throw std::invalid_argument("crt_combine: nonpositive modulus");
        if (gcd_i64(m, mod) != 1)
            throw NotCoprime("crt_combine: moduli not pairwise coprime");
        // solve x' == x (mod m), x' == v (mod mod)
        i64 diff = mod_norm(v - x, mod);
        i64 step = mul_mod(diff, mod_inverse(m % mod, mod), mod);
        x = x + m * step;
        m = m * mod;
        x = mod_norm(x, m);
    }
    return {x, m};
}

// ----------------------------------------------------------------------------
// PrimePowerModulus: odd prime power p^gamma with generator and discrete logs.
//
// Generator policy (deterministic): take the least primitive root g mod p;
// g is a primitive root mod p^gamma for all gamma iff g^(p-1) != 1 mod p^2,
// otherwise g+p works.
// ----------------------------------------------------------------------------
class PrimePowerModulus {
  public:
    static constexpr i64 TABLE_CAP = 100000;  // full dlog table up to here

    PrimePowerModulus(i64 p, i64 gamma) : p_(p), gamma_(gamma) {
        if (p < 3 || !is_prime_(p) || p % 2 == 0)
            throw std::invalid_argument("PrimePowerModulus: p must be an odd prime");
        if (gamma < 1) throw std::invalid_argument("PrimePowerModulus: gamma >= 1");
        q_ = 1;
        for (i64 i = 0; i < gamma; ++i) q_ *= p;
        phi_ = q_ / p * (p - 1);
        g_ = least_primitive_root_(p);
        if (gamma >= 2 && pow_mod(g_, p - 1, p_ * p_) == 1) g_ += p;
        if (q_ <= TABLE_CAP) build_table_();
    }

    i64 p() const { return p_; }
    i64 gamma() const { return gamma_; }
    i64 q_val() const { return q_; }
    i64 phi() const { return phi_; }
    i64 generator() const { return g_; }
    bool has_table() const { return !dlog_table_.empty(); }

    bool is_unit(i64 n) const { return mod_norm(n, q_) % p_ != 0; }

    // Discrete log of a unit u: the exponent d in [0, phi) with g^d == u.
    i64 dlog(i64 u) const {
        u = mod_norm(u, q_);
        if (u % p_ == 0)
            throw NonInvertible("dlog: argument is not a unit mod p^gamma");
        if (!dlog_table_.empty()) return dlog_table_[static_cast<size_t>(u)];
        return dlog_bsgs_(u);
    }

  private:
    i64 p_, gamma_, q_, phi_, g_;
    std::vector<i64> dlog_table_;  // indexed by residue; -1 for non-units

    static bool is_prime_(i64 n) {
        if (n < 2) return false;
        for (i64 d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    static i64 least_primitive_root_(i64 p) {
        // factor p-1, then test candidates g against each prime factor
        std::vector<i64> fac;
        i64 m = p - 1;
        for (i64 d = 2; d * d <= m; ++d)
            if (m % d == 0) {
                fac.push_back(d);
                while (m % d == 0) m /= d;
            }
        if (m > 1) fac.push_back(m);
        for (i64 g = 2; g < p; ++g) {
            bool ok = true;
            for (i64 f : fac)
                if (pow_mod(g, (p - 1) / f, p) == 1) { ok = false; break; }
            if (ok) return g;
        }
        throw std::logic_error("least_primitive_root: none found (impossible for odd prime)");
    }

    void build_table_() {
        dlog_table_.assign(static_cast<size_t>(q_), -1);
        i64 x = 1;
        for (i64 d = 0; d < phi_; ++d) {
            dlog_table_[static_cast<size_t>(x)] = d;
            x = mul_mod(x, g_, q_);
        }
    }

    // Baby-step/giant-step for moduli above the table cap.
    i64 dlog_bsgs_(i64 u) const {
        i64 n = 1;
        while (n * n < phi_) ++n;  // ceil(sqrt(phi))
        std::unordered_map<i64, i64> baby;
        baby.reserve(static_cast<size_t>(n) * 2);
        i64 x = u;
        for (i64 j = 0; j < n; ++j) {  // u * g^j  ->  j
            baby.emplace(x, j);
            x = mul_mod(x, g_, q_);
        }
        i64 gn = pow_mod(g_, n, q_);  // giant step g^n
        i64 y = gn;
        for (i64 i = 1; i <= n + 1; ++i) {  // g^(i*n) == u * g^j  =>  d = i*n - j
            auto it = baby.find(y);
            if (it != baby.end()) {
                i64 d = mod_norm(i * n - it->second, phi_);
                return d;
            }
            y = mul_mod(y, gn, q_);
        }
        throw std::logic_error("dlog_bsgs: not found (argument not generated?)");
    }
};

}  // namespace twistsum
