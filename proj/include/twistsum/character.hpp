// ============================================================================
// character.hpp
//
// Dirichlet characters modulo an odd prime power p^gamma, represented by an
// index j against the fixed generator g of (Z/p^gamma Z)^x:
//
//     chi(g) = e(j / phi(p^gamma)),   chi(n) = e(j * dlog(n) / phi)
//
// for units n, and chi(n) = 0 otherwise.  chi is primitive (conductor exactly
// p^gamma) iff it does not factor through p^(gamma-1), i.e. p does not divide
// j when gamma >= 2, and j != 0 when gamma = 1.
//
// Also provided: Gauss sums tau(chi) = sum_a chi(a) e(a/p^gamma) by direct
// summation, and the induced additive character
//
//     psi(x) = chi(1 + x p^(gamma-nu)),
//
// which for primitive chi is a primitive additive character modulo p^nu
// (nu <= gamma/2; the shift map x -> 1 + x p^(gamma-nu) is then a
// homomorphism from (Z/p^nu, +) into the units).
//
// The unit-root table e(k/phi) is shared between all characters of the same
// modulus (enumerating all primitive chi mod 11^4 must not allocate
// phi^2 complex numbers).
// ============================================================================
#pragma once

#include <memory>

#include "common.hpp"
#include "modular.hpp"

namespace twistsum {

struct NotPrimitive : std::domain_error {
    explicit NotPrimitive(const std::string& msg) : std::domain_error(msg) {}
};

class DirichletCharacter {
  public:
    DirichletCharacter(std::shared_ptr<const PrimePowerModulus> m, i64 index)
        : mod_(std::move(m)), index_(mod_norm(index, mod_->phi())),
          roots_(std::make_shared<UnitRoots>(mod_->phi())) {}

    // Shared-table constructor (roots must be the e(k/phi) table).
    DirichletCharacter(std::shared_ptr<const PrimePowerModulus> m, i64 index,
                       std::shared_ptr<const UnitRoots> roots)
        : mod_(std::move(m)), index_(mod_norm(index, mod_->phi())),
          roots_(std::move(roots)) {
        if (roots_->modulus() != mod_->phi())
            throw std::invalid_argument("DirichletCharacter: root table has wrong order");
    }

    const PrimePowerModulus& modulus() const { return *mod_; }
    std::shared_ptr<const PrimePowerModulus> modulus_ptr() const { return mod_; }
    i64 index() const { return index_; }

    bool is_primitive() const {
        if (mod_->gamma() == 1) return index_ != 0;
        return index_ % mod_->p() != 0;
    }
    bool is_trivial() const { return index_ == 0; }

    // chi(n): e(j*dlog(n)/phi) for units, 0 for non-units.  Unit roots come
    // from a precomputed table of e(k/phi), so million-term sums do not
    // accumulate trig error.
    cplx operator()(i64 n) const {
        i64 r = mod_norm(n, mod_->q_val());
        if (r % mod_->p() == 0) return cplx(0, 0);
        return (*roots_)(index_ * mod_->dlog(r));
    }

    DirichletCharacter conj() const {
        return DirichletCharacter(mod_, -index_, roots_);
    }

    // tau(chi) = sum_{a mod p^gamma} chi(a) e(a / p^gamma).  Direct summation;
    // moduli in use are <= ~1e5.  For primitive chi, |tau| = p^(gamma/2).
    // An external e(a/q) table may be passed when computing many Gauss sums
    // for the same modulus.
    cplx gauss_sum(const UnitRoots* eq_table = nullptr) const {
        if (!is_primitive())
            throw NotPrimitive("gauss_sum: character is not primitive");
        const i64 q = mod_->q_val();
        std::unique_ptr<UnitRoots> own;
        if (!eq_table) {
            own = std::make_unique<UnitRoots>(q);
            eq_table = own.get();
        } else if (eq_table->modulus() != q) {
            throw std::invalid_argument("gauss_sum: root table has wrong modulus");
        }
        KahanSum acc;
        for (i64 a = 1; a < q; ++a) {
            if (a % mod_->p() == 0) continue;
            acc.add((*this)(a) * (*eq_table)(a));
        }
        return acc.value();
    }

  private:
    std::shared_ptr<const PrimePowerModulus> mod_;
    i64 index_;
    std::shared_ptr<const UnitRoots> roots_;  // e(k/phi) table, shared
};

// All primitive characters mod p^gamma: indices j in [0, phi) with the
// primitivity criterion above.  Count = phi(p^gamma) - phi(p^(gamma-1)).
inline std::vector<DirichletCharacter>
enumerate_primitive(const std::shared_ptr<const PrimePowerModulus>& m) {
    std::vector<DirichletCharacter> out;
    const i64 phi = m->phi();
    auto roots = std::make_shared<const UnitRoots>(phi);
    for (i64 j = 0; j < phi; ++j) {
        DirichletCharacter chi(m, j, roots);
        if (chi.is_primitive()) out.push_back(chi);
    }
    return out;
}

// psi_additive: psi(x) = chi(1 + x p^(gamma-nu)).  Additive in x mod p^nu
// when nu <= gamma/2 (then (1+ap^(g-nu))(1+bp^(g-nu)) = 1+(a+b)p^(g-nu)
// mod p^gamma since 2(gamma-nu) >= gamma); primitive mod p^nu when chi is.
inline cplx psi_additive(const DirichletCharacter& chi, i64 nu, i64 x) {
    const auto& m = chi.modulus();
    if (nu < 1 || nu > m.gamma())
        throw std::invalid_argument("psi_additive: need 1 <= nu <= gamma");
    i64 q = m.q_val();
    i64 shift = 1;
    for (i64 i = 0; i < m.gamma() - nu; ++i) shift *= m.p();
    i64 arg = mod_norm(1 + mul_mod(mod_norm(x, q), shift % q, q), q);
    return chi(arg);
}

}  // namespace twistsum
