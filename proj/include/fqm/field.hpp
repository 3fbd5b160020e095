#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fqm/cyc.hpp"

namespace fqm {

/// Index of a finite-field element: the base-p integer sum c_i p^i of its
/// coefficient vector over F_p in the power basis of the field modulus.
/// Prime-field elements 0..p-1 therefore have the same index in every field.
using Elem = std::uint32_t;

/// The finite field F_{p^e} = F_p[x]/(modulus).
///
/// The modulus is the least monic irreducible polynomial of degree e over F_p
/// when polynomials are ordered by the integer sum_{i<e} c_i p^i, so the
/// representation is reproducible across runs. Multiplication goes through
/// discrete log tables; addition is XOR for p = 2, a table for small odd
/// fields and a digit loop otherwise.
///
/// Fields are created once by make_field() and live for the whole process,
/// so `const Field*` is a stable handle.
class Field {
 public:
  Field(int p, int e);
  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

  int p() const { return p_; }
  int degree() const { return e_; }
  std::uint32_t size() const { return size_; }
  /// Modulus coefficients over F_p, low degree first, length e+1, monic.
  const std::vector<int>& modulus() const { return modulus_; }

  Elem add(Elem a, Elem b) const {
    if (p_ == 2) return a ^ b;
    if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * size_ + b];
    return add_slow(a, b);
  }
  Elem neg(Elem a) const { return p_ == 2 ? a : neg_[a]; }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    std::uint32_t s = log_[a] + log_[b];
    if (s >= size_ - 1) s -= size_ - 1;
    return exp_[s];
  }
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::int64_t k) const;
  /// Image of an integer in the prime field.
  Elem from_int(long v) const;
  /// x^{p^k}.
  Elem frobenius(Elem x, int k = 1) const;
  /// Tr_{F_{p^e}/F_p}(x) as an integer in [0, p).
  int trace_to_prime(Elem x) const { return trace_[x]; }
  /// psi(x) = zeta_p^{Tr(x)}.
  CycScalar psi(Elem x) const { return CycScalar::zeta_power(p_, trace_[x]); }
  /// Primitive element (generator of the multiplicative group).
  Elem generator() const { return exp_[1]; }
  /// Multiplicative order of a nonzero element.
  std::uint32_t order(Elem a) const;

  std::vector<int> coeffs(Elem x) const;
  Elem from_coeffs(std::span<const int> c) const;
  std::string str(Elem x) const;

 private:
  Elem add_slow(Elem a, Elem b) const;
  Elem mul_slow(Elem a, Elem b) const;

  int p_;
  int e_;
  std::uint32_t size_;
  std::vector<int> modulus_;
  std::vector<std::uint32_t> log_;
  std::vector<Elem> exp_;
  std::vector<Elem> neg_;
  std::vector<Elem> add_table_;
  std::vector<std::uint8_t> trace_;
};

/// The unique registered F_{p^e}. Throws std::invalid_argument when p is not
/// prime, e < 1, or p^e exceeds the supported table size (2^20).
const Field& make_field(int p, int e);

bool is_prime(long n);

/// A fixed embedding F_q = base -> top = F_{q^d}, with trace and norm.
///
/// The embedding sends the root of base's modulus to the least-index root of
/// that polynomial in top; it is computed once per (base, top) pair.
class Extension {
 public:
  Extension(const Field& base, const Field& top);

  const Field& base() const { return *base_; }
  const Field& top() const { return *top_; }
  /// Relative degree [top : base].
  int degree() const { return degree_; }
  /// q = |base|.
  std::uint32_t q() const { return base_->size(); }

  Elem embed(Elem base_elem) const { return up_[base_elem]; }
  bool in_base(Elem top_elem) const { return down_[top_elem] != kNone; }
  /// Inverse of embed; throws std::domain_error if x is not in the image.
  Elem restrict(Elem top_elem) const;
  /// x^{q^k} in top.
  Elem frob_q(Elem x, int k = 1) const;
  /// Tr_{top/base}(x) as a base element.
  Elem trace(Elem x) const;
  /// N_{top/base}(x) as a base element.
  Elem norm(Elem x) const;

 private:
  static constexpr Elem kNone = 0xffffffffu;
  const Field* base_;
  const Field* top_;
  int degree_;
  std::vector<Elem> up_;
  std::vector<Elem> down_;
};

/// The registered extension F_{q^d} / F_q where base = F_q.
const Extension& extension(const Field& base, int d);

/// Tr from F_{p^e} to its subfield F_{p^d} (d | e), expressed in the
/// registered F_{p^d}. Throws std::invalid_argument when d does not divide e.
Elem trace(const Field& f, Elem x, int d);

}  // namespace fqm
