#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fqm/rational.hpp"

namespace fqm {

/// Exact element of Q(zeta_p) in the basis 1, zeta, ..., zeta^{p-2}.
///
/// The relation 1 + zeta + ... + zeta^{p-1} = 0 is applied eagerly, so two
/// values are equal iff their coefficient vectors are equal. For p = 2 the
/// basis is {1} and zeta = -1.
class CycScalar {
 public:
  CycScalar() = default;
  /// The rational r viewed in Q(zeta_p).
  CycScalar(int p, const Rational& r);
  /// zeta_p^k.
  static CycScalar zeta_power(int p, long k);
  /// Canonical form of sum_i raw[i] zeta^i, raw.size() <= p.
  static CycScalar normalize(int p, std::span<const Rational> raw);
  /// sum_k counts[k] zeta^k with integer counts, counts.size() == p.
  static CycScalar from_counts(int p, std::span<const std::int64_t> counts);

  int prime() const { return p_; }
  bool valid() const { return p_ != 0; }
  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const;
  /// True when the value lies in Q; then rational() returns it.
  bool is_rational() const;
  Rational rational() const;

  CycScalar operator-() const;
  CycScalar& operator+=(const CycScalar& o);
  CycScalar& operator-=(const CycScalar& o);
  CycScalar& operator*=(const CycScalar& o);
  CycScalar& operator*=(const Rational& r);
  /// this * zeta^k.
  CycScalar times_zeta(long k) const;

  friend CycScalar operator+(CycScalar a, const CycScalar& b) { return a += b; }
  friend CycScalar operator-(CycScalar a, const CycScalar& b) { return a -= b; }
  friend CycScalar operator*(CycScalar a, const CycScalar& b) { return a *= b; }
  friend CycScalar operator*(CycScalar a, const Rational& r) { return a *= r; }
  friend CycScalar operator*(const Rational& r, CycScalar a) { return a *= r; }
  friend bool operator==(const CycScalar& a, const CycScalar& b);

  /// Human-readable form, e.g. "1+2*z" or "-1/4".
  std::string str() const;

 private:
  void check_compatible(const CycScalar& o) const;

  int p_ = 0;
  std::vector<Rational> c_;
};

}  // namespace fqm

template <>
struct std::hash<fqm::CycScalar> {
  std::size_t operator()(const fqm::CycScalar& v) const noexcept {
    std::size_t h = static_cast<std::size_t>(v.prime());
    for (const auto& r : v.coeffs()) h = h * 0x9e3779b97f4a7c15ull + std::hash<fqm::Rational>{}(r);
    return h;
  }
};
