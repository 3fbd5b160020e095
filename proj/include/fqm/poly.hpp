#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fqm/field.hpp"

namespace fqm {

/// Dense univariate polynomial over a finite field, low degree first.
/// The coefficient vector never has trailing zeros; the zero polynomial is
/// empty and has degree -1.
class Poly {
 public:
  Poly() = default;
  explicit Poly(const Field& f) : f_(&f) {}
  Poly(const Field& f, std::vector<Elem> c);

  static Poly constant(const Field& f, Elem c);
  static Poly monomial(const Field& f, Elem c, int deg);
  static Poly x(const Field& f) { return monomial(f, 1, 1); }
  /// The monic polynomial of degree deg whose lower coefficients are the
  /// base-q digits of idx (coefficient of t^0 least significant).
  static Poly monic_from_index(const Field& f, int deg, std::uint64_t idx);

  const Field& field() const { return *f_; }
  const Field* field_ptr() const { return f_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  Elem coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(i)] : 0; }
  Elem lead() const { return c_.empty() ? 0 : c_.back(); }
  const std::vector<Elem>& coeffs() const { return c_; }

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Poly& b) { return a *= b; }
  friend Poly operator/(const Poly& a, const Poly& b);
  friend Poly operator%(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  Poly scale(Elem c) const;
  /// Multiply by t^k, k >= 0.
  Poly shift(int k) const;
  /// Drop all terms of degree >= k.
  Poly truncate(int k) const;
  Poly monic() const;
  Poly derivative() const;
  Elem eval(Elem x) const;
  /// Coefficients reversed with respect to degree n >= degree(): t^n p(1/t).
  Poly reversed(int n) const;
  /// Apply a field map (e.g. an embedding or Frobenius) to every coefficient.
  template <class Fn>
  Poly map(const Field& target, Fn&& fn) const {
    std::vector<Elem> c(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) c[i] = fn(c_[i]);
    return Poly(target, std::move(c));
  }

  static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);

  /// e.g. "t^2+t+1"; coefficients in extension fields print as digit lists.
  std::string str(const std::string& var = "t") const;

 private:
  void trim();
  void check(const Poly& o) const;

  const Field* f_ = nullptr;
  std::vector<Elem> c_;
};

/// Monic gcd (zero if both are zero).
Poly gcd(const Poly& a, const Poly& b);
/// a^{-1} mod m; throws std::domain_error when gcd(a, m) != 1.
Poly inverse_mod(const Poly& a, const Poly& m);
Poly pow_mod(const Poly& a, std::uint64_t k, const Poly& m);
Poly power(const Poly& a, int k);
bool is_irreducible(const Poly& f);
/// All monic irreducibles of exactly this degree, in monic_from_index order.
const std::vector<Poly>& monic_irreducibles(const Field& f, int degree);
/// Factorization of a nonzero polynomial into monic irreducibles with
/// multiplicities (the leading coefficient is dropped), by trial division.
std::vector<std::pair<Poly, int>> factor(const Poly& a);
bool is_squarefree(const Poly& a);
/// Multiplicity of the irreducible pi in a (a != 0).
int valuation(const Poly& a, const Poly& pi);

/// Reduced fraction num/den over a finite field with den monic.
class RationalFn {
 public:
  RationalFn() = default;
  explicit RationalFn(const Field& f) : num_(f), den_(Poly::constant(f, 1)) {}
  RationalFn(const Poly& num);  // NOLINT(google-explicit-constructor)
  RationalFn(const Poly& num, const Poly& den);
  static RationalFn constant(const Field& f, Elem c) { return RationalFn(Poly::constant(f, c)); }

  const Field& field() const { return num_.field(); }
  const Field* field_ptr() const { return num_.field_ptr(); }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }
  bool is_constant() const { return den_.degree() == 0 && num_.degree() <= 0; }

  RationalFn operator-() const;
  RationalFn& operator+=(const RationalFn& o);
  RationalFn& operator-=(const RationalFn& o);
  RationalFn& operator*=(const RationalFn& o);
  RationalFn& operator/=(const RationalFn& o);
  friend RationalFn operator+(RationalFn a, const RationalFn& b) { return a += b; }
  friend RationalFn operator-(RationalFn a, const RationalFn& b) { return a -= b; }
  friend RationalFn operator*(RationalFn a, const RationalFn& b) { return a *= b; }
  friend RationalFn operator/(RationalFn a, const RationalFn& b) { return a /= b; }
  friend bool operator==(const RationalFn& a, const RationalFn& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  RationalFn inverse() const;

  /// Order of vanishing at the finite place pi (monic irreducible).
  int valuation(const Poly& pi) const;
  /// Order of vanishing at infinity: deg den - deg num.
  int valuation_infinity() const;

  template <class Fn>
  RationalFn map(const Field& target, Fn&& fn) const {
    return RationalFn(num_.map(target, fn), den_.map(target, fn));
  }

  std::string str(const std::string& var = "t") const;

 private:
  void reduce();

  Poly num_;
  Poly den_;
};

}  // namespace fqm
