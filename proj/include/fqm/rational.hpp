#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>

namespace fqm {

/// Exact rational number with 64-bit numerator and denominator.
///
/// Intermediate products are formed in 128 bits and reduced; a result that
/// does not fit in 64 bits throws std::overflow_error instead of wrapping.
/// The denominator is always positive and gcd(num, den) == 1.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const Rational& a, const Rational& b);

  /// b^e for integer e (negative allowed when b != 0).
  static Rational power(std::int64_t b, int e);

  /// n/d from 128-bit parts; throws std::overflow_error if the reduced
  /// fraction does not fit in 64 bits.
  static Rational from_wide(__int128 n, __int128 d);

  /// "n" or "n/d".
  std::string str() const;
  static Rational parse(const std::string& s);

 private:

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace fqm

template <>
struct std::hash<fqm::Rational> {
  std::size_t operator()(const fqm::Rational& r) const noexcept {
    return std::hash<std::int64_t>{}(r.num()) * 1000003u ^ std::hash<std::int64_t>{}(r.den());
  }
};
