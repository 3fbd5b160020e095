#include "fqm/cyc.hpp"

#include <sstream>
#include <stdexcept>

namespace fqm {

namespace {

std::size_t basis_size(int p) { return p == 2 ? 1u : static_cast<std::size_t>(p - 1); }

long mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

CycScalar::CycScalar(int p, const Rational& r) : p_(p), c_(basis_size(p)) {
  if (p < 2) throw std::invalid_argument("CycScalar: p must be prime");
  c_[0] = r;
}

CycScalar CycScalar::zeta_power(int p, long k) {
  CycScalar z(p, Rational(0));
  long e = mod(k, p);
  if (p == 2) {
    z.c_[0] = e == 0 ? Rational(1) : Rational(-1);
  } else if (e == p - 1) {
    for (auto& x : z.c_) x = Rational(-1);
  } else {
    z.c_[static_cast<std::size_t>(e)] = Rational(1);
  }
  return z;
}

CycScalar CycScalar::normalize(int p, std::span<const Rational> raw) {
  if (raw.size() > static_cast<std::size_t>(p)) throw std::invalid_argument("cyc_normalize: too many coefficients");
  CycScalar out(p, Rational(0));
  if (p == 2) {
    Rational v = raw.size() > 0 ? raw[0] : Rational(0);
    if (raw.size() > 1) v -= raw[1];
    out.c_[0] = v;
    return out;
  }
  Rational top = raw.size() == static_cast<std::size_t>(p) ? raw[static_cast<std::size_t>(p - 1)] : Rational(0);
  for (std::size_t i = 0; i < out.c_.size(); ++i) {
    Rational v = i < raw.size() ? raw[i] : Rational(0);
    out.c_[i] = v - top;
  }
  return out;
}

CycScalar CycScalar::from_counts(int p, std::span<const std::int64_t> counts) {
  CycScalar out(p, Rational(0));
  if (p == 2) {
    out.c_[0] = Rational(counts[0] - counts[1]);
    return out;
  }
  std::int64_t top = counts[static_cast<std::size_t>(p - 1)];
  for (std::size_t i = 0; i < out.c_.size(); ++i) out.c_[i] = Rational(counts[i] - top);
  return out;
}

bool CycScalar::is_zero() const {
  for (const auto& x : c_)
    if (!x.is_zero()) return false;
  return true;
}

bool CycScalar::is_rational() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (!c_[i].is_zero()) return false;
  return true;
}

Rational CycScalar::rational() const {
  if (!is_rational()) throw std::logic_error("CycScalar: value is not rational");
  return c_.empty() ? Rational(0) : c_[0];
}

void CycScalar::check_compatible(const CycScalar& o) const {
  if (p_ != o.p_) throw std::invalid_argument("CycScalar: mismatched cyclotomic fields");
}

CycScalar CycScalar::operator-() const {
  CycScalar r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

CycScalar& CycScalar::operator+=(const CycScalar& o) {
  if (!valid()) return *this = o;
  if (!o.valid()) return *this;
  check_compatible(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

CycScalar& CycScalar::operator-=(const CycScalar& o) { return *this += -o; }

CycScalar& CycScalar::operator*=(const Rational& r) {
  for (auto& x : c_) x *= r;
  return *this;
}

CycScalar& CycScalar::operator*=(const CycScalar& o) {
  check_compatible(o);
  if (p_ == 2) {
    c_[0] *= o.c_[0];
    return *this;
  }
  std::vector<Rational> raw(static_cast<std::size_t>(p_));
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) {
      if (o.c_[j].is_zero()) continue;
      raw[(i + j) % static_cast<std::size_t>(p_)] += c_[i] * o.c_[j];
    }
  }
  return *this = normalize(p_, raw);
}

CycScalar CycScalar::times_zeta(long k) const {
  long e = mod(k, p_);
  if (e == 0) return *this;
  if (p_ == 2) return -*this;
  std::vector<Rational> raw(static_cast<std::size_t>(p_));
  for (std::size_t i = 0; i < c_.size(); ++i)
    raw[(i + static_cast<std::size_t>(e)) % static_cast<std::size_t>(p_)] = c_[i];
  return normalize(p_, raw);
}

bool operator==(const CycScalar& a, const CycScalar& b) {
  if (a.p_ != b.p_) {
    // An invalid (default) value compares equal to zero.
    if (!a.valid()) return b.is_zero();
    if (!b.valid()) return a.is_zero();
    return false;
  }
  return a.c_ == b.c_;
}

std::string CycScalar::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    std::string coef = c_[i].str();
    if (!first && coef[0] != '-') os << '+';
    if (i == 0) {
      os << coef;
    } else {
      if (c_[i] == Rational(1)) {
      } else if (c_[i] == Rational(-1)) {
        os << '-';
      } else {
        os << coef << '*';
      }
      os << 'z';
      if (i > 1) os << '^' << i;
    }
    first = false;
  }
  if (first) os << '0';
  return os.str();
}

}  // namespace fqm
