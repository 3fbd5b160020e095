#include "fqm/poly.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace fqm {

Poly::Poly(const Field& f, std::vector<Elem> c) : f_(&f), c_(std::move(c)) { trim(); }

Poly Poly::constant(const Field& f, Elem c) { return Poly(f, {c}); }

Poly Poly::monomial(const Field& f, Elem c, int deg) {
  if (deg < 0) throw std::invalid_argument("Poly: negative degree");
  std::vector<Elem> v(static_cast<std::size_t>(deg) + 1, 0);
  v.back() = c;
  return Poly(f, std::move(v));
}

Poly Poly::monic_from_index(const Field& f, int deg, std::uint64_t idx) {
  std::vector<Elem> v(static_cast<std::size_t>(deg) + 1, 0);
  for (int i = 0; i < deg; ++i) {
    v[static_cast<std::size_t>(i)] = static_cast<Elem>(idx % f.size());
    idx /= f.size();
  }
  v.back() = 1;
  return Poly(f, std::move(v));
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

void Poly::check(const Poly& o) const {
  if (f_ != o.f_ && f_ != nullptr && o.f_ != nullptr) throw std::invalid_argument("Poly: field mismatch");
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& c : r.c_) c = f_->neg(c);
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  check(o);
  if (!f_) f_ = o.f_;
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = f_->add(c_[i], o.c_[i]);
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) { return *this += -o; }

Poly& Poly::operator*=(const Poly& o) {
  check(o);
  if (c_.empty() || o.c_.empty()) {
    c_.clear();
    if (!f_) f_ = o.f_;
    return *this;
  }
  std::vector<Elem> r(c_.size() + o.c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] = f_->add(r[i + j], f_->mul(c_[i], o.c_[j]));
  }
  c_ = std::move(r);
  trim();
  return *this;
}

void Poly::divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
  a.check(b);
  if (b.is_zero()) throw std::domain_error("Poly: division by zero");
  const Field& f = *b.f_;
  r = a;
  r.f_ = &f;
  q = Poly(f);
  if (a.degree() < b.degree()) return;
  q.c_.assign(static_cast<std::size_t>(a.degree() - b.degree()) + 1, 0);
  Elem inv_lead = f.inv(b.lead());
  std::size_t bs = b.c_.size();
  for (std::size_t k = r.c_.size(); k-- >= bs;) {
    Elem c = f.mul(r.c_[k], inv_lead);
    if (c == 0) continue;
    std::size_t shift = k - (bs - 1);
    q.c_[shift] = c;
    for (std::size_t j = 0; j < bs; ++j) r.c_[shift + j] = f.sub(r.c_[shift + j], f.mul(c, b.c_[j]));
  }
  r.trim();
  q.trim();
}

Poly operator/(const Poly& a, const Poly& b) {
  Poly q, r;
  Poly::divmod(a, b, q, r);
  return q;
}

Poly operator%(const Poly& a, const Poly& b) {
  Poly q, r;
  Poly::divmod(a, b, q, r);
  return r;
}

Poly Poly::scale(Elem c) const {
  Poly r = *this;
  for (auto& x : r.c_) x = f_->mul(x, c);
  r.trim();
  return r;
}

Poly Poly::shift(int k) const {
  if (k < 0) throw std::invalid_argument("Poly: negative shift");
  if (is_zero()) return *this;
  Poly r(*f_);
  r.c_.assign(static_cast<std::size_t>(k), 0);
  r.c_.insert(r.c_.end(), c_.begin(), c_.end());
  return r;
}

Poly Poly::truncate(int k) const {
  Poly r = *this;
  if (k < 0) k = 0;
  if (static_cast<int>(r.c_.size()) > k) r.c_.resize(static_cast<std::size_t>(k));
  r.trim();
  return r;
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scale(f_->inv(lead()));
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly(*f_);
  std::vector<Elem> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = f_->mul(c_[i], f_->from_int(static_cast<long>(i)));
  return Poly(*f_, std::move(d));
}

Elem Poly::eval(Elem x) const {
  Elem v = 0;
  for (std::size_t i = c_.size(); i-- > 0;) v = f_->add(f_->mul(v, x), c_[i]);
  return v;
}

Poly Poly::reversed(int n) const {
  if (n < degree()) throw std::invalid_argument("Poly: reversal degree too small");
  std::vector<Elem> r(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) r[static_cast<std::size_t>(n) - i] = c_[i];
  return Poly(*f_, std::move(r));
}

std::string Poly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i] == 0) continue;
    if (!first) os << '+';
    first = false;
    bool unit = c_[i] == 1;
    if (i == 0 || !unit) os << f_->str(c_[i]);
    if (i > 0) {
      if (!unit) os << '*';
      os << var;
      if (i > 1) os << '^' << i;
    }
  }
  return os.str();
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

Poly inverse_mod(const Poly& a, const Poly& m) {
  // Extended Euclid tracking only the coefficient of a.
  const Field& f = m.field();
  Poly r0 = m, r1 = a % m;
  Poly s0(f), s1 = Poly::constant(f, 1);
  while (!r1.is_zero()) {
    Poly q, r;
    Poly::divmod(r0, r1, q, r);
    Poly s = s0 - q * s1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (r0.degree() != 0) throw std::domain_error("inverse_mod: not invertible");
  return (s0.scale(f.inv(r0.lead()))) % m;
}

Poly pow_mod(const Poly& a, std::uint64_t k, const Poly& m) {
  Poly r = Poly::constant(m.field(), 1) % m;
  Poly b = a % m;
  while (k > 0) {
    if (k & 1) r = (r * b) % m;
    b = (b * b) % m;
    k >>= 1;
  }
  return r;
}

Poly power(const Poly& a, int k) {
  Poly r = Poly::constant(a.field(), 1);
  for (int i = 0; i < k; ++i) r *= a;
  return r;
}

bool is_irreducible(const Poly& f) {
  int n = f.degree();
  if (n < 1) return false;
  if (n == 1) return true;
  const Field& F = f.field();
  Poly x = Poly::x(F);
  Poly pw = x;
  for (int k = 1; k <= n / 2; ++k) {
    pw = pow_mod(pw, F.size(), f);
    Poly g = gcd(f, pw - x);
    if (g.degree() > 0) return false;
  }
  return true;
}

const std::vector<Poly>& monic_irreducibles(const Field& f, int degree) {
  static std::mutex mu;
  static std::map<std::pair<const Field*, int>, std::unique_ptr<std::vector<Poly>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{&f, degree}];
  if (!slot) {
    slot = std::make_unique<std::vector<Poly>>();
    std::uint64_t count = 1;
    for (int i = 0; i < degree; ++i) count *= f.size();
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Poly p = Poly::monic_from_index(f, degree, idx);
      if (is_irreducible(p)) slot->push_back(std::move(p));
    }
  }
  return *slot;
}

std::vector<std::pair<Poly, int>> factor(const Poly& a) {
  if (a.is_zero()) throw std::domain_error("factor: zero polynomial");
  std::vector<std::pair<Poly, int>> out;
  Poly rest = a.monic();
  for (int d = 1; 2 * d <= rest.degree(); ++d) {
    for (const auto& pi : monic_irreducibles(a.field(), d)) {
      int mult = 0;
      while (rest.degree() >= d) {
        Poly q, r;
        Poly::divmod(rest, pi, q, r);
        if (!r.is_zero()) break;
        rest = q;
        ++mult;
      }
      if (mult > 0) out.emplace_back(pi, mult);
      if (2 * d > rest.degree()) break;
    }
  }
  if (rest.degree() > 0) {
    bool merged = false;
    for (auto& [p, m] : out)
      if (p == rest) {
        ++m;
        merged = true;
      }
    if (!merged) out.emplace_back(rest, 1);
  }
  return out;
}

bool is_squarefree(const Poly& a) {
  for (const auto& [p, m] : factor(a))
    if (m > 1) return false;
  return true;
}

int valuation(const Poly& a, const Poly& pi) {
  if (a.is_zero()) throw std::domain_error("valuation: zero polynomial");
  int v = 0;
  Poly cur = a;
  while (true) {
    Poly q, r;
    Poly::divmod(cur, pi, q, r);
    if (!r.is_zero()) return v;
    cur = std::move(q);
    ++v;
  }
}

RationalFn::RationalFn(const Poly& num) : num_(num), den_(Poly::constant(num.field(), 1)) {}

RationalFn::RationalFn(const Poly& num, const Poly& den) : num_(num), den_(den) {
  if (den.is_zero()) throw std::domain_error("RationalFn: zero denominator");
  reduce();
}

void RationalFn::reduce() {
  const Field& f = den_.field();
  if (num_.is_zero()) {
    num_ = Poly(f);
    den_ = Poly::constant(f, 1);
    return;
  }
  Poly g = gcd(num_, den_);
  if (g.degree() > 0) {
    num_ = num_ / g;
    den_ = den_ / g;
  }
  Elem l = den_.lead();
  if (l != 1) {
    Elem li = f.inv(l);
    num_ = num_.scale(li);
    den_ = den_.scale(li);
  }
}

RationalFn RationalFn::operator-() const {
  RationalFn r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFn& RationalFn::operator+=(const RationalFn& o) {
  if (den_ == o.den_) {
    num_ += o.num_;
  } else {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
  }
  reduce();
  return *this;
}

RationalFn& RationalFn::operator-=(const RationalFn& o) { return *this += -o; }

RationalFn& RationalFn::operator*=(const RationalFn& o) {
  num_ *= o.num_;
  den_ *= o.den_;
  reduce();
  return *this;
}

RationalFn& RationalFn::operator/=(const RationalFn& o) { return *this *= o.inverse(); }

RationalFn RationalFn::inverse() const {
  if (is_zero()) throw std::domain_error("RationalFn: inverse of zero");
  return RationalFn(den_, num_);
}

int RationalFn::valuation(const Poly& pi) const {
  if (is_zero()) throw std::domain_error("RationalFn: valuation of zero");
  return fqm::valuation(num_, pi) - fqm::valuation(den_, pi);
}

int RationalFn::valuation_infinity() const {
  if (is_zero()) throw std::domain_error("RationalFn: valuation of zero");
  return den_.degree() - num_.degree();
}

std::string RationalFn::str(const std::string& var) const {
  if (den_.degree() == 0) return num_.str(var);
  return "(" + num_.str(var) + ")/(" + den_.str(var) + ")";
}

}  // namespace fqm
