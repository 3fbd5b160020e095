#include "fqm/field.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace fqm {

namespace {

constexpr std::uint64_t kMaxFieldSize = 1u << 20;
constexpr std::uint32_t kAddTableMax = 1024;

using IntPoly = std::vector<int>;

void trim(IntPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

IntPoly poly_mulmod(const IntPoly& a, const IntPoly& b, const IntPoly& m, int p) {
  if (a.empty() || b.empty()) return {};
  IntPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  // m is monic of degree deg.
  std::size_t deg = m.size() - 1;
  for (std::size_t k = r.size(); k-- > deg;) {
    int c = r[k];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= deg; ++j) r[k - deg + j] = ((r[k - deg + j] - c * m[j]) % p + p) % p;
  }
  trim(r);
  return r;
}

int inv_mod(int a, int p) {
  int r = 1;
  for (int e = p - 2; e > 0; --e) r = r * a % p;
  return r;
}

IntPoly poly_gcd(IntPoly a, IntPoly b, int p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    int lead_inv = inv_mod(b.back(), p);
    while (a.size() >= b.size()) {
      int c = a.back() * lead_inv % p;
      std::size_t shift = a.size() - b.size();
      for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] = ((a[shift + j] - c * b[j]) % p + p) % p;
      trim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return a;
}

// Irreducible iff gcd(x^{p^k} - x, f) = 1 for k = 1..deg/2.
bool irreducible(const IntPoly& f, int p) {
  std::size_t deg = f.size() - 1;
  if (deg == 1) return true;
  IntPoly x{0, 1};
  IntPoly pw = x;
  for (std::size_t k = 1; k <= deg / 2; ++k) {
    // pw <- pw^p mod f
    IntPoly acc{1};
    for (int i = 0; i < p; ++i) acc = poly_mulmod(acc, pw, f, p);
    pw = acc;
    IntPoly diff = pw;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = ((diff[1] - 1) % p + p) % p;
    trim(diff);
    if (diff.empty()) return false;
    IntPoly g = poly_gcd(f, diff, p);
    if (g.size() > 1) return false;
  }
  return true;
}

std::vector<long> prime_factors(long n) {
  std::vector<long> out;
  for (long d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Field::Field(int p, int e) : p_(p), e_(e) {
  if (!is_prime(p)) throw std::invalid_argument("make_field: p = " + std::to_string(p) + " is not prime");
  if (e < 1) throw std::invalid_argument("make_field: degree must be >= 1");
  std::uint64_t n = 1;
  for (int i = 0; i < e; ++i) {
    n *= static_cast<std::uint64_t>(p);
    if (n > kMaxFieldSize) throw std::invalid_argument("make_field: field larger than 2^20 elements");
  }
  size_ = static_cast<std::uint32_t>(n);

  // Least monic irreducible of degree e in the order sum_{i<e} c_i p^i.
  bool found = false;
  for (std::uint32_t idx = 0; idx < size_ && !found; ++idx) {
    IntPoly f(static_cast<std::size_t>(e) + 1, 0);
    std::uint32_t v = idx;
    for (int i = 0; i < e; ++i) {
      f[static_cast<std::size_t>(i)] = static_cast<int>(v % static_cast<std::uint32_t>(p));
      v /= static_cast<std::uint32_t>(p);
    }
    f[static_cast<std::size_t>(e)] = 1;
    if (e > 1 && f[0] == 0) continue;
    if (irreducible(f, p)) {
      modulus_ = f;
      found = true;
    }
  }
  if (!found) throw std::logic_error("make_field: no irreducible modulus found");

  if (p_ != 2) {
    neg_.resize(size_);
    for (Elem a = 0; a < size_; ++a) {
      auto c = coeffs(a);
      for (auto& x : c) x = (p_ - x) % p_;
      neg_[a] = from_coeffs(c);
    }
    if (size_ <= kAddTableMax) {
      add_table_.resize(static_cast<std::size_t>(size_) * size_);
      for (Elem a = 0; a < size_; ++a)
        for (Elem b = 0; b < size_; ++b) add_table_[static_cast<std::size_t>(a) * size_ + b] = add_slow(a, b);
    }
  }

  // Primitive element: least index whose order is size-1.
  std::uint32_t group = size_ - 1;
  auto factors = prime_factors(group);
  auto slow_pow = [&](Elem a, std::uint64_t k) {
    Elem r = 1;
    while (k > 0) {
      if (k & 1) r = mul_slow(r, a);
      a = mul_slow(a, a);
      k >>= 1;
    }
    return r;
  };
  Elem g = 1;
  if (size_ > 2) {
    for (g = 2; g < size_; ++g) {
      bool primitive = true;
      for (long r : factors) {
        if (slow_pow(g, group / static_cast<std::uint64_t>(r)) == 1) {
          primitive = false;
          break;
        }
      }
      if (primitive) break;
    }
  }
  exp_.resize(group);
  log_.assign(size_, 0);
  Elem cur = 1;
  for (std::uint32_t i = 0; i < group; ++i) {
    exp_[i] = cur;
    log_[cur] = i;
    cur = mul_slow(cur, g);
  }

  trace_.resize(size_);
  for (Elem a = 0; a < size_; ++a) {
    Elem s = 0, x = a;
    for (int i = 0; i < e_; ++i) {
      s = add(s, x);
      x = pow(x, p_);
    }
    if (s >= static_cast<Elem>(p_)) throw std::logic_error("Field: trace left the prime field");
    trace_[a] = static_cast<std::uint8_t>(s);
  }
}

Elem Field::add_slow(Elem a, Elem b) const {
  Elem r = 0, place = 1;
  auto up = static_cast<Elem>(p_);
  for (int i = 0; i < e_; ++i) {
    r += ((a % up + b % up) % up) * place;
    a /= up;
    b /= up;
    place *= up;
  }
  return r;
}

Elem Field::mul_slow(Elem a, Elem b) const {
  IntPoly pa = coeffs(a), pb = coeffs(b);
  trim(pa);
  trim(pb);
  IntPoly r = poly_mulmod(pa, pb, modulus_, p_);
  r.resize(static_cast<std::size_t>(e_), 0);
  return from_coeffs(r);
}

Elem Field::inv(Elem a) const {
  if (a == 0) throw std::domain_error("Field: inverse of zero");
  std::uint32_t l = log_[a];
  return exp_[l == 0 ? 0 : size_ - 1 - l];
}

Elem Field::pow(Elem a, std::int64_t k) const {
  if (a == 0) {
    if (k < 0) throw std::domain_error("Field: negative power of zero");
    return k == 0 ? 1 : 0;
  }
  auto group = static_cast<std::int64_t>(size_ - 1);
  std::int64_t l = (static_cast<std::int64_t>(log_[a]) * (k % group)) % group;
  if (l < 0) l += group;
  return exp_[static_cast<std::size_t>(l)];
}

Elem Field::from_int(long v) const {
  long r = v % p_;
  return static_cast<Elem>(r < 0 ? r + p_ : r);
}

Elem Field::frobenius(Elem x, int k) const {
  if (x == 0) return 0;
  auto group = static_cast<std::uint64_t>(size_ - 1);
  std::uint64_t m = 1;
  for (int i = 0; i < k % e_; ++i) m = m * static_cast<std::uint64_t>(p_) % group;
  return exp_[static_cast<std::size_t>(log_[x] * m % group)];
}

std::uint32_t Field::order(Elem a) const {
  if (a == 0) throw std::domain_error("Field: order of zero");
  std::uint32_t group = size_ - 1, l = log_[a];
  std::uint32_t x = group, y = l;
  while (y != 0) {
    std::uint32_t r = x % y;
    x = y;
    y = r;
  }
  return group / x;
}

std::vector<int> Field::coeffs(Elem x) const {
  std::vector<int> c(static_cast<std::size_t>(e_));
  for (auto& v : c) {
    v = static_cast<int>(x % static_cast<Elem>(p_));
    x /= static_cast<Elem>(p_);
  }
  return c;
}

Elem Field::from_coeffs(std::span<const int> c) const {
  if (c.size() > static_cast<std::size_t>(e_)) throw std::invalid_argument("Field: too many coefficients");
  Elem r = 0;
  for (std::size_t i = c.size(); i-- > 0;) {
    int v = ((c[i] % p_) + p_) % p_;
    r = r * static_cast<Elem>(p_) + static_cast<Elem>(v);
  }
  return r;
}

std::string Field::str(Elem x) const {
  if (e_ == 1) return std::to_string(x);
  std::ostringstream os;
  os << '[';
  auto c = coeffs(x);
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << ']';
  return os.str();
}

const Field& make_field(int p, int e) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<Field>> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = registry[{p, e}];
  if (!slot) {
    try {
      slot = std::make_unique<Field>(p, e);
    } catch (...) {
      registry.erase({p, e});
      throw;
    }
  }
  return *slot;
}

Extension::Extension(const Field& base, const Field& top) : base_(&base), top_(&top) {
  if (base.p() != top.p() || top.degree() % base.degree() != 0)
    throw std::invalid_argument("Extension: base is not a subfield of top");
  degree_ = top.degree() / base.degree();
  // Root of base's modulus in top, least index.
  const auto& m = base.modulus();
  Elem root = 0;
  bool found = false;
  if (base.degree() == 1) {
    found = true;
  } else {
    for (Elem r = 0; r < top.size() && !found; ++r) {
      Elem v = 0;
      for (std::size_t i = m.size(); i-- > 0;) v = top.add(top.mul(v, r), static_cast<Elem>(m[i]));
      if (v == 0) {
        root = r;
        found = true;
      }
    }
  }
  if (!found) throw std::logic_error("Extension: no embedding found");
  up_.resize(base.size());
  down_.assign(top.size(), kNone);
  for (Elem a = 0; a < base.size(); ++a) {
    Elem v;
    if (base.degree() == 1) {
      v = a;
    } else {
      auto c = base.coeffs(a);
      v = 0;
      for (std::size_t i = c.size(); i-- > 0;) v = top.add(top.mul(v, root), static_cast<Elem>(c[i]));
    }
    up_[a] = v;
    down_[v] = a;
  }
}

Elem Extension::restrict(Elem x) const {
  Elem r = down_[x];
  if (r == kNone) throw std::domain_error("Extension: element not in the base field");
  return r;
}

Elem Extension::frob_q(Elem x, int k) const { return top_->frobenius(x, k * base_->degree()); }

Elem Extension::trace(Elem x) const {
  Elem s = 0;
  for (int i = 0; i < degree_; ++i) s = top_->add(s, frob_q(x, i));
  return restrict(s);
}

Elem Extension::norm(Elem x) const {
  Elem s = 1;
  for (int i = 0; i < degree_; ++i) s = top_->mul(s, frob_q(x, i));
  return restrict(s);
}

const Extension& extension(const Field& base, int d) {
  static std::mutex mu;
  static std::map<std::pair<const Field*, int>, std::unique_ptr<Extension>> registry;
  const Field& top = make_field(base.p(), base.degree() * d);
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = registry[{&base, d}];
  if (!slot) slot = std::make_unique<Extension>(base, top);
  return *slot;
}

Elem trace(const Field& f, Elem x, int d) {
  if (d < 1 || f.degree() % d != 0) throw std::invalid_argument("trace: d does not divide the field degree");
  const Field& sub = make_field(f.p(), d);
  const Extension& ext = extension(sub, f.degree() / d);
  if (&ext.top() != &f) throw std::invalid_argument("trace: field was not created by make_field");
  return ext.trace(x);
}

}  // namespace fqm
