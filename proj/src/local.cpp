#include "fqm/local.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <tuple>
#include <stdexcept>

namespace fqm {

namespace {

constexpr std::uint64_t kMaxTable = 1ull << 24;
constexpr std::uint64_t kMaxPairingTable = 1ull << 24;

// H[j1][j2] = [t^{d-1}] (t^{j1 + j2} mod pi): the F_q-bilinear form
// (c, c') -> Tr res(c c' / pi) on digit polynomials.
std::vector<Elem> hankel(const Poly& pi) {
  const Field& f = pi.field();
  int d = pi.degree();
  std::vector<Elem> h(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) h[static_cast<std::size_t>(a * d + b)] = (Poly::monomial(f, 1, a + b) % pi).coeff(d - 1);
  return h;
}

// Elementwise bilinear form on digits at the place: B(c, c').
Elem digit_form(const PlaceData& pd, const std::vector<Elem>& h, const Elem* c, const Elem* c2) {
  const Field& f = pd.place.field();
  if (pd.place.is_infinity()) return f.neg(f.mul(c[0], c2[0]));
  int d = pd.degree();
  Elem s = 0;
  for (int a = 0; a < d; ++a) {
    if (c[a] == 0) continue;
    for (int b = 0; b < d; ++b) {
      if (c2[b] == 0) continue;
      s = f.add(s, f.mul(f.mul(c[a], c2[b]), h[static_cast<std::size_t>(a * d + b)]));
    }
  }
  return s;
}

void check_nu(const PlaceData& pd) {
  if (pd.nu % 2 != 0) throw std::invalid_argument("fourier: odd nu at place " + pd.place.str());
}

Poly taylor_shift(const Poly& p, Elem alpha) {
  const Field& f = p.field();
  Poly r(f);
  Poly lin(f, {alpha, 1});
  for (int i = p.degree(); i >= 0; --i) r = r * lin + Poly::constant(f, p.coeff(i));
  return r;
}

__int128 lcm128(__int128 a, __int128 b) {
  __int128 x = a, y = b;
  while (y != 0) {
    __int128 r = x % y;
    x = y;
    y = r;
  }
  __int128 l = a / x * b;
  if (l > static_cast<__int128>(INT64_MAX)) throw std::overflow_error("fourier: common denominator overflow");
  return l;
}

// Integer numerators of a CycScalar over a common denominator.
struct IntValue {
  std::vector<std::int64_t> c;
};

}  // namespace

Place Place::finite(const Poly& pi) {
  if (!pi.is_monic() || !is_irreducible(pi)) throw std::invalid_argument("Place: " + pi.str() + " is not monic irreducible");
  Place p;
  p.f_ = pi.field_ptr();
  p.pi_ = pi;
  return p;
}

Place Place::infinity(const Field& f) {
  Place p;
  p.f_ = &f;
  p.inf_ = true;
  return p;
}

std::string Place::str() const { return inf_ ? "inf" : pi_.str(); }

bool operator<(const Place& a, const Place& b) {
  if (a.inf_ != b.inf_) return a.inf_;
  if (a.inf_) return false;
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.degree() - 1; i >= 0; --i)
    if (a.pi_.coeff(i) != b.pi_.coeff(i)) return a.pi_.coeff(i) < b.pi_.coeff(i);
  return false;
}

Poly JetVector::digit(int a, int i) const {
  int d = place.degree(), L = window.length();
  if (i < -window.N || i >= window.M) throw std::out_of_range("JetVector: digit outside window");
  std::size_t off = static_cast<std::size_t>((a * L + i + window.N) * d);
  return Poly(place.place.field(), std::vector<Elem>(coords.begin() + static_cast<std::ptrdiff_t>(off),
                                                     coords.begin() + static_cast<std::ptrdiff_t>(off) + d));
}

JetVector JetVector::operator-() const {
  JetVector r = *this;
  const Field& f = place.place.field();
  for (auto& c : r.coords) c = f.neg(c);
  return r;
}

JetVector operator+(const JetVector& x, const JetVector& y) {
  if (!(x.place == y.place) || !(x.window == y.window) || x.arity != y.arity)
    throw std::invalid_argument("JetVector: shape mismatch");
  JetVector r = x;
  const Field& f = x.place.place.field();
  for (std::size_t k = 0; k < r.coords.size(); ++k) r.coords[k] = f.add(r.coords[k], y.coords[k]);
  return r;
}

JetVector alpha_encode(const PlaceData& place, Window w, int arity, const std::vector<Elem>& coeffs) {
  std::size_t n = static_cast<std::size_t>(arity * place.degree() * w.length());
  if (coeffs.size() != n) throw std::invalid_argument("alpha_encode: expected " + std::to_string(n) + " coefficients");
  for (Elem c : coeffs)
    if (c >= place.place.field().size()) throw std::invalid_argument("alpha_encode: coefficient outside F_q");
  return JetVector{place, w, arity, coeffs};
}

std::vector<Elem> alpha_decode(const JetVector& x) { return x.coords; }

RationalFn jet_to_rational(const JetVector& x) {
  if (x.arity != 1) throw std::invalid_argument("jet_to_rational: arity must be 1");
  const Field& f = x.place.place.field();
  const Window& w = x.window;
  if (x.place.place.is_infinity()) {
    // sum_i c_i t^{-i} = (sum_i c_i t^{K-i}) / t^K
    int K = std::max(w.M - 1, 0);
    Poly num(f);
    for (int i = -w.N; i < w.M; ++i) num += Poly::monomial(f, x.digit(0, i).coeff(0), K - i);
    return RationalFn(num, Poly::monomial(f, 1, K));
  }
  const Poly& pi = x.place.place.poly();
  Poly num(f), pw = Poly::constant(f, 1);
  for (int i = -w.N; i < w.M; ++i) {
    num += x.digit(0, i) * pw;
    pw *= pi;
  }
  return RationalFn(num, power(pi, w.N));
}

Residue residue(const RationalFn& f, const PlaceData& place) {
  const Field& F = f.field();
  Residue out;
  if (f.is_zero()) {
    out.field = place.place.is_infinity() ? &F : &extension(F, place.degree()).top();
    return out;
  }
  if (place.place.is_infinity()) {
    RationalFn g = f;
    int k = place.nu - 2;
    if (k >= 0) {
      g *= RationalFn(Poly::monomial(F, 1, k));
    } else {
      g /= RationalFn(Poly::monomial(F, 1, -k));
    }
    Poly r = g.num() % g.den();
    Elem a = r.degree() == g.den().degree() - 1 ? r.lead() : 0;
    out.field = &F;
    out.value = F.neg(a);
    out.trace = out.value;
    return out;
  }
  const Poly& pi = place.place.poly();
  RationalFn g = f;
  if (place.nu >= 0) {
    g /= RationalFn(power(pi, place.nu));
  } else {
    g *= RationalFn(power(pi, -place.nu));
  }
  const Extension& ext = extension(F, place.degree());
  const Field& top = ext.top();
  auto lift = [&](Elem c) { return ext.embed(c); };
  Poly pit = pi.map(top, lift);
  Elem alpha = 0;
  for (Elem r = 0; r < top.size(); ++r) {
    if (pit.eval(r) == 0) {
      alpha = r;
      break;
    }
  }
  Poly num = taylor_shift(g.num().map(top, lift), alpha);
  Poly den = taylor_shift(g.den().map(top, lift), alpha);
  int k = 0;
  while (den.coeff(k) == 0) ++k;
  out.field = &top;
  if (k > 0) {
    std::vector<Elem> dc(den.coeffs().begin() + k, den.coeffs().end());
    Poly dprime(top, dc);
    // coefficient of s^{k-1} in num / dprime
    std::vector<Elem> inv(static_cast<std::size_t>(k), 0);
    Elem d0 = top.inv(dprime.coeff(0));
    inv[0] = d0;
    for (int n = 1; n < k; ++n) {
      Elem s = 0;
      for (int j = 1; j <= n; ++j) s = top.add(s, top.mul(dprime.coeff(j), inv[static_cast<std::size_t>(n - j)]));
      inv[static_cast<std::size_t>(n)] = top.neg(top.mul(s, d0));
    }
    Elem v = 0;
    for (int j = 0; j < k; ++j) v = top.add(v, top.mul(num.coeff(j), inv[static_cast<std::size_t>(k - 1 - j)]));
    out.value = v;
  }
  out.trace = ext.trace(out.value);
  return out;
}

Elem residue_trace(const JetVector& x) {
  if (x.arity != 1) throw std::invalid_argument("residue_trace: arity must be 1");
  int i = x.place.nu - 1;
  if (i >= x.window.M) throw std::domain_error("residue: insufficient jet depth");
  if (i < -x.window.N) return 0;
  const Field& f = x.place.place.field();
  Poly c = x.digit(0, i);
  if (x.place.place.is_infinity()) return f.neg(c.coeff(0));
  return c.coeff(x.place.degree() - 1);
}

Elem pairing(const JetVector& x, const JetVector& y) {
  if (x.arity != 1 || y.arity != 1 || !(x.place == y.place)) throw std::invalid_argument("pairing: shape mismatch");
  const PlaceData& pd = x.place;
  int nu = pd.nu;
  if (x.window.M < nu + y.window.N || y.window.M < nu + x.window.N)
    throw std::domain_error("pairing: windows do not determine r(xy)");
  const Field& f = pd.place.field();
  std::vector<Elem> h;
  if (!pd.place.is_infinity()) h = hankel(pd.place.poly());
  int d = pd.degree();
  Elem s = 0;
  for (int i2 = -y.window.N; i2 < y.window.M; ++i2) {
    int i = nu - 1 - i2;
    if (i < -x.window.N || i >= x.window.M) continue;
    const Elem* c = &x.coords[static_cast<std::size_t>((i + x.window.N) * d)];
    const Elem* c2 = &y.coords[static_cast<std::size_t>((i2 + y.window.N) * d)];
    s = f.add(s, digit_form(pd, h, c, c2));
  }
  return s;
}

JetLayout::JetLayout(const Field& f, const std::vector<PlaceWindow>& support, int arity) : f_(&f), arity_(arity) {
  if (arity < 1) throw std::invalid_argument("JetLayout: arity must be >= 1");
  for (std::size_t u = 0; u < support.size(); ++u) {
    const auto& pw = support[u];
    if (&pw.place.place.field() != &f) throw std::invalid_argument("JetLayout: place over a different field");
    if (pw.window.N < 0 || pw.window.M < 0) throw std::invalid_argument("JetLayout: negative window depth");
    for (int a = 0; a < arity; ++a) {
      Block b;
      b.place_index = static_cast<int>(u);
      b.coordinate = a;
      b.d = pw.place.degree();
      b.window = pw.window;
      b.dims = b.d * pw.window.length();
      b.offset = dims_;
      dims_ += b.dims;
      blocks_.push_back(b);
    }
  }
  pow_.assign(static_cast<std::size_t>(dims_) + 1, 1);
  for (int k = 1; k <= dims_; ++k) {
    pow_[static_cast<std::size_t>(k)] = pow_[static_cast<std::size_t>(k - 1)] * f.size();
    if (pow_[static_cast<std::size_t>(k)] > kMaxTable) throw std::length_error("JetLayout: table larger than 2^24 entries");
  }
  size_ = pow_.back();
}

std::uint64_t JetLayout::stride(const Block& b) const {
  return pow_[static_cast<std::size_t>(dims_ - b.offset - b.dims)];
}

std::uint64_t JetLayout::block_size(const Block& b) const { return pow_[static_cast<std::size_t>(b.dims)]; }

std::vector<Elem> JetLayout::decode(std::uint64_t idx) const {
  std::vector<Elem> c(static_cast<std::size_t>(dims_));
  for (int k = dims_ - 1; k >= 0; --k) {
    c[static_cast<std::size_t>(k)] = static_cast<Elem>(idx % f_->size());
    idx /= f_->size();
  }
  return c;
}

std::uint64_t JetLayout::encode(const std::vector<Elem>& coords) const {
  std::uint64_t idx = 0;
  for (Elem c : coords) idx = idx * f_->size() + c;
  return idx;
}

std::uint64_t local_jet_index(const JetVector& x) {
  std::uint64_t idx = 0;
  for (Elem c : x.coords) idx = idx * x.place.place.field().size() + c;
  return idx;
}

JetVector local_jet_from_index(const PlaceData& place, Window w, std::uint64_t idx) {
  const Field& f = place.place.field();
  std::vector<Elem> c(static_cast<std::size_t>(place.degree() * w.length()));
  for (std::size_t k = c.size(); k-- > 0;) {
    c[k] = static_cast<Elem>(idx % f.size());
    idx /= f.size();
  }
  return JetVector{place, w, 1, c};
}

std::vector<std::int64_t> window_map(const JetLayout& source, const JetLayout& target) {
  const auto& sb = source.blocks();
  const auto& tb = target.blocks();
  if (sb.size() != tb.size()) throw std::invalid_argument("window_map: layouts differ");
  std::vector<std::int64_t> map(target.size());
  std::vector<Elem> src(static_cast<std::size_t>(source.dims()));
  for (std::uint64_t i = 0; i < target.size(); ++i) {
    auto tc = target.decode(i);
    bool inside = true;
    for (std::size_t b = 0; b < tb.size() && inside; ++b) {
      const Block& s = sb[b];
      const Block& t = tb[b];
      if (s.d != t.d || t.window.N < s.window.N || t.window.M < s.window.M)
        throw std::invalid_argument("window_map: target does not dominate source");
      for (int dig = -t.window.N; dig < t.window.M; ++dig) {
        for (int j = 0; j < t.d; ++j) {
          Elem c = tc[static_cast<std::size_t>(t.offset + (dig + t.window.N) * t.d + j)];
          if (dig < -s.window.N) {
            if (c != 0) inside = false;
          } else if (dig < s.window.M) {
            src[static_cast<std::size_t>(s.offset + (dig + s.window.N) * s.d + j)] = c;
          }
        }
      }
    }
    map[i] = inside ? static_cast<std::int64_t>(source.encode(src)) : -1;
  }
  return map;
}

TestFunction restrict_window(const TestFunction& phi, const std::vector<Window>& target) {
  std::vector<PlaceWindow> support = phi.support();
  if (target.size() != support.size()) throw std::invalid_argument("restrict_window: wrong number of windows");
  for (std::size_t u = 0; u < support.size(); ++u) support[u].window = target[u];
  TestFunction out(phi.field(), support, phi.arity());
  auto map = window_map(out.layout(), phi.layout());
  std::vector<bool> seen(out.size(), false);
  for (std::uint64_t i = 0; i < phi.size(); ++i) {
    if (map[i] < 0) {
      if (!phi[i].is_zero()) throw std::domain_error("restrict_window: function not supported in the smaller window");
      continue;
    }
    auto j = static_cast<std::uint64_t>(map[i]);
    if (!seen[j]) {
      out[j] = phi[i];
      seen[j] = true;
    } else if (!(out[j] == phi[i])) {
      throw std::domain_error("restrict_window: function not invariant at the smaller level");
    }
  }
  return out;
}

namespace {

int volume_exponent(const JetLayout& layout) {
  int e = 0;
  for (const auto& b : layout.blocks()) e += b.d * b.window.M;
  return e;
}

}  // namespace

CycScalar integrate(const TestFunction& phi) {
  CycScalar s = ValueTraits<CycScalar>::zero(phi.field());
  for (const auto& v : phi.table()) s += v;
  return s * Rational::power(static_cast<std::int64_t>(phi.field().size()), -volume_exponent(phi.layout()));
}

MotivicClass integrate(const SymbolicTestFunction& phi) {
  MotivicClass s(phi.field());
  for (const auto& v : phi.table()) s = class_add(s, v);
  return shift_L(s, -volume_exponent(phi.layout()));
}

TestFunction specialize(const SymbolicTestFunction& phi, int d) {
  TestFunction out(phi.field(), phi.support(), phi.arity());
  for (std::uint64_t i = 0; i < phi.size(); ++i) {
    CycScalar v = specialize(phi[i], d);
    out[i] = v.valid() ? v : ValueTraits<CycScalar>::zero(phi.field());
  }
  return out;
}

Window dual_window(const PlaceData& place, Window w) {
  check_nu(place);
  if (w.M < place.nu)
    throw std::domain_error("fourier: window M = " + std::to_string(w.M) + " below nu = " + std::to_string(place.nu) +
                            " at " + place.place.str() + "; refine first");
  return Window{w.M - place.nu, w.N + place.nu};
}

namespace {

std::vector<std::uint8_t> build_pairing_table(const PlaceData& place, Window w) {
  Window dw = dual_window(place, w);
  const Field& f = place.place.field();
  int d = place.degree();
  int D = d * w.length();
  std::uint64_t Q = 1;
  for (int k = 0; k < D; ++k) Q *= f.size();
  if (Q * Q > kMaxPairingTable) throw std::length_error("fourier: block too large for a pairing table");
  std::vector<Elem> h;
  if (!place.place.is_infinity()) h = hankel(place.place.poly());

  std::vector<std::uint8_t> table(Q * Q);
  std::vector<Elem> lambda(static_cast<std::size_t>(D));
  std::vector<Elem> unit(static_cast<std::size_t>(d));
  std::vector<Elem> s(Q);
  for (std::uint64_t x = 0; x < Q; ++x) {
    JetVector xj = local_jet_from_index(place, dw, x);
    // lambda_k(x): r(x * e_k) for the input basis vector e_k (digit i', coefficient j)
    for (int i2 = -w.N; i2 < w.M; ++i2) {
      int i = place.nu - 1 - i2;
      const Elem* c = &xj.coords[static_cast<std::size_t>((i + dw.N) * d)];
      for (int j = 0; j < d; ++j) {
        std::fill(unit.begin(), unit.end(), 0);
        unit[static_cast<std::size_t>(j)] = 1;
        lambda[static_cast<std::size_t>((i2 + w.N) * d + j)] = digit_form(place, h, c, unit.data());
      }
    }
    // s[y] = sum_k lambda_k y_k, peeling the most significant digit
    s[0] = 0;
    std::uint64_t block = 1;
    for (int k = D - 1; k >= 0; --k, block *= f.size()) {
      Elem l = lambda[static_cast<std::size_t>(k)];
      for (Elem c = 1; c < f.size(); ++c) {
        Elem lc = f.mul(l, c);
        for (std::uint64_t r = 0; r < block; ++r) s[c * block + r] = f.add(lc, s[r]);
      }
    }
    std::uint8_t* row = &table[x * Q];
    for (std::uint64_t y = 0; y < Q; ++y) row[y] = static_cast<std::uint8_t>(f.trace_to_prime(s[y]));
  }
  return table;
}

struct PairingKey {
  const Field* f;
  bool inf;
  std::vector<Elem> pi;
  int nu, N, M;
  bool operator<(const PairingKey& o) const {
    return std::tie(f, inf, pi, nu, N, M) < std::tie(o.f, o.inf, o.pi, o.nu, o.N, o.M);
  }
};

}  // namespace

std::shared_ptr<const std::vector<std::uint8_t>> cached_pairing_table(const PlaceData& place, Window w) {
  static std::mutex mu;
  static std::map<PairingKey, std::shared_ptr<const std::vector<std::uint8_t>>> cache;
  static std::size_t bytes = 0;
  PairingKey key{&place.place.field(), place.place.is_infinity(),
                 place.place.is_infinity() ? std::vector<Elem>{} : place.place.poly().coeffs(), place.nu, w.N, w.M};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto t = std::make_shared<const std::vector<std::uint8_t>>(build_pairing_table(place, w));
  if (bytes + t->size() > (1ull << 28)) {
    cache.clear();
    bytes = 0;
  }
  bytes += t->size();
  cache.emplace(std::move(key), t);
  return t;
}

std::vector<std::uint8_t> pairing_table(const PlaceData& place, Window w) { return *cached_pairing_table(place, w); }

std::vector<Elem> gram_matrix(const PlaceData& place, Window w) {
  Window dw = dual_window(place, w);
  int D = place.degree() * w.length();
  std::vector<Elem> B(static_cast<std::size_t>(D * D));
  JetVector x{place, dw, 1, std::vector<Elem>(static_cast<std::size_t>(D), 0)};
  JetVector y{place, w, 1, std::vector<Elem>(static_cast<std::size_t>(D), 0)};
  for (int k = 0; k < D; ++k) {
    x.coords[static_cast<std::size_t>(k)] = 1;
    for (int l = 0; l < D; ++l) {
      y.coords[static_cast<std::size_t>(l)] = 1;
      B[static_cast<std::size_t>(k * D + l)] = pairing(x, y);
      y.coords[static_cast<std::size_t>(l)] = 0;
    }
    x.coords[static_cast<std::size_t>(k)] = 0;
  }
  return B;
}

FourierPlan::FourierPlan(const Field& f, const std::vector<PlaceWindow>& support, int arity)
    : support_(support), in_(f, support, arity) {
  int e2 = 0;  // twice the exponent of q in the normalization
  for (const auto& pw : support) {
    dual_.push_back({pw.place, dual_window(pw.place, pw.window)});
    gram_.push_back(gram_matrix(pw.place, pw.window));
    e2 += arity * pw.place.degree() * (pw.place.nu - 2 * pw.window.M);
  }
  out_ = JetLayout(f, dual_, arity);
  norm_ = Rational::power(static_cast<std::int64_t>(f.size()), e2 / 2);
}

int FourierPlan::phase(std::uint64_t x, std::uint64_t y) const {
  if (tables_.empty())
    for (const auto& pw : support_) tables_.push_back(cached_pairing_table(pw.place, pw.window));
  int s = 0;
  for (const auto& b : in_.blocks()) {
    std::uint64_t Q = in_.block_size(b);
    std::uint64_t xl = out_.local_index(x, b), yl = in_.local_index(y, b);
    s += (*tables_[static_cast<std::size_t>(b.place_index)])[xl * Q + yl];
  }
  return s % in_.field().p();
}

namespace {

// Accumulates sum_y v_y zeta^{k_y} exactly with integer arithmetic over a
// common denominator.
class PhaseAccumulator {
 public:
  explicit PhaseAccumulator(int p) : p_(p), raw_(static_cast<std::size_t>(p), 0) {}
  void reset() { std::fill(raw_.begin(), raw_.end(), 0); }
  // v given as integer numerators n over the shared denominator.
  void add(const std::int64_t* n, std::size_t len, int k) {
    for (std::size_t j = 0; j < len; ++j) {
      if (n[j] == 0) continue;
      raw_[(j + static_cast<std::size_t>(k)) % static_cast<std::size_t>(p_)] += n[j];
    }
  }
  CycScalar value(__int128 den, const Rational& scale) const {
    std::vector<Rational> r(static_cast<std::size_t>(p_));
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = Rational::from_wide(raw_[j], den) * scale;
    return CycScalar::normalize(p_, r);
  }

 private:
  int p_;
  std::vector<__int128> raw_;
};

// Common denominator and integer numerators for a set of values.
__int128 common_denominator(const std::vector<const CycScalar*>& vals) {
  __int128 den = 1;
  for (const auto* v : vals)
    for (const auto& c : v->coeffs())
      if (!c.is_zero()) den = lcm128(den, c.den());
  return den;
}

std::vector<std::int64_t> numerators(const CycScalar& v, __int128 den) {
  std::vector<std::int64_t> n;
  for (const auto& c : v.coeffs()) {
    __int128 x = static_cast<__int128>(c.num()) * (den / c.den());
    if (x > INT64_MAX || x < INT64_MIN) throw std::overflow_error("fourier: numerator overflow");
    n.push_back(static_cast<std::int64_t>(x));
  }
  return n;
}

// Separable transform of one block: with r(xy) = sum_kl x_k B_kl y_l, a
// one-digit DFT per coordinate of y followed by the substitution z = B^T x.
class GramDft {
 public:
  GramDft(const Field& f, const std::vector<Elem>& B, int D, Rational scale)
      : p_(static_cast<std::size_t>(f.p())), q_(f.size()), scale_(scale) {
    Q_ = 1;
    for (int k = 0; k < D; ++k) Q_ *= q_;
    trmul_.resize(q_ * q_);
    for (Elem z = 0; z < q_; ++z)
      for (Elem c = 0; c < q_; ++c) trmul_[z * q_ + c] = static_cast<std::uint8_t>(f.trace_to_prime(f.mul(z, c)));
    zidx_.resize(Q_);
    std::vector<Elem> x(static_cast<std::size_t>(D));
    for (std::uint64_t xi = 0; xi < Q_; ++xi) {
      std::uint64_t v = xi;
      for (int k = D - 1; k >= 0; --k, v /= q_) x[static_cast<std::size_t>(k)] = static_cast<Elem>(v % q_);
      std::uint64_t zi = 0;
      for (int l = 0; l < D; ++l) {
        Elem s = 0;
        for (int k = 0; k < D; ++k)
          if (x[static_cast<std::size_t>(k)] != 0)
            s = f.add(s, f.mul(x[static_cast<std::size_t>(k)], B[static_cast<std::size_t>(k * D + l)]));
        zi = zi * q_ + s;
      }
      zidx_[xi] = zi;
    }
    W_.resize(Q_ * p_);
    tmp_.resize(q_ * p_);
    r_.resize(p_);
  }

  std::uint64_t size() const { return Q_; }

  // Reads in[base + y * I] and writes out[base + x * I] for y, x < Q.
  void run(const std::vector<CycScalar>& in, std::vector<CycScalar>& out, std::uint64_t base, std::uint64_t I) {
    vals_.clear();
    nz_.clear();
    for (std::uint64_t y = 0; y < Q_; ++y) {
      const CycScalar& v = in[base + y * I];
      if (v.is_zero()) continue;
      vals_.push_back(&v);
      nz_.push_back(y);
    }
    if (nz_.empty()) return;
    __int128 den = common_denominator(vals_);
    std::fill(W_.begin(), W_.end(), 0);
    for (std::size_t k = 0; k < nz_.size(); ++k) {
      auto n = numerators(*vals_[k], den);
      for (std::size_t j = 0; j < n.size(); ++j) W_[nz_[k] * p_ + j] = n[j];
    }
    for (std::uint64_t st = 1; st < Q_; st *= q_) {
      for (std::uint64_t g0 = 0; g0 < Q_; ++g0) {
        if (g0 / st % q_ != 0) continue;
        std::fill(tmp_.begin(), tmp_.end(), 0);
        for (std::uint64_t c = 0; c < q_; ++c) {
          const __int128* src = &W_[(g0 + c * st) * p_];
          bool any = false;
          for (std::size_t j = 0; j < p_; ++j) any |= src[j] != 0;
          if (!any) continue;
          for (std::uint64_t z = 0; z < q_; ++z) {
            std::size_t k = trmul_[z * q_ + c];
            __int128* dst = &tmp_[z * p_];
            for (std::size_t j = 0; j < p_; ++j) dst[(j + k) % p_] += src[j];
          }
        }
        for (std::uint64_t z = 0; z < q_; ++z)
          for (std::size_t j = 0; j < p_; ++j) W_[(g0 + z * st) * p_ + j] = tmp_[z * p_ + j];
      }
    }
    for (std::uint64_t x = 0; x < Q_; ++x) {
      const __int128* w = &W_[zidx_[x] * p_];
      for (std::size_t j = 0; j < p_; ++j) r_[j] = Rational::from_wide(w[j], den) * scale_;
      out[base + x * I] = CycScalar::normalize(static_cast<int>(p_), r_);
    }
  }

 private:
  std::size_t p_;
  std::uint64_t q_;
  std::uint64_t Q_;
  Rational scale_;
  std::vector<std::uint8_t> trmul_;
  std::vector<std::uint64_t> zidx_;
  std::vector<__int128> W_, tmp_;
  std::vector<Rational> r_;
  std::vector<const CycScalar*> vals_;
  std::vector<std::uint64_t> nz_;
};

}  // namespace

TestFunction FourierPlan::apply(const TestFunction& phi) const {
  if (phi.layout().size() != in_.size() || phi.support().size() != support_.size())
    throw std::invalid_argument("fourier: function does not match the plan");
  const Field& f = in_.field();
  const std::uint64_t q = f.size();
  TestFunction cur = phi;
  // Transform one block at a time; block sizes are preserved, so the index
  // structure is shared and only the window labels change.
  for (const auto& b : in_.blocks()) {
    std::uint64_t Q = in_.block_size(b), I = in_.stride(b), O = in_.size() / (Q * I);
    const PlaceWindow& pw = support_[static_cast<std::size_t>(b.place_index)];
    int e2 = b.d * (pw.place.nu - 2 * pw.window.M);
    GramDft dft(f, gram_[static_cast<std::size_t>(b.place_index)], b.dims,
                Rational::power(static_cast<std::int64_t>(q), e2 / 2));
    std::vector<CycScalar> next(cur.size(), ValueTraits<CycScalar>::zero(f));
    for (std::uint64_t o = 0; o < O; ++o)
      for (std::uint64_t in = 0; in < I; ++in) dft.run(cur.table(), next, o * Q * I + in, I);
    cur.table() = std::move(next);
  }
  return TestFunction(f, dual_, in_.arity(), std::move(cur.table()));
}

CycScalar FourierPlan::at(const TestFunction& phi, std::uint64_t x) const {
  const Field& f = in_.field();
  std::vector<const CycScalar*> vals;
  std::vector<std::uint64_t> nz;
  for (std::uint64_t y = 0; y < phi.size(); ++y) {
    if (phi[y].is_zero()) continue;
    vals.push_back(&phi[y]);
    nz.push_back(y);
  }
  if (nz.empty()) return ValueTraits<CycScalar>::zero(f);
  __int128 den = common_denominator(vals);
  PhaseAccumulator acc(f.p());
  for (std::size_t k = 0; k < nz.size(); ++k) {
    auto n = numerators(*vals[k], den);
    acc.add(n.data(), n.size(), phase(x, nz[k]));
  }
  return acc.value(den, norm_);
}

TestFunction fourier_multi(const TestFunction& phi) {
  return FourierPlan(phi.field(), phi.support(), phi.arity()).apply(phi);
}

TestFunction fourier1(const TestFunction& phi) {
  if (phi.support().size() != 1 || phi.arity() != 1) throw std::invalid_argument("fourier1: expects one place and arity 1");
  return fourier_multi(phi);
}

CycScalar fourier_at(const TestFunction& phi, std::uint64_t x) {
  return FourierPlan(phi.field(), phi.support(), phi.arity()).at(phi, x);
}

TestFunction reflect(const TestFunction& phi) {
  TestFunction out(phi.field(), phi.support(), phi.arity());
  const Field& f = phi.field();
  for (std::uint64_t i = 0; i < phi.size(); ++i) {
    auto c = phi.layout().decode(i);
    for (auto& x : c) x = f.neg(x);
    out[phi.layout().encode(c)] = phi[i];
  }
  return out;
}

std::vector<CycScalar> gram_fourier(const Field& f, const std::vector<Elem>& B, int D,
                                    const std::vector<CycScalar>& in, const Rational& scale) {
  GramDft dft(f, B, D, scale);
  if (in.size() != dft.size()) throw std::invalid_argument("gram_fourier: table size is not q^D");
  std::vector<CycScalar> out(in.size(), CycScalar(f.p(), Rational(0)));
  dft.run(in, out, 0, 1);
  return out;
}

}  // namespace fqm
