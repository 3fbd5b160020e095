#include "fqm/algebra.hpp"

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace fqm {

namespace {

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
int ceil_div(int a, int b) { return -floor_div(-a, b); }

RationalFn t_fn(const Field& f) { return RationalFn(Poly::x(f)); }

// Coefficients of t^m, m in [lo, hi), of the Laurent expansion of f at
// t = 0; false when v_t(f) < lo.
bool laurent(const RationalFn& f, int lo, int hi, std::vector<Elem>& out) {
  out.assign(static_cast<std::size_t>(std::max(hi - lo, 0)), 0);
  if (f.is_zero()) return true;
  const Field& F = f.field();
  auto strip = [](const Poly& p, int& v) {
    v = 0;
    while (p.coeff(v) == 0) ++v;
  };
  int a = 0, b = 0;
  strip(f.num(), a);
  strip(f.den(), b);
  int v = a - b;
  if (v < lo) return false;
  int need = hi - 1 - v;
  if (need < 0) return true;
  Elem inv0 = F.inv(f.den().coeff(b));
  std::vector<Elem> R(static_cast<std::size_t>(need) + 1);
  for (int k = 0; k <= need; ++k) {
    Elem x = f.num().coeff(a + k);
    for (int j = 1; j <= k; ++j) x = F.sub(x, F.mul(f.den().coeff(b + j), R[static_cast<std::size_t>(k - j)]));
    R[static_cast<std::size_t>(k)] = F.mul(x, inv0);
  }
  for (int m = std::max(lo, v); m < hi; ++m) out[static_cast<std::size_t>(m - lo)] = R[static_cast<std::size_t>(m - v)];
  return true;
}

RationalFn frob_fn(const CyclicAlgebra& A, const RationalFn& f, int k) {
  if (f.is_zero()) return f;
  return f.map(A.L(), [&](Elem c) { return A.g(c, k); });
}

// L(t) -> F_q(t) for a function fixed by Frobenius.
RationalFn descend(const Extension& ext, const RationalFn& f) {
  for (const Poly* p : {&f.num(), &f.den()})
    for (Elem c : p->coeffs())
      if (!ext.in_base(c)) throw std::logic_error("reduced_char_poly: coefficient " + f.str() + " is not in F_q(t)");
  return f.map(ext.base(), [&](Elem c) { return ext.restrict(c); });
}

// x in L(t) as sum_j x_j d_j with x_j in F_q(t).
std::vector<RationalFn> decompose(const CyclicAlgebra& A, const RationalFn& u) {
  const Field& K = A.base();
  int n = A.n();
  std::vector<RationalFn> out(static_cast<std::size_t>(n), RationalFn(K));
  if (u.is_zero()) return out;
  const Extension& ext = A.ext();
  Poly N = u.den(), other = Poly::constant(A.L(), 1);
  for (int k = 1; k < n; ++k) {
    Poly c = u.den().map(A.L(), [&](Elem e) { return ext.frob_q(e, k); });
    N *= c;
    other *= c;
  }
  Poly num = u.num() * other;
  for (Elem c : N.coeffs())
    if (!ext.in_base(c)) throw std::logic_error("decompose: norm of the denominator is not in F_q[t]");
  Poly Nb = N.map(K, [&](Elem c) { return ext.restrict(c); });
  for (int j = 0; j < n; ++j) {
    std::vector<Elem> c(num.coeffs().size());
    for (std::size_t m = 0; m < c.size(); ++m) c[m] = A.coords(num.coeffs()[m])[j];
    out[static_cast<std::size_t>(j)] = RationalFn(Poly(K, std::move(c)), Nb);
  }
  return out;
}

using KPoly = std::vector<RationalFn>;  // low degree first

void trim(KPoly& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

KPoly kpoly_rem(KPoly a, const KPoly& b) {
  trim(a);
  while (a.size() >= b.size()) {
    RationalFn f = a.back() / b.back();
    std::size_t sh = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[sh + i] -= f * b[i];
    trim(a);
  }
  return a;
}

// Truncated power series over L in t mod t^m.
struct Ser {
  const Field* F = nullptr;
  int m = 0;
  std::array<Elem, 8> c{};

  friend Ser operator+(Ser a, const Ser& b) {
    for (int k = 0; k < a.m; ++k) a.c[static_cast<std::size_t>(k)] = a.F->add(a.c[static_cast<std::size_t>(k)], b.c[static_cast<std::size_t>(k)]);
    return a;
  }
  friend Ser operator-(Ser a, const Ser& b) {
    for (int k = 0; k < a.m; ++k) a.c[static_cast<std::size_t>(k)] = a.F->sub(a.c[static_cast<std::size_t>(k)], b.c[static_cast<std::size_t>(k)]);
    return a;
  }
  friend Ser operator*(const Ser& a, const Ser& b) {
    Ser r{a.F, a.m, {}};
    for (int i = 0; i < a.m; ++i) {
      if (a.c[static_cast<std::size_t>(i)] == 0) continue;
      for (int j = 0; i + j < a.m; ++j)
        r.c[static_cast<std::size_t>(i + j)] =
            a.F->add(r.c[static_cast<std::size_t>(i + j)], a.F->mul(a.c[static_cast<std::size_t>(i)], b.c[static_cast<std::size_t>(j)]));
    }
    return r;
  }
};

std::optional<AlgebraJet> reshape(const AlgebraJet& x, SlotWindow w) {
  SlotWindow xw = x.window();
  for (int k = xw.lo; k < std::min(w.lo, xw.hi); ++k)
    if (x[k] != 0) return std::nullopt;
  if (xw.hi < w.hi) throw std::domain_error("algebra jet: window does not reach slot " + std::to_string(w.hi));
  AlgebraJet y(x.algebra(), w);
  for (int k = std::max(w.lo, xw.lo); k < w.hi; ++k) y.set(k, x[k]);
  return y;
}

}  // namespace

CyclicAlgebra::CyclicAlgebra(const Field& base, int n, int a) : ext_(nullptr), n_(n), a_(0) {
  if (!is_prime(n)) throw std::invalid_argument("cyclic algebra: n = " + std::to_string(n) + " is not prime");
  a_ = ((a % n) + n) % n;
  if (a_ == 0) throw std::invalid_argument("cyclic algebra: generator exponent divisible by n");
  ext_ = &extension(base, n);
  const Field& L = ext_->top();
  Elem theta = 0;
  while (ext_->in_base(theta)) ++theta;
  basis_.push_back(1);
  for (int j = 1; j < n; ++j) basis_.push_back(L.mul(basis_.back(), theta));
  std::uint32_t q = base.size();
  coords_.assign(static_cast<std::size_t>(L.size()) * static_cast<std::size_t>(n), 0);
  std::vector<Elem> c(static_cast<std::size_t>(n), 0);
  for (std::uint64_t v = 0; v < L.size(); ++v) {
    std::uint64_t r = v;
    for (int j = 0; j < n; ++j, r /= q) c[static_cast<std::size_t>(j)] = static_cast<Elem>(r % q);
    Elem x = from_coords(c.data());
    for (int j = 0; j < n; ++j) coords_[static_cast<std::size_t>(x) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)];
  }
}

Elem CyclicAlgebra::g(Elem x, int k) const { return ext_->frob_q(x, ((a_ * k) % n_ + n_) % n_); }

Elem CyclicAlgebra::from_coords(const Elem* c) const {
  const Field& L = ext_->top();
  Elem x = 0;
  for (int j = 0; j < n_; ++j) x = L.add(x, L.mul(ext_->embed(c[j]), basis_[static_cast<std::size_t>(j)]));
  return x;
}

std::string CyclicAlgebra::str() const {
  return "D(q=" + std::to_string(q()) + ",n=" + std::to_string(n_) + ",a=" + std::to_string(a_) + ")";
}

const CyclicAlgebra& cyclic_algebra(const Field& base, int n, int a) {
  static std::mutex mu;
  static std::map<std::tuple<const Field*, int, int>, std::unique_ptr<CyclicAlgebra>> registry;
  std::lock_guard<std::mutex> lock(mu);
  int an = n > 0 ? ((a % n) + n) % n : a;
  auto& slot = registry[{&base, n, an}];
  if (!slot) slot = std::make_unique<CyclicAlgebra>(base, n, an);
  return *slot;
}

// ---------------------------------------------------------------------------

AlgebraElement::AlgebraElement(const CyclicAlgebra& A)
    : A_(&A), x_(static_cast<std::size_t>(A.n() * A.n()), RationalFn(A.base())) {}

AlgebraElement AlgebraElement::term(const CyclicAlgebra& A, int i, int j, const RationalFn& c) {
  AlgebraElement x(A);
  x.set(i, j, c);
  return x;
}

AlgebraElement AlgebraElement::scalar(const CyclicAlgebra& A, const RationalFn& c) { return term(A, 0, 0, c); }
AlgebraElement AlgebraElement::one(const CyclicAlgebra& A) { return scalar(A, RationalFn::constant(A.base(), 1)); }
AlgebraElement AlgebraElement::s(const CyclicAlgebra& A) { return term(A, 1, 0, RationalFn::constant(A.base(), 1)); }

AlgebraElement AlgebraElement::from_L(const CyclicAlgebra& A, const RationalFn& u, int i) {
  std::vector<RationalFn> v(static_cast<std::size_t>(A.n()), RationalFn(A.L()));
  v[static_cast<std::size_t>(i)] = u;
  return from_u(A, v);
}

AlgebraElement AlgebraElement::from_u(const CyclicAlgebra& A, const std::vector<RationalFn>& u) {
  if (static_cast<int>(u.size()) != A.n()) throw std::invalid_argument("from_u: expected n coefficients");
  AlgebraElement x(A);
  for (int i = 0; i < A.n(); ++i) {
    if (!u[static_cast<std::size_t>(i)].is_zero() && u[static_cast<std::size_t>(i)].field_ptr() != &A.L())
      throw std::invalid_argument("from_u: coefficient not over L");
    auto c = decompose(A, u[static_cast<std::size_t>(i)]);
    for (int j = 0; j < A.n(); ++j) x.x_[x.idx(i, j)] = std::move(c[static_cast<std::size_t>(j)]);
  }
  return x;
}

void AlgebraElement::set(int i, int j, const RationalFn& c) {
  if (i < 0 || j < 0 || i >= A_->n() || j >= A_->n()) throw std::out_of_range("AlgebraElement: index");
  if (c.field_ptr() != &A_->base()) throw std::invalid_argument("AlgebraElement: coefficient not over F_q");
  x_[idx(i, j)] = c;
}

RationalFn AlgebraElement::u(int i) const {
  const Field& L = A_->L();
  RationalFn r(L);
  for (int j = 0; j < A_->n(); ++j) {
    const RationalFn& c = x_[idx(i, j)];
    if (c.is_zero()) continue;
    r += c.map(L, [&](Elem e) { return A_->ext().embed(e); }) * RationalFn::constant(L, A_->basis()[static_cast<std::size_t>(j)]);
  }
  return r;
}

bool AlgebraElement::is_zero() const {
  for (const auto& c : x_)
    if (!c.is_zero()) return false;
  return true;
}

std::string AlgebraElement::str() const {
  std::string out;
  for (int i = 0; i < A_->n(); ++i)
    for (int j = 0; j < A_->n(); ++j) {
      const RationalFn& c = x_[idx(i, j)];
      if (c.is_zero()) continue;
      if (!out.empty()) out += " + ";
      out += "(" + c.str() + ")";
      if (j > 0) out += "*d" + std::to_string(j);
      if (i > 0) out += "*s" + (i > 1 ? "^" + std::to_string(i) : std::string());
    }
  return out.empty() ? "0" : out;
}

void AlgebraElement::check(const AlgebraElement& o) const {
  if (A_ != o.A_) throw std::invalid_argument("algebra elements of different algebras: " + A_->str() + " vs " + o.A_->str());
}

AlgebraElement AlgebraElement::operator-() const {
  AlgebraElement r = *this;
  for (auto& c : r.x_) c = -c;
  return r;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  check(o);
  for (std::size_t k = 0; k < x_.size(); ++k) x_[k] += o.x_[k];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  check(o);
  for (std::size_t k = 0; k < x_.size(); ++k) x_[k] -= o.x_[k];
  return *this;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  a.check(b);
  const CyclicAlgebra& A = a.algebra();
  int n = A.n();
  std::vector<RationalFn> ua, ub, w(static_cast<std::size_t>(n), RationalFn(A.L()));
  for (int i = 0; i < n; ++i) {
    ua.push_back(a.u(i));
    ub.push_back(b.u(i));
  }
  RationalFn t = t_fn(A.L());
  for (int i = 0; i < n; ++i) {
    if (ua[static_cast<std::size_t>(i)].is_zero()) continue;
    for (int j = 0; j < n; ++j) {
      if (ub[static_cast<std::size_t>(j)].is_zero()) continue;
      RationalFn v = ua[static_cast<std::size_t>(i)] * frob_fn(A, ub[static_cast<std::size_t>(j)], i);
      if (i + j >= n) v *= t;
      w[static_cast<std::size_t>((i + j) % n)] += v;
    }
  }
  return AlgebraElement::from_u(A, w);
}

AlgebraElement operator*(const RationalFn& c, const AlgebraElement& x) {
  AlgebraElement r = x;
  for (auto& e : r.x_) e *= c;
  return r;
}

bool operator==(const AlgebraElement& a, const AlgebraElement& b) { return a.A_ == b.A_ && a.x_ == b.x_; }

AlgebraElement alg_mul(const AlgebraElement& x, const AlgebraElement& y) { return x * y; }

// ---------------------------------------------------------------------------

LMatrix splitting_matrix(const AlgebraElement& x) {
  const CyclicAlgebra& A = x.algebra();
  int n = A.n();
  LMatrix M(static_cast<std::size_t>(n * n), RationalFn(A.L()));
  RationalFn t = t_fn(A.L());
  for (int i = 0; i < n; ++i) {
    RationalFn u = x.u(i);
    if (u.is_zero()) continue;
    for (int a = 0; a < n; ++a) {
      RationalFn v = frob_fn(A, u, a);
      if (a + i >= n) v *= t;
      M[static_cast<std::size_t>(a * n + (a + i) % n)] += v;
    }
  }
  return M;
}

LMatrix matmul(const LMatrix& a, const LMatrix& b, int n) {
  LMatrix r(static_cast<std::size_t>(n * n), RationalFn(a.front().field()));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const RationalFn& x = a[static_cast<std::size_t>(i * n + k)];
      if (x.is_zero()) continue;
      for (int j = 0; j < n; ++j) r[static_cast<std::size_t>(i * n + j)] += x * b[static_cast<std::size_t>(k * n + j)];
    }
  return r;
}

RationalFn determinant(const LMatrix& m, int n) {
  const Field& F = m.front().field();
  auto P = berkowitz(m, n, RationalFn(F), RationalFn::constant(F, 1));
  return n % 2 == 0 ? P.back() : -P.back();
}

std::vector<RationalFn> reduced_char_poly(const AlgebraElement& x) {
  const CyclicAlgebra& A = x.algebra();
  int n = A.n();
  auto P = berkowitz(splitting_matrix(x), n, RationalFn(A.L()), RationalFn::constant(A.L(), 1));
  std::vector<RationalFn> out;
  for (int k = 0; k <= n; ++k) out.push_back(descend(A.ext(), P[static_cast<std::size_t>(n - k)]));
  return out;
}

RationalFn reduced_trace(const AlgebraElement& x) {
  return -reduced_char_poly(x)[static_cast<std::size_t>(x.algebra().n() - 1)];
}

RationalFn reduced_norm(const AlgebraElement& x) {
  RationalFn c = reduced_char_poly(x)[0];
  return x.algebra().n() % 2 == 0 ? c : -c;
}

std::string poly_str(const std::vector<RationalFn>& coeffs) {
  std::string out;
  int n = static_cast<int>(coeffs.size()) - 1;
  for (int k = n; k >= 0; --k) {
    const RationalFn& c = coeffs[static_cast<std::size_t>(k)];
    if (c.is_zero()) continue;
    std::string mono = k == 0 ? "" : (k == 1 ? "X" : "X^" + std::to_string(k));
    std::string term;
    if (c.is_constant() && c.num().coeff(0) == 1 && k > 0)
      term = mono;
    else
      term = "(" + c.str() + ")" + (mono.empty() ? "" : "*" + mono);
    out += (out.empty() ? "" : " + ") + term;
  }
  return out.empty() ? "0" : out;
}

bool is_regular_semisimple(const AlgebraElement& x) {
  KPoly P = reduced_char_poly(x);
  const Field& K = x.algebra().base();
  KPoly dP;
  for (std::size_t k = 1; k < P.size(); ++k) {
    RationalFn c(K);
    for (std::size_t r = 0; r < k; ++r) c += P[k];
    dP.push_back(c);
  }
  trim(dP);
  KPoly a = P, b = dP;
  while (!b.empty()) {
    KPoly r = kpoly_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.size() == 1;
}

bool integral_test(const AlgebraElement& x, const Place& v) {
  const CyclicAlgebra& A = x.algebra();
  if (v.is_infinity() || v.poly() == Poly::x(A.base()))
    throw std::invalid_argument("integral_test: place " + v.str() + " has v(t) != 0");
  for (int i = 0; i < A.n(); ++i)
    for (int j = 0; j < A.n(); ++j)
      if (!x(i, j).is_zero() && x(i, j).valuation(v.poly()) < 0) return false;
  return true;
}

bool s0_test(const AlgebraElement& x) {
  const CyclicAlgebra& A = x.algebra();
  Poly t = Poly::x(A.base());
  for (int i = 0; i < A.n(); ++i)
    for (int j = 0; j < A.n(); ++j)
      if (!x(i, j).is_zero() && x(i, j).valuation(t) < 0) return false;
  return true;
}

std::optional<int> w_valuation(const AlgebraElement& x) {
  const CyclicAlgebra& A = x.algebra();
  Poly t = Poly::x(A.base());
  std::optional<int> w;
  for (int i = 0; i < A.n(); ++i)
    for (int j = 0; j < A.n(); ++j) {
      if (x(i, j).is_zero()) continue;
      int v = A.n() * x(i, j).valuation(t) + i;
      if (!w || v < *w) w = v;
    }
  return w;
}

// ---------------------------------------------------------------------------

AlgebraJet::AlgebraJet(const CyclicAlgebra& A, SlotWindow w)
    : A_(&A), w_(w), c_(static_cast<std::size_t>(std::max(w.length(), 0)), 0) {
  if (w.hi < w.lo) throw std::invalid_argument("AlgebraJet: empty window reversed");
}

AlgebraJet AlgebraJet::from_index(const CyclicAlgebra& A, SlotWindow w, std::uint64_t idx) {
  AlgebraJet x(A, w);
  int n = A.n();
  std::uint64_t q = A.q();
  std::vector<Elem> c(static_cast<std::size_t>(n));
  for (int k = w.hi - 1; k >= w.lo; --k) {
    for (int j = n - 1; j >= 0; --j, idx /= q) c[static_cast<std::size_t>(j)] = static_cast<Elem>(idx % q);
    x.set(k, A.from_coords(c.data()));
  }
  return x;
}

bool AlgebraJet::is_zero() const {
  for (Elem c : c_)
    if (c != 0) return false;
  return true;
}

std::uint64_t AlgebraJet::index() const {
  std::uint64_t idx = 0, q = A_->q();
  for (Elem c : c_) {
    const Elem* co = A_->coords(c);
    for (int j = 0; j < A_->n(); ++j) idx = idx * q + co[j];
  }
  return idx;
}

AlgebraJet AlgebraJet::truncate(SlotWindow w) const {
  if (w.hi > w_.hi) throw std::domain_error("AlgebraJet::truncate: slots above " + std::to_string(w_.hi) + " unknown");
  for (int k = w_.lo; k < std::min(w.lo, w_.hi); ++k)
    if ((*this)[k] != 0) throw std::domain_error("AlgebraJet::truncate: nonzero slot below the window");
  AlgebraJet y(*A_, w);
  for (int k = std::max(w.lo, w_.lo); k < w.hi; ++k) y.set(k, (*this)[k]);
  return y;
}

std::string AlgebraJet::str() const {
  std::ostringstream os;
  os << "[" << w_.lo << "," << w_.hi << "):";
  for (Elem c : c_) os << " " << A_->L().str(c);
  return os.str();
}

AlgebraJet AlgebraJet::operator-() const {
  AlgebraJet r = *this;
  for (auto& c : r.c_) c = A_->L().neg(c);
  return r;
}

AlgebraJet operator+(const AlgebraJet& a, const AlgebraJet& b) {
  if (a.A_ != b.A_ || !(a.w_ == b.w_)) throw std::invalid_argument("AlgebraJet: sum of jets on different windows");
  AlgebraJet r = a;
  for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] = a.A_->L().add(a.c_[k], b.c_[k]);
  return r;
}

AlgebraJet operator*(const AlgebraJet& a, const AlgebraJet& b) {
  if (a.A_ != b.A_) throw std::invalid_argument("AlgebraJet: product across algebras");
  const CyclicAlgebra& A = *a.A_;
  const Field& L = A.L();
  SlotWindow w{a.w_.lo + b.w_.lo, std::min(a.w_.hi + b.w_.lo, a.w_.lo + b.w_.hi)};
  AlgebraJet r(A, w);
  for (int i = a.w_.lo; i < a.w_.hi; ++i) {
    Elem x = a[i];
    if (x == 0) continue;
    for (int j = b.w_.lo; i + j < w.hi; ++j) {
      Elem y = b[j];
      if (y == 0) continue;
      r.c_[static_cast<std::size_t>(i + j - w.lo)] = L.add(r.c_[static_cast<std::size_t>(i + j - w.lo)], L.mul(x, A.g(y, i)));
    }
  }
  return r;
}

bool operator==(const AlgebraJet& a, const AlgebraJet& b) { return a.A_ == b.A_ && a.w_ == b.w_ && a.c_ == b.c_; }

std::optional<AlgebraJet> try_jet(const AlgebraElement& x, SlotWindow w) {
  const CyclicAlgebra& A = x.algebra();
  const Field& L = A.L();
  int n = A.n();
  AlgebraJet r(A, w);
  std::vector<Elem> dig;
  for (int i = 0; i < n; ++i) {
    int mlo = ceil_div(w.lo - i, n), mhi = ceil_div(w.hi - i, n);
    for (int j = 0; j < n; ++j) {
      if (!laurent(x(i, j), mlo, mhi, dig)) return std::nullopt;
      Elem d = A.basis()[static_cast<std::size_t>(j)];
      for (int m = mlo; m < mhi; ++m) {
        Elem c = dig[static_cast<std::size_t>(m - mlo)];
        if (c == 0) continue;
        int k = n * m + i;
        r.set(k, L.add(r[k], L.mul(A.ext().embed(c), d)));
      }
    }
  }
  return r;
}

AlgebraJet algebra_jet(const AlgebraElement& x, SlotWindow w) {
  auto j = try_jet(x, w);
  if (!j) throw std::domain_error("algebra_jet: " + x.str() + " has a slot below " + std::to_string(w.lo));
  return *j;
}

std::optional<int> w_valuation(const AlgebraJet& x) {
  for (int k = x.window().lo; k < x.window().hi; ++k)
    if (x[k] != 0) return k;
  return std::nullopt;
}

AlgebraJet residue_algebra_class(const AlgebraElement& x) {
  if (!s0_test(x)) throw std::invalid_argument("residue_algebra_class: " + x.str() + " is not in S_0");
  return algebra_jet(x, {0, x.algebra().n()});
}

bool is_unit(const AlgebraJet& u) { return u.window().lo == 0 && u.window().hi > 0 && u[0] != 0; }

AlgebraJet inverse(const AlgebraJet& u) {
  if (!is_unit(u)) throw std::domain_error("inverse: jet is not a unit");
  const CyclicAlgebra& A = u.algebra();
  const Field& L = A.L();
  int H = u.window().hi;
  AlgebraJet v(A, u.window());
  Elem inv0 = L.inv(u[0]);
  v.set(0, inv0);
  for (int k = 1; k < H; ++k) {
    Elem s = 0;
    for (int i = 1; i <= k; ++i) s = L.add(s, L.mul(u[i], A.g(v[k - i], i)));
    v.set(k, L.neg(L.mul(inv0, s)));
  }
  return v;
}

AlgebraJet conjugate(const AlgebraJet& x, const AlgebraJet& u) {
  int len = x.window().length();
  if (!is_unit(u) || u.window().hi < len) throw std::invalid_argument("conjugate: need a unit jet of length >= " + std::to_string(len));
  AlgebraJet v = u.truncate({0, len});
  return v * x * inverse(v);
}

AlgebraJet random_jet(const CyclicAlgebra& A, SlotWindow w, std::mt19937_64& rng) {
  AlgebraJet x(A, w);
  for (int k = w.lo; k < w.hi; ++k) x.set(k, static_cast<Elem>(rng() % A.L().size()));
  return x;
}

AlgebraJet random_unit(const CyclicAlgebra& A, int length, std::mt19937_64& rng) {
  AlgebraJet u = random_jet(A, {0, length}, rng);
  u.set(0, static_cast<Elem>(1 + rng() % (A.L().size() - 1)));
  return u;
}

std::vector<std::vector<Elem>> jet_char_poly(const AlgebraJet& x0, int depth) {
  const CyclicAlgebra& A = x0.algebra();
  int n = A.n();
  if (depth < 0 || depth > 8) throw std::invalid_argument("jet_char_poly: depth must lie in [0, 8]");
  if (x0.window().hi < n * depth) throw std::domain_error("jet_char_poly: window too short for depth " + std::to_string(depth));
  AlgebraJet x = x0.truncate({0, n * depth});
  const Field& L = A.L();
  Ser zero{&L, depth, {}}, one = zero;
  if (depth > 0) one.c[0] = 1;
  std::vector<Ser> M(static_cast<std::size_t>(n * n), zero);
  for (int k = 0; k < n * depth; ++k) {
    Elem c = x[k];
    if (c == 0) continue;
    int m = k / n, i = k % n;
    for (int a = 0; a < n; ++a) {
      int e = m + (a + i >= n ? 1 : 0);
      if (e >= depth) continue;
      Ser& s = M[static_cast<std::size_t>(a * n + (a + i) % n)];
      s.c[static_cast<std::size_t>(e)] = L.add(s.c[static_cast<std::size_t>(e)], A.g(c, a));
    }
  }
  auto P = berkowitz(M, n, zero, one);
  std::vector<std::vector<Elem>> out(static_cast<std::size_t>(n), std::vector<Elem>(static_cast<std::size_t>(depth)));
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < depth; ++m) {
      Elem c = P[static_cast<std::size_t>(n - k)].c[static_cast<std::size_t>(m)];
      if (!A.ext().in_base(c)) throw std::logic_error("jet_char_poly: coefficient outside F_q");
      out[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)] = A.ext().restrict(c);
    }
  return out;
}

std::uint64_t w_additivity_violations(const CyclicAlgebra& A, int depth, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SlotWindow w = integral_window(A, depth);
  auto nonzero = [&] {
    for (;;) {
      AlgebraJet x = random_jet(A, w, rng);
      if (!x.is_zero()) return x;
    }
  };
  std::uint64_t bad = 0;
  for (int s = 0; s < samples; ++s) {
    AlgebraJet x = nonzero(), y = nonzero();
    int e = *w_valuation(x) + *w_valuation(y);
    auto wp = w_valuation(x * y);
    bool ok = e < w.hi ? (wp && *wp == e) : !wp;
    if (!ok) ++bad;
  }
  return bad;
}

// ---------------------------------------------------------------------------

AlgebraTestFunction::AlgebraTestFunction(const CyclicAlgebra& alg, SlotWindow w) : A(&alg), window(w) {
  double bits = static_cast<double>(alg.n()) * w.length() * std::log2(static_cast<double>(alg.q()));
  if (w.length() < 0 || bits > 24.5) throw std::length_error("AlgebraTestFunction: window too large for a table");
  std::uint64_t size = 1;
  for (int k = 0; k < alg.n() * w.length(); ++k) size *= alg.q();
  table.assign(size, CycScalar(alg.base().p(), Rational(0)));
}

CycScalar AlgebraTestFunction::at(const AlgebraJet& x) const {
  auto y = reshape(x, window);
  if (!y) return CycScalar(A->base().p(), Rational(0));
  return table[y->index()];
}

CycScalar AlgebraTestFunction::at(const AlgebraElement& x) const {
  auto y = try_jet(x, window);
  if (!y) return CycScalar(A->base().p(), Rational(0));
  return table[y->index()];
}

AlgebraTestFunction reflect(const AlgebraTestFunction& phi) {
  AlgebraTestFunction r(*phi.A, phi.window);
  for (std::uint64_t i = 0; i < phi.size(); ++i) {
    AlgebraJet x = AlgebraJet::from_index(*phi.A, phi.window, i);
    r.table[(-x).index()] = phi.table[i];
  }
  return r;
}

std::uint64_t invariance_defects(const AlgebraTestFunction& phi, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uint64_t bad = 0;
  for (int s = 0; s < samples; ++s) {
    std::uint64_t i = rng() % phi.size();
    AlgebraJet x = AlgebraJet::from_index(*phi.A, phi.window, i);
    AlgebraJet u = random_unit(*phi.A, std::max(phi.window.length(), 1), rng);
    if (!(phi.table[conjugate(x, u).index()] == phi.table[i])) ++bad;
  }
  return bad;
}

InvariantRecipe InvariantRecipe::constant() { return {}; }

InvariantRecipe InvariantRecipe::trace_character(int depth) {
  InvariantRecipe r;
  r.kind = Kind::TraceCharacter;
  r.depth = depth;
  return r;
}

InvariantRecipe InvariantRecipe::charpoly_coset(const AlgebraElement& c, int depth) {
  const CyclicAlgebra& A = c.algebra();
  auto P = reduced_char_poly(c);
  InvariantRecipe r;
  r.kind = Kind::CharPolyCoset;
  r.depth = depth;
  std::vector<Elem> dig;
  for (int k = 0; k < A.n(); ++k) {
    if (!laurent(P[static_cast<std::size_t>(k)], 0, depth, dig))
      throw std::invalid_argument("charpoly_coset: char poly of " + c.str() + " is not integral at t");
    r.target.push_back(dig);
  }
  return r;
}

std::string InvariantRecipe::name() const {
  switch (kind) {
    case Kind::Constant:
      return "constant";
    case Kind::TraceCharacter:
      return "trace_character(mod t^" + std::to_string(depth) + ")";
    case Kind::CharPolyCoset: {
      std::string s = "charpoly_coset(mod t^" + std::to_string(depth) + ":";
      for (const auto& c : target) {
        s += " [";
        for (std::size_t m = 0; m < c.size(); ++m) s += (m ? "," : "") + std::to_string(c[m]);
        s += "]";
      }
      return s + ")";
    }
  }
  return "";
}

AlgebraTestFunction invariant_fn(const CyclicAlgebra& A, const InvariantRecipe& r, int M) {
  if (r.depth > M)
    throw std::invalid_argument("invariant_fn: recipe reads char poly data mod t^" + std::to_string(r.depth) +
                                " beyond the window depth " + std::to_string(M));
  if (r.kind == InvariantRecipe::Kind::CharPolyCoset &&
      (static_cast<int>(r.target.size()) != A.n() || (A.n() > 0 && static_cast<int>(r.target[0].size()) != r.depth)))
    throw std::invalid_argument("invariant_fn: coset target has the wrong shape");
  SlotWindow w = integral_window(A, M);
  AlgebraTestFunction phi(A, w);
  const Field& K = A.base();
  CycScalar one(K.p(), Rational(1));
  for (std::uint64_t i = 0; i < phi.size(); ++i) {
    if (r.kind == InvariantRecipe::Kind::Constant) {
      phi.table[i] = one;
      continue;
    }
    auto cp = jet_char_poly(AlgebraJet::from_index(A, w, i), r.depth);
    if (r.kind == InvariantRecipe::Kind::TraceCharacter) {
      Elem s = 0;
      for (Elem c : cp[static_cast<std::size_t>(A.n() - 1)]) s = K.sub(s, c);
      phi.table[i] = K.psi(s);
    } else if (cp == r.target) {
      phi.table[i] = one;
    }
  }
  return phi;
}

SlotWindow dual_slot_window(const CyclicAlgebra& A, SlotWindow w, Pairing pairing) {
  int n = A.n();
  if (pairing == Pairing::Trace) return {1 - n - w.hi, 1 - n - w.lo};
  if (w.lo % n != 0 || w.hi % n != 0)
    throw std::invalid_argument("dual_slot_window: dot-product pairing needs windows aligned to multiples of n");
  return {-w.hi, -w.lo};
}

int nu_D(const CyclicAlgebra& A, Pairing pairing) {
  // S_0^perp = s^h O with h the top of the dual of [0, n).
  int h = dual_slot_window(A, {0, A.n()}, pairing).hi;
  return -A.n() * h;
}

Elem algebra_pairing(const AlgebraJet& x, const AlgebraJet& y, Pairing pairing) {
  const CyclicAlgebra& A = x.algebra();
  int n = A.n();
  SlotWindow wx = x.window(), wy = y.window();
  auto in = [](SlotWindow w, int k) { return k >= w.lo && k < w.hi; };
  if (pairing == Pairing::Trace) {
    const Field& L = A.L();
    Elem s = 0;
    for (int k = wx.lo; k < wx.hi; ++k)
      if (in(wy, -n - k) && x[k] != 0) s = L.add(s, L.mul(x[k], A.g(y[-n - k], k)));
    return A.ext().trace(s);
  }
  const Field& K = A.base();
  Elem s = 0;
  for (int k = wx.lo; k < wx.hi; ++k) {
    int i = k - n * floor_div(k, n), m = floor_div(k, n);
    int k2 = n * (-1 - m) + i;
    if (!in(wy, k2)) continue;
    const Elem* a = A.coords(x[k]);
    const Elem* b = A.coords(y[k2]);
    for (int j = 0; j < n; ++j) s = K.add(s, K.mul(a[j], b[j]));
  }
  return s;
}

std::vector<Elem> algebra_gram(const CyclicAlgebra& A, SlotWindow w, Pairing pairing) {
  SlotWindow wd = dual_slot_window(A, w, pairing);
  int n = A.n(), D = n * w.length();
  std::vector<Elem> B(static_cast<std::size_t>(D) * static_cast<std::size_t>(D), 0);
  for (int k = 0; k < D; ++k)
    for (int l = 0; l < D; ++l) {
      AlgebraJet x(A, wd), y(A, w);
      x.set(wd.lo + k / n, A.basis()[static_cast<std::size_t>(k % n)]);
      y.set(w.lo + l / n, A.basis()[static_cast<std::size_t>(l % n)]);
      B[static_cast<std::size_t>(k * D + l)] = algebra_pairing(x, y, pairing);
    }
  return B;
}

namespace {

Rational fourier_scale(const CyclicAlgebra& A, SlotWindow w, Pairing pairing) {
  int nu = nu_D(A, pairing);
  if (nu % 2 != 0) throw std::domain_error("fourier_D: nu_D = " + std::to_string(nu) + " is odd");
  return Rational::power(static_cast<std::int64_t>(A.q()), -A.n() * w.hi - nu / 2);
}

}  // namespace

AlgebraTestFunction fourier_D(const AlgebraTestFunction& phi, Pairing pairing) {
  const CyclicAlgebra& A = *phi.A;
  SlotWindow wd = dual_slot_window(A, phi.window, pairing);
  AlgebraTestFunction out(A, wd);
  out.table = gram_fourier(A.base(), algebra_gram(A, phi.window, pairing), A.n() * phi.window.length(), phi.table,
                           fourier_scale(A, phi.window, pairing));
  return out;
}

CycScalar fourier_D_at(const AlgebraTestFunction& phi, const AlgebraJet& x0, Pairing pairing) {
  const CyclicAlgebra& A = *phi.A;
  const Field& K = A.base();
  CycScalar sum(K.p(), Rational(0));
  auto x = reshape(x0, dual_slot_window(A, phi.window, pairing));
  if (!x) return sum;
  for (std::uint64_t i = 0; i < phi.size(); ++i) {
    if (phi.table[i].is_zero()) continue;
    AlgebraJet y = AlgebraJet::from_index(A, phi.window, i);
    sum += phi.table[i].times_zeta(K.trace_to_prime(algebra_pairing(*x, y, pairing)));
  }
  return sum * fourier_scale(A, phi.window, pairing);
}

// ---------------------------------------------------------------------------

namespace {

void check_forms(const CyclicAlgebra& D, const CyclicAlgebra& Ddot) {
  if (&D.base() != &Ddot.base() || D.n() != Ddot.n())
    throw std::invalid_argument("matched pair: algebras over different fields");
  if (D.a() == Ddot.a()) throw std::invalid_argument("matched pair: the two forms have the same generator");
}

void check_matched(const MatchedPair& m) {
  if (reduced_char_poly(m.c) != reduced_char_poly(m.cdot))
    throw std::logic_error("matched pair: char polys differ for " + m.c.str());
}

}  // namespace

MatchedPair matched_pair(const CyclicAlgebra& D, const CyclicAlgebra& Ddot, Elem b) {
  check_forms(D, Ddot);
  if (b == 0) throw std::invalid_argument("matched_pair: b = 0");
  RationalFn u = RationalFn::constant(D.L(), b);
  MatchedPair m{AlgebraElement::from_L(D, u, 1), AlgebraElement::from_L(Ddot, u, 1), "bs-form"};
  check_matched(m);
  return m;
}

MatchedPair matched_pair_L(const CyclicAlgebra& D, const CyclicAlgebra& Ddot, const RationalFn& c) {
  check_forms(D, Ddot);
  MatchedPair m{AlgebraElement::from_L(D, c), AlgebraElement::from_L(Ddot, c), "L-common"};
  check_matched(m);
  return m;
}

MatchedPair central_move(const MatchedPair& m, int k, const RationalFn& z) {
  const Field& K = m.c.algebra().base();
  RationalFn f = k >= 0 ? RationalFn(Poly::constant(K, 1), power(Poly::x(K), k)) : RationalFn(power(Poly::x(K), -k));
  MatchedPair r{f * m.c + AlgebraElement::scalar(m.c.algebra(), z),
                f * m.cdot + AlgebraElement::scalar(m.cdot.algebra(), z), m.provenance};
  check_matched(r);
  return r;
}

std::vector<MatchedPair> theorem_a_pairs(const CyclicAlgebra& D, const CyclicAlgebra& Ddot) {
  const Field& K = D.base();
  const Field& L = D.L();
  RationalFn zero(K), t = t_fn(K);
  RationalFn ti = t.inverse(), ti2 = ti * ti;
  const std::vector<std::pair<int, RationalFn>> bs_moves = {{2, zero}, {2, ti2}, {1, ti}, {0, zero}, {0, ti2 + ti}};
  const std::vector<std::pair<int, RationalFn>> l_moves = {{2, zero}, {2, ti2}, {0, ti2 + ti}};
  std::vector<MatchedPair> out;
  for (Elem b = 1; b < L.size(); ++b) {
    MatchedPair m = matched_pair(D, Ddot, b);
    for (const auto& [k, z] : bs_moves) out.push_back(central_move(m, k, z));
  }
  for (Elem c = 0; c < L.size(); ++c) {
    if (D.ext().in_base(c)) continue;
    MatchedPair m = matched_pair_L(D, Ddot, RationalFn::constant(L, c));
    for (const auto& [k, z] : l_moves) out.push_back(central_move(m, k, z));
  }
  Poly t1 = Poly::x(L) + Poly::constant(L, 1);
  MatchedPair m = matched_pair_L(D, Ddot, RationalFn(t1.scale(D.basis()[1])));
  out.push_back(central_move(m, 2, zero));
  out.push_back(central_move(m, 0, zero));
  return out;
}

std::vector<InvariantRecipe> theorem_a_recipes(const CyclicAlgebra& D, int depth) {
  const Field& K = D.base();
  RationalFn one = RationalFn::constant(K, 1);
  AlgebraElement s = AlgebraElement::s(D), d1 = AlgebraElement::term(D, 0, 1, one);
  return {InvariantRecipe::constant(),
          InvariantRecipe::trace_character(depth),
          InvariantRecipe::charpoly_coset(s, depth),
          InvariantRecipe::charpoly_coset(AlgebraElement::one(D) + s, depth),
          InvariantRecipe::charpoly_coset(d1, depth),
          InvariantRecipe::charpoly_coset(d1 + s, depth)};
}

bool TheoremAReport::ok() const {
  if (compared == 0) return false;
  for (const auto& r : rows)
    if (r.regular && !r.equal) return false;
  return true;
}

TheoremAReport theorem_a_report(const CyclicAlgebra& D, const CyclicAlgebra& Ddot, const InvariantRecipe& recipe,
                                const std::vector<MatchedPair>& pairs, int M, Pairing pairing) {
  check_forms(D, Ddot);
  TheoremAReport rep;
  rep.recipe = recipe.name();
  rep.M = M;
  AlgebraTestFunction F = fourier_D(invariant_fn(D, recipe, M), pairing);
  AlgebraTestFunction Fd = fourier_D(invariant_fn(Ddot, recipe, M), pairing);
  int id = 0;
  for (const auto& m : pairs) {
    if (&m.c.algebra() != &D || &m.cdot.algebra() != &Ddot)
      throw std::invalid_argument("theorem_a_report: pair from other algebras");
    check_matched(m);
    TheoremARow row;
    row.pair_id = id++;
    row.provenance = m.provenance;
    row.charpoly = poly_str(reduced_char_poly(m.c));
    row.regular = is_regular_semisimple(m.c);
    row.value_D = F.at(m.c);
    row.value_Ddot = Fd.at(m.cdot);
    row.equal = row.value_D == row.value_Ddot;
    if (row.regular) ++rep.compared;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace fqm
