#include "fqm/motivic.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace fqm {

namespace {

constexpr std::uint64_t kMaxPoints = 1ull << 26;

}  // namespace

ConstructibleSet ConstructibleSet::affine(const Field& f, int m) {
  ConstructibleSet X;
  X.base = &f;
  X.m = m;
  return X;
}

bool ConstructibleSet::contains(const Extension& ext, const Elem* point) const {
  for (const auto& e : equations)
    if (e.eval(ext, point) != 0) return false;
  for (const auto& g : inequations)
    if (g.eval(ext, point) == 0) return false;
  return true;
}

ConstructibleSet product(const ConstructibleSet& a, const ConstructibleSet& b) {
  if (a.base != b.base) throw std::invalid_argument("product: base field mismatch");
  ConstructibleSet r = ConstructibleSet::affine(*a.base, a.m + b.m);
  for (const auto& e : a.equations) r.equations.push_back(e.relocate(0, r.m));
  for (const auto& e : b.equations) r.equations.push_back(e.relocate(a.m, r.m));
  for (const auto& g : a.inequations) r.inequations.push_back(g.relocate(0, r.m));
  for (const auto& g : b.inequations) r.inequations.push_back(g.relocate(a.m, r.m));
  return r;
}

void for_each_point(const ConstructibleSet& X, int d, const std::function<void(const std::vector<Elem>&)>& fn) {
  if (d < 1) throw std::invalid_argument("enumerate_points: degree must be >= 1");
  const Extension& ext = extension(*X.base, d);
  std::uint64_t Q = ext.top().size();
  std::uint64_t total = 1;
  for (int i = 0; i < X.m; ++i) {
    total *= Q;
    if (total > kMaxPoints) throw std::length_error("enumerate_points: point budget exceeded");
  }
  std::vector<Elem> pt(static_cast<std::size_t>(X.m), 0);
  for (std::uint64_t k = 0; k < total; ++k) {
    if (X.contains(ext, pt.data())) fn(pt);
    for (int i = X.m - 1; i >= 0; --i) {
      auto& c = pt[static_cast<std::size_t>(i)];
      if (++c < Q) break;
      c = 0;
    }
  }
}

std::vector<std::vector<Elem>> enumerate_points(const ConstructibleSet& X, int d) {
  std::vector<std::vector<Elem>> out;
  for_each_point(X, d, [&](const std::vector<Elem>& p) { out.push_back(p); });
  return out;
}

MotivicClass MotivicClass::generator(const ConstructibleSet& X, const MPoly& h, long coef) {
  if (h.nvars() != X.m || &h.field() != X.base) throw std::invalid_argument("MotivicClass: h does not live on X");
  MotivicClass r(*X.base);
  if (coef != 0) r.terms_.push_back({coef, X, h});
  return r;
}

MotivicClass MotivicClass::lefschetz(const Field& f) {
  return generator(ConstructibleSet::affine(f, 1), MPoly(f, 1));
}

MotivicClass MotivicClass::one(const Field& f) { return generator(ConstructibleSet::affine(f, 0), MPoly(f, 0)); }

MotivicClass MotivicClass::psi_point(const Field& f, Elem c) {
  ConstructibleSet X = ConstructibleSet::affine(f, 1);
  X.equations.push_back(MPoly::variable(f, 1, 0) - MPoly::constant(f, 1, c));
  return generator(X, MPoly::variable(f, 1, 0));
}

MotivicClass MotivicClass::scaled(long c) const {
  MotivicClass r = *this;
  if (c == 0) {
    r.terms_.clear();
    return r;
  }
  for (auto& t : r.terms_) t.coef *= c;
  return r;
}

namespace {

// Multiply every term by [A^k, 0].
std::vector<MotivicTerm> times_affine(const std::vector<MotivicTerm>& terms, int k) {
  std::vector<MotivicTerm> out;
  for (const auto& t : terms) {
    ConstructibleSet X = product(t.X, ConstructibleSet::affine(*t.X.base, k));
    out.push_back({t.coef, X, t.h.relocate(0, X.m)});
  }
  return out;
}

}  // namespace

MotivicClass class_add(const MotivicClass& a, const MotivicClass& b) {
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  if (a.base_ != b.base_) throw std::invalid_argument("class_add: base field mismatch");
  MotivicClass r(*a.base_);
  r.lshift_ = std::min(a.lshift_, b.lshift_);
  auto ta = a.lshift_ > r.lshift_ ? times_affine(a.terms_, a.lshift_ - r.lshift_) : a.terms_;
  auto tb = b.lshift_ > r.lshift_ ? times_affine(b.terms_, b.lshift_ - r.lshift_) : b.terms_;
  r.terms_ = std::move(ta);
  r.terms_.insert(r.terms_.end(), tb.begin(), tb.end());
  return r;
}

MotivicClass class_mul(const MotivicClass& a, const MotivicClass& b) {
  if (a.base_ && b.base_ && a.base_ != b.base_) throw std::invalid_argument("class_mul: base field mismatch");
  MotivicClass r;
  r.base_ = a.base_ ? a.base_ : b.base_;
  r.lshift_ = a.lshift_ + b.lshift_;
  for (const auto& s : a.terms_) {
    for (const auto& t : b.terms_) {
      ConstructibleSet X = product(s.X, t.X);
      MPoly h = s.h.relocate(0, X.m) + t.h.relocate(s.X.m, X.m);
      r.terms_.push_back({s.coef * t.coef, std::move(X), std::move(h)});
    }
  }
  return r;
}

MotivicClass shift_L(const MotivicClass& a, int k) {
  MotivicClass r = a;
  r.lshift_ += k;
  return r;
}

CycScalar specialize(const MotivicClass& a, int d) {
  if (!a.base()) return CycScalar();
  const Field& f = *a.base();
  int p = f.p();
  CycScalar total(p, Rational(0));
  for (const auto& t : a.terms()) {
    const Extension& ext = extension(f, d);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(p), 0);
    for_each_point(t.X, d, [&](const std::vector<Elem>& x) {
      ++counts[static_cast<std::size_t>(ext.top().trace_to_prime(t.h.eval(ext, x.data())))];
    });
    total += CycScalar::from_counts(p, counts) * Rational(t.coef);
  }
  return total * Rational::power(static_cast<std::int64_t>(f.size()), d * a.lshift());
}

ClassComparison compare_classes(const MotivicClass& a, const MotivicClass& b, int max_degree) {
  for (int d = 1; d <= max_degree; ++d)
    if (!(specialize(a, d) == specialize(b, d))) return {true, d};
  return {false, max_degree};
}

int orbit_size(const Extension& ext, const std::vector<Elem>& point) {
  std::vector<Elem> cur = point;
  for (int k = 1; k <= ext.degree(); ++k) {
    for (auto& c : cur) c = ext.frob_q(c);
    if (cur == point) return k;
  }
  throw std::logic_error("orbit_size: Frobenius did not return");
}

std::vector<ClosedPoint> closed_points(const ConstructibleSet& X, int B) {
  if (B < 1) throw std::invalid_argument("closed_points: B must be >= 1");
  std::vector<ClosedPoint> out;
  for (int d = 1; d <= B; ++d) {
    const Extension& ext = extension(*X.base, d);
    for_each_point(X, d, [&](const std::vector<Elem>& x) {
      if (orbit_size(ext, x) != d) return;
      std::vector<Elem> cur = x;
      for (int k = 1; k < d; ++k) {
        for (auto& c : cur) c = ext.frob_q(c);
        if (cur < x) return;
      }
      out.push_back({d, x});
    });
  }
  return out;
}

CycScalar orbit_norm_value(const ConstructibleSet& X, const ClosedPoint& P, const MPoly& h) {
  const Extension& ext = extension(*X.base, P.degree);
  if (static_cast<int>(P.rep.size()) != X.m) throw std::invalid_argument("orbit_norm_value: wrong point arity");
  if (orbit_size(ext, P.rep) != P.degree) throw std::invalid_argument("orbit_norm_value: degenerate orbit");
  if (!X.contains(ext, P.rep.data())) throw std::invalid_argument("orbit_norm_value: point not on X");
  return ext.top().psi(h.eval(ext, P.rep.data()));
}

EulerSeries euler_product(const ConstructibleSet& X, const EulerRecipe& a, int B) {
  if (B < 1) throw std::invalid_argument("euler_product: B must be >= 1");
  int p = X.base->p();
  const CycScalar zero(p, Rational(0));
  EulerSeries out;

  out.lhs.assign(static_cast<std::size_t>(B) + 1, zero);
  out.lhs[0] = CycScalar(p, Rational(1));
  if (a.coef != 0) {
    for (const auto& v : closed_points(X, B)) {
      CycScalar av = orbit_norm_value(X, v, a.h) * Rational(a.coef);
      for (int i = B; i >= v.degree; --i)
        out.lhs[static_cast<std::size_t>(i)] += av * out.lhs[static_cast<std::size_t>(i - v.degree)];
    }
  }

  // log of the product: c_m = (1/m) sum_{x in X(F_{q^m})} (-1)^{k-1} a^k psi(Tr h(x)),
  // k = m / deg(x).
  std::vector<CycScalar> c(static_cast<std::size_t>(B) + 1, zero);
  if (a.coef != 0) {
    for (int m = 1; m <= B; ++m) {
      const Extension& ext = extension(*X.base, m);
      std::map<int, std::vector<std::int64_t>> counts;
      for_each_point(X, m, [&](const std::vector<Elem>& x) {
        int k = m / orbit_size(ext, x);
        auto& cnt = counts[k];
        if (cnt.empty()) cnt.assign(static_cast<std::size_t>(p), 0);
        ++cnt[static_cast<std::size_t>(ext.top().trace_to_prime(a.h.eval(ext, x.data())))];
      });
      CycScalar s = zero;
      for (const auto& [k, cnt] : counts) {
        Rational w = Rational::power(a.coef, k);
        if (k % 2 == 0) w = -w;
        s += CycScalar::from_counts(p, cnt) * w;
      }
      c[static_cast<std::size_t>(m)] = s * Rational(1, m);
    }
  }
  out.rhs.assign(static_cast<std::size_t>(B) + 1, zero);
  out.rhs[0] = CycScalar(p, Rational(1));
  for (int n = 1; n <= B; ++n) {
    CycScalar s = zero;
    for (int m = 1; m <= n; ++m)
      s += c[static_cast<std::size_t>(m)] * out.rhs[static_cast<std::size_t>(n - m)] * Rational(m);
    out.rhs[static_cast<std::size_t>(n)] = s * Rational(1, n);
  }
  return out;
}

}  // namespace fqm
