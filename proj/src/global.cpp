#include "fqm/global.hpp"

#include <algorithm>
#include <stdexcept>

namespace fqm {

namespace {

PlaceWindow standard_window(const Place& u, Window w) { return {PlaceData::standard(u), w}; }

std::vector<std::pair<Place, Window>> place_windows(const GlobalTestFunction& phi) {
  std::vector<std::pair<Place, Window>> out;
  for (const auto& s : phi.support()) out.emplace_back(s.place.place, s.window);
  return out;
}

void check_global(const GlobalTestFunction& phi) {
  for (std::size_t u = 0; u < phi.support().size(); ++u) {
    const auto& s = phi.support()[u];
    if (!(s.place == PlaceData::standard(s.place.place)))
      throw std::invalid_argument("global test function: nonstandard nu at " + s.place.place.str());
    if (u > 0 && !(phi.support()[u - 1].place.place < s.place.place))
      throw std::invalid_argument("global test function: support not sorted or repeated");
  }
}

// Places where some a_j has a pole (finite) or v_inf(a_j) < bound_inf.
std::vector<Place> pole_places(const Field& f, const std::vector<RationalFn>& a) {
  std::vector<Place> out;
  for (const auto& x : a) {
    if (x.is_zero()) continue;
    for (const auto& [pi, m] : factor(x.den())) out.push_back(Place::finite(pi));
  }
  out.push_back(Place::infinity(f));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Grow phi so that every listed place is present with at least the given
// window; strict turns any growth into an error.
GlobalTestFunction enlarge(const GlobalTestFunction& phi, const std::map<Place, Window>& need, bool strict,
                           const char* what) {
  std::vector<Place> extra;
  for (const auto& [u, w] : need) {
    bool present = false;
    for (const auto& s : phi.support()) present |= s.place.place == u;
    if (!present && (w.N > 0 || w.M > 0)) extra.push_back(u);
  }
  if (strict && !extra.empty())
    throw std::domain_error(std::string(what) + ": pole escape at " + extra.front().str());
  GlobalTestFunction out = extra.empty() ? phi : normalize_support(phi, extra);
  std::vector<Window> target;
  bool grow = false;
  for (const auto& s : out.support()) {
    Window w = s.window;
    auto it = need.find(s.place.place);
    if (it != need.end()) {
      Window r{std::max(w.N, it->second.N), std::max(w.M, it->second.M)};
      grow |= !(r == w);
      w = r;
    }
    target.push_back(w);
  }
  if (!grow) return out;
  if (strict) throw std::domain_error(std::string(what) + ": pole escape, window too small");
  return rewindow(out, target);
}

GlobalTestFunction fourier_ready(const GlobalTestFunction& phi) {
  check_global(phi);
  std::map<Place, Window> need;
  need[Place::infinity(phi.field())] = Window{0, 2};
  for (const auto& s : phi.support()) need[s.place.place] = Window{0, s.place.nu};
  return enlarge(phi, need, false, "global_fourier");
}

}  // namespace

std::vector<Place> places_up_to(const Field& f, int B) {
  if (B < 1) throw std::invalid_argument("places_up_to: B must be >= 1");
  std::vector<Place> out{Place::infinity(f)};
  for (int d = 1; d <= B; ++d)
    for (const auto& pi : monic_irreducibles(f, d)) out.push_back(Place::finite(pi));
  std::sort(out.begin(), out.end());
  return out;
}

int valuation_at(const RationalFn& f, const Place& u) {
  if (f.is_zero()) throw std::domain_error("valuation_at: zero function");
  return u.is_infinity() ? f.valuation_infinity() : f.valuation(u.poly());
}

int Divisor::operator[](const Place& u) const {
  auto it = terms_.find(u);
  return it == terms_.end() ? 0 : it->second;
}

Divisor& Divisor::add(const Place& u, int n) {
  if (f_ == nullptr) f_ = &u.field();
  if (&u.field() != f_) throw std::invalid_argument("Divisor: place over a different field");
  int& v = terms_[u];
  v += n;
  if (v == 0) terms_.erase(u);
  return *this;
}

int Divisor::degree() const {
  int s = 0;
  for (const auto& [u, n] : terms_) s += n * u.degree();
  return s;
}

std::string Divisor::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [u, n] : terms_) {
    if (!s.empty()) s += n < 0 ? " - " : " + ";
    else if (n < 0) s += "-";
    int m = n < 0 ? -n : n;
    if (m != 1) s += std::to_string(m);
    s += "[" + u.str() + "]";
  }
  return s;
}

Divisor operator+(Divisor a, const Divisor& b) {
  for (const auto& [u, n] : b.terms_) a.add(u, n);
  return a;
}

Divisor operator-(Divisor a, const Divisor& b) {
  for (const auto& [u, n] : b.terms_) a.add(u, -n);
  return a;
}

Divisor divisor_of(const RationalFn& f) {
  if (f.is_zero()) throw std::domain_error("divisor_of: zero function");
  Divisor D(f.field());
  if (f.num().degree() > 0)
    for (const auto& [pi, m] : factor(f.num())) D.add(Place::finite(pi), m);
  if (f.den().degree() > 0)
    for (const auto& [pi, m] : factor(f.den())) D.add(Place::finite(pi), -m);
  D.add(Place::infinity(f.field()), f.valuation_infinity());
  return D;
}

Divisor canonical_divisor(const Field& f) {
  Divisor D(f);
  D.add(Place::infinity(f), -2);
  return D;
}

std::vector<RationalFn> rr_basis(const Divisor& D) {
  std::vector<RationalFn> out;
  if (!D.has_field()) throw std::invalid_argument("rr_basis: divisor without a field");
  if (D.degree() < 0) return out;
  const Field& f = D.field();
  bool effective = true;
  for (const auto& [u, n] : D.terms()) effective &= n >= 0;
  Poly t = Poly::x(f);
  if (effective) {
    Place inf = Place::infinity(f);
    for (int j = 0; j <= D[inf]; ++j) out.emplace_back(Poly::monomial(f, 1, j));
    for (const auto& [u, n] : D.terms()) {
      if (u.is_infinity()) continue;
      Poly pk = Poly::constant(f, 1);
      for (int k = 1; k <= n; ++k) {
        pk *= u.poly();
        for (int a = 0; a < u.degree(); ++a) out.emplace_back(Poly::monomial(f, 1, a), pk);
      }
    }
    return out;
  }
  Poly A = Poly::constant(f, 1), B = Poly::constant(f, 1);
  for (const auto& [u, n] : D.terms()) {
    if (u.is_infinity()) continue;
    if (n > 0) B *= power(u.poly(), n);
    if (n < 0) A *= power(u.poly(), -n);
  }
  for (int j = 0; j <= D.degree(); ++j) out.emplace_back(Poly::monomial(f, 1, j) * A, B);
  return out;
}

bool in_rr_space(const RationalFn& f, const Divisor& D) {
  if (f.is_zero()) return true;
  Divisor E = divisor_of(f) + D;
  for (const auto& [u, n] : E.terms())
    if (n < 0) return false;
  return true;
}

bool jet_coords(const RationalFn& f, const PlaceData& place, Window w, Elem* out) {
  int d = place.degree();
  std::fill(out, out + d * w.length(), 0);
  if (f.is_zero()) return true;
  const Field& F = f.field();
  if (place.place.is_infinity()) {
    int s = f.valuation_infinity();
    if (s < -w.N) return false;
    int need = w.M - 1 - s;
    if (need < 0) return true;
    Poly rn = f.num().reversed(f.num().degree());
    Poly rd = f.den().reversed(f.den().degree());
    Elem inv0 = F.inv(rd.coeff(0));
    std::vector<Elem> R(static_cast<std::size_t>(need) + 1);
    for (int k = 0; k <= need; ++k) {
      Elem v = rn.coeff(k);
      for (int j = 1; j <= k; ++j) v = F.sub(v, F.mul(rd.coeff(j), R[static_cast<std::size_t>(k - j)]));
      R[static_cast<std::size_t>(k)] = F.mul(v, inv0);
    }
    for (int i = -w.N; i < w.M; ++i) {
      int k = i - s;
      if (k >= 0) out[i + w.N] = R[static_cast<std::size_t>(k)];
    }
    return true;
  }
  const Poly& pi = place.place.poly();
  if (f.valuation(pi) < -w.N) return false;
  if (w.length() == 0) return true;
  Poly mod = power(pi, w.length());
  RationalFn g = f * RationalFn(power(pi, w.N));
  Poly P = (g.num() * inverse_mod(g.den(), mod)) % mod;
  for (int k = 0; k < w.length(); ++k) {
    Poly q, r;
    Poly::divmod(P, pi, q, r);
    for (int j = 0; j < d; ++j) out[k * d + j] = r.coeff(j);
    P = q;
  }
  return true;
}

JetVector jet_at(const RationalFn& f, const PlaceData& place, Window w) {
  JetVector x{place, w, 1, std::vector<Elem>(static_cast<std::size_t>(place.degree() * w.length()))};
  if (!jet_coords(f, place, w, x.coords.data()))
    throw std::domain_error("jet_at: pole of " + f.str() + " at " + place.place.str() + " deeper than the window");
  return x;
}

GlobalTestFunction global_function(const Field& f, std::vector<std::pair<Place, Window>> support, int arity) {
  std::sort(support.begin(), support.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<PlaceWindow> pw;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (i > 0 && support[i - 1].first == support[i].first)
      throw std::invalid_argument("global_function: place " + support[i].first.str() + " repeated");
    pw.push_back(standard_window(support[i].first, support[i].second));
  }
  return GlobalTestFunction(f, pw, arity);
}

GlobalTestFunction integral_indicator(const Field& f, const std::vector<std::pair<Place, Window>>& support,
                                      int arity) {
  GlobalTestFunction phi = global_function(f, support, arity);
  const JetLayout& L = phi.layout();
  for (std::uint64_t i = 0; i < phi.size(); ++i) {
    auto c = L.decode(i);
    bool in = true;
    for (const auto& b : L.blocks())
      for (int k = 0; k < b.window.N * b.d && in; ++k) in = c[static_cast<std::size_t>(b.offset + k)] == 0;
    if (in) phi[i] = CycScalar(f.p(), Rational(1));
  }
  return phi;
}

std::optional<std::uint64_t> global_index(const JetLayout& layout, const std::vector<PlaceWindow>& support,
                                          const std::vector<RationalFn>& x) {
  if (static_cast<int>(x.size()) != layout.arity()) throw std::invalid_argument("global_index: wrong arity");
  std::vector<Elem> c(static_cast<std::size_t>(layout.dims()));
  for (const auto& b : layout.blocks()) {
    const PlaceWindow& pw = support[static_cast<std::size_t>(b.place_index)];
    if (!jet_coords(x[static_cast<std::size_t>(b.coordinate)], pw.place, pw.window, c.data() + b.offset))
      return std::nullopt;
  }
  return layout.encode(c);
}

Window window_at(const GlobalTestFunction& phi, const Place& u) {
  for (const auto& s : phi.support())
    if (s.place.place == u) return s.window;
  return Window{0, 0};
}

RationalPoints rational_points(const Field& f, const std::vector<PlaceWindow>& support, int arity,
                               std::uint64_t cap) {
  Divisor D(f);
  for (const auto& s : support) D.add(s.place.place, s.window.N);
  std::vector<RationalFn> basis = rr_basis(D);
  RationalPoints out;
  out.dimension = static_cast<int>(basis.size());
  std::uint64_t total = 1;
  for (int k = 0; k < arity * out.dimension; ++k) {
    total *= f.size();
    if (total > cap)
      throw std::length_error("delta_K: L(" + D.str() + ")^" + std::to_string(arity) + " exceeds the enumeration cap " +
                              std::to_string(cap));
  }
  JetLayout L(f, support, arity);
  // F_p-generators: (F_p-basis of F_q) x (basis of L(D)) per coordinate
  std::vector<std::vector<Elem>> gens;
  for (int a = 0; a < arity; ++a) {
    for (const auto& b : basis) {
      std::vector<Elem> g(static_cast<std::size_t>(L.dims()));
      for (const auto& blk : L.blocks()) {
        if (blk.coordinate != a) continue;
        const PlaceWindow& pw = support[static_cast<std::size_t>(blk.place_index)];
        if (!jet_coords(b, pw.place, pw.window, g.data() + blk.offset))
          throw std::logic_error("rational_points: basis element outside the support");
      }
      Elem e = 1;
      for (int i = 0; i < f.degree(); ++i, e *= static_cast<Elem>(f.p())) {
        std::vector<Elem> h(g.size());
        for (std::size_t k = 0; k < g.size(); ++k) h[k] = f.mul(e, g[k]);
        gens.push_back(std::move(h));
      }
    }
  }
  std::vector<std::uint64_t> idx;
  idx.reserve(total);
  std::vector<Elem> cur(static_cast<std::size_t>(L.dims()), 0);
  std::vector<int> digit(gens.size(), 0);
  const int p = f.p();
  while (true) {
    idx.push_back(L.encode(cur));
    std::size_t k = gens.size();
    while (k > 0) {
      --k;
      const auto& g = gens[k];
      for (std::size_t j = 0; j < cur.size(); ++j) cur[j] = f.add(cur[j], g[j]);
      if (++digit[k] < p) break;
      digit[k] = 0;
      if (k == 0) {
        k = gens.size() + 1;
        break;
      }
    }
    if (gens.empty() || k == gens.size() + 1) break;
  }
  std::sort(idx.begin(), idx.end());
  for (std::uint64_t i : idx) {
    if (!out.histogram.empty() && out.histogram.back().first == i) {
      ++out.histogram.back().second;
    } else {
      out.histogram.emplace_back(i, 1);
    }
  }
  out.count = idx.size();
  return out;
}

CycScalar delta_K(const GlobalTestFunction& phi, std::uint64_t cap) {
  check_global(phi);
  RationalPoints pts = rational_points(phi.field(), phi.support(), phi.arity(), cap);
  CycScalar s = ValueTraits<CycScalar>::zero(phi.field());
  for (const auto& [i, n] : pts.histogram)
    if (!phi[i].is_zero()) s += phi[i] * Rational(static_cast<std::int64_t>(n));
  return s;
}

GlobalTestFunction normalize_support(const GlobalTestFunction& phi, const std::vector<Place>& extra, Window w) {
  check_global(phi);
  std::vector<std::pair<Place, Window>> support = place_windows(phi);
  for (const auto& u : extra) {
    for (const auto& [v, win] : support)
      if (v == u) throw std::invalid_argument("normalize_support: place " + u.str() + " already in the support");
    support.emplace_back(u, Window{0, 0});
  }
  GlobalTestFunction base = global_function(phi.field(), support, phi.arity());
  base.table() = phi.table();
  if (w.N == 0 && w.M == 0) return base;
  std::vector<Window> target;
  for (const auto& s : base.support()) {
    bool added = std::find(extra.begin(), extra.end(), s.place.place) != extra.end();
    target.push_back(added ? w : s.window);
  }
  return rewindow(base, target);
}

GlobalTestFunction global_fourier(const GlobalTestFunction& phi) { return fourier_multi(fourier_ready(phi)); }

GlobalTestFunction translate(const GlobalTestFunction& phi, const std::vector<RationalFn>& a, bool strict) {
  check_global(phi);
  if (static_cast<int>(a.size()) != phi.arity()) throw std::invalid_argument("translate: one shift per coordinate");
  std::map<Place, Window> need;
  for (const auto& u : pole_places(phi.field(), a)) {
    int N = 0;
    for (const auto& x : a)
      if (!x.is_zero()) N = std::max(N, -valuation_at(x, u));
    need[u] = Window{N, 0};
  }
  GlobalTestFunction src = enlarge(phi, need, strict, "translate");
  const JetLayout& L = src.layout();
  std::vector<Elem> shift(static_cast<std::size_t>(L.dims()));
  for (const auto& b : L.blocks()) {
    const PlaceWindow& pw = src.support()[static_cast<std::size_t>(b.place_index)];
    if (!jet_coords(a[static_cast<std::size_t>(b.coordinate)], pw.place, pw.window, shift.data() + b.offset))
      throw std::logic_error("translate: shift outside the enlarged support");
  }
  const Field& f = src.field();
  GlobalTestFunction out(f, src.support(), src.arity());
  for (std::uint64_t i = 0; i < out.size(); ++i) {
    auto c = L.decode(i);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = f.add(c[k], shift[k]);
    out[i] = src[L.encode(c)];
  }
  return out;
}

GlobalTestFunction multiply_character(const GlobalTestFunction& phi, const std::vector<RationalFn>& a, bool strict) {
  check_global(phi);
  if (static_cast<int>(a.size()) != phi.arity())
    throw std::invalid_argument("multiply_character: one multiplier per coordinate");
  const Field& f = phi.field();
  // r_u(a x) is a function of x mod t^M once M >= nu_u - v_u(a); places
  // where v_u(a) < nu_u must be present.
  std::map<Place, Window> need;
  auto require = [&](const Place& u) {
    int nu = PlaceData::standard(u).nu, M = 0;
    for (const auto& x : a)
      if (!x.is_zero()) M = std::max(M, nu - valuation_at(x, u));
    if (M > 0) need[u] = Window{0, M};
  };
  for (const auto& u : pole_places(f, a)) require(u);
  for (const auto& s : phi.support()) require(s.place.place);
  GlobalTestFunction src = enlarge(phi, need, strict, "multiply_character");
  const JetLayout& L = src.layout();
  std::vector<Elem> lambda(static_cast<std::size_t>(L.dims()));
  for (const auto& b : L.blocks()) {
    const PlaceWindow& pw = src.support()[static_cast<std::size_t>(b.place_index)];
    const RationalFn& ab = a[static_cast<std::size_t>(b.coordinate)];
    for (int k = 0; k < b.dims; ++k) {
      JetVector e{pw.place, pw.window, 1, std::vector<Elem>(static_cast<std::size_t>(b.dims), 0)};
      e.coords[static_cast<std::size_t>(k)] = 1;
      lambda[static_cast<std::size_t>(b.offset + k)] = residue(ab * jet_to_rational(e), pw.place).trace;
    }
  }
  GlobalTestFunction out(f, src.support(), src.arity());
  for (std::uint64_t i = 0; i < out.size(); ++i) {
    if (src[i].is_zero()) continue;
    auto c = L.decode(i);
    Elem s = 0;
    for (std::size_t k = 0; k < c.size(); ++k)
      if (c[k] != 0 && lambda[k] != 0) s = f.add(s, f.mul(c[k], lambda[k]));
    out[i] = src[i].times_zeta(f.trace_to_prime(s));
  }
  return out;
}

GlobalTestFunction scale(const GlobalTestFunction& phi, const RationalFn& a, bool strict) {
  check_global(phi);
  if (a.is_zero()) throw std::invalid_argument("scale: zero multiplier");
  const Field& f = phi.field();
  Divisor div = divisor_of(a);
  std::vector<Place> extra;
  for (const auto& [u, k] : div.terms()) {
    bool present = false;
    for (const auto& s : phi.support()) present |= s.place.place == u;
    if (!present) extra.push_back(u);
  }
  if (strict && !extra.empty()) throw std::domain_error("scale: pole escape at " + extra.front().str());
  GlobalTestFunction src = extra.empty() ? phi : normalize_support(phi, extra);
  std::vector<std::pair<Place, Window>> target;
  for (const auto& s : src.support()) {
    int k = div[s.place.place];
    target.emplace_back(s.place.place, Window{std::max(s.window.N + k, 0), std::max(s.window.M - k, 0)});
  }
  GlobalTestFunction out = global_function(f, target, src.arity());
  const JetLayout& Lo = out.layout();
  const JetLayout& Ls = src.layout();
  // per block: columns of x -> a x into window (Nbig, M) of the source
  struct Map {
    int Nbig;
    int skip;  // leading coordinates that must vanish
    std::vector<std::vector<Elem>> cols;
  };
  std::vector<Map> maps;
  for (const auto& b : Lo.blocks()) {
    const PlaceWindow& pw = out.support()[static_cast<std::size_t>(b.place_index)];
    Window sw = src.support()[static_cast<std::size_t>(b.place_index)].window;
    int k = div[pw.place.place];
    Map m;
    m.Nbig = std::max(sw.N, b.window.N - k);
    m.skip = (m.Nbig - sw.N) * b.d;
    Window big{m.Nbig, sw.M};
    for (int c = 0; c < b.dims; ++c) {
      JetVector e{pw.place, b.window, 1, std::vector<Elem>(static_cast<std::size_t>(b.dims), 0)};
      e.coords[static_cast<std::size_t>(c)] = 1;
      std::vector<Elem> col(static_cast<std::size_t>(b.d * big.length()));
      if (!jet_coords(a * jet_to_rational(e), pw.place, big, col.data()))
        throw std::logic_error("scale: product outside the computed window");
      m.cols.push_back(std::move(col));
    }
    maps.push_back(std::move(m));
  }
  std::vector<Elem> sc(static_cast<std::size_t>(Ls.dims()));
  for (std::uint64_t i = 0; i < out.size(); ++i) {
    auto c = Lo.decode(i);
    bool inside = true;
    for (std::size_t bi = 0; bi < Lo.blocks().size() && inside; ++bi) {
      const Block& b = Lo.blocks()[bi];
      const Block& sb = Ls.blocks()[bi];
      const Map& m = maps[bi];
      std::vector<Elem> prod(m.cols.empty() ? static_cast<std::size_t>(m.skip + sb.dims) : m.cols[0].size(), 0);
      for (int k = 0; k < b.dims; ++k) {
        Elem x = c[static_cast<std::size_t>(b.offset + k)];
        if (x == 0) continue;
        const auto& col = m.cols[static_cast<std::size_t>(k)];
        for (std::size_t j = 0; j < prod.size(); ++j) prod[j] = f.add(prod[j], f.mul(x, col[j]));
      }
      for (int j = 0; j < m.skip && inside; ++j) inside = prod[static_cast<std::size_t>(j)] == 0;
      for (int j = 0; j < sb.dims; ++j) sc[static_cast<std::size_t>(sb.offset + j)] = prod[static_cast<std::size_t>(m.skip + j)];
    }
    if (inside) out[i] = src[Ls.encode(sc)];
  }
  return out;
}

PoissonReport poisson_report(const GlobalTestFunction& phi, bool pointwise, std::uint64_t cap) {
  PoissonReport r;
  check_global(phi);
  RationalPoints pts = rational_points(phi.field(), phi.support(), phi.arity(), cap);
  r.points = pts.count;
  r.lhs = ValueTraits<CycScalar>::zero(phi.field());
  for (const auto& [i, n] : pts.histogram) r.lhs += phi[i] * Rational(static_cast<std::int64_t>(n));
  GlobalTestFunction ready = fourier_ready(phi);
  if (pointwise) {
    FourierPlan plan(ready.field(), ready.support(), ready.arity());
    RationalPoints dual = rational_points(ready.field(), plan.dual_support(), ready.arity(), cap);
    r.dual_points = dual.count;
    r.rhs = ValueTraits<CycScalar>::zero(phi.field());
    for (const auto& [i, n] : dual.histogram) r.rhs += plan.at(ready, i) * Rational(static_cast<std::int64_t>(n));
  } else {
    GlobalTestFunction F = fourier_multi(ready);
    RationalPoints dual = rational_points(F.field(), F.support(), F.arity(), cap);
    r.dual_points = dual.count;
    r.rhs = ValueTraits<CycScalar>::zero(phi.field());
    for (const auto& [i, n] : dual.histogram) r.rhs += F[i] * Rational(static_cast<std::int64_t>(n));
  }
  r.equal = r.lhs == r.rhs;
  return r;
}

SweepResult poisson_sweep(const Field& f, const std::vector<Place>& places, int maxN, int maxM, std::uint64_t cap) {
  std::vector<Place> P = places;
  std::sort(P.begin(), P.end());
  P.erase(std::unique(P.begin(), P.end()), P.end());
  // infinity is always present; when not listed it stays at (0,0)
  std::vector<int> options(P.size(), (maxN + 1) * (maxM + 1));
  if (std::find(P.begin(), P.end(), Place::infinity(f)) == P.end()) {
    P.insert(P.begin(), Place::infinity(f));
    options.insert(options.begin(), 1);
  }
  std::vector<int> choice(P.size(), 0);
  SweepResult res;
  while (true) {
    SweepConfig cfg;
    std::vector<PlaceWindow> coarse, fine, dual;
    for (std::size_t u = 0; u < P.size(); ++u) {
      Window w{choice[u] / (maxM + 1), choice[u] % (maxM + 1)};
      cfg.support.emplace_back(P[u], w);
      PlaceData pd = PlaceData::standard(P[u]);
      coarse.push_back({pd, w});
      Window wf{w.N, std::max(w.M, pd.nu)};
      fine.push_back({pd, wf});
      dual.push_back({pd, dual_window(pd, wf)});
    }
    {
      JetLayout Lc(f, coarse, 1), Lf(f, fine, 1);
      RationalPoints Y0 = rational_points(f, coarse, 1, cap);
      RationalPoints Y1 = rational_points(f, dual, 1, cap);
      TestFunction h(f, dual, 1);
      for (const auto& [i, n] : Y1.histogram) h[i] = CycScalar(f.p(), Rational(static_cast<std::int64_t>(n)));
      FourierPlan back(f, dual, 1), forward(f, fine, 1);
      // G(y) = norm_F sum_{x in Y_0'} psi(r(xy)); the back transform carries norm_back
      TestFunction G = back.apply(h);
      Rational ratio = forward.norm() / back.norm();
      auto map = window_map(Lc, Lf);
      std::vector<CycScalar> rhs(Lc.size(), ValueTraits<CycScalar>::zero(f));
      for (std::uint64_t y = 0; y < Lf.size(); ++y) rhs[static_cast<std::uint64_t>(map[y])] += G[y];
      std::vector<std::uint64_t> lhs(Lc.size(), 0);
      for (const auto& [i, n] : Y0.histogram) lhs[i] = n;
      for (std::uint64_t c = 0; c < Lc.size(); ++c) {
        ++cfg.functions;
        if (lhs[c] == 0) {
          ++cfg.case2;
        } else {
          ++cfg.case1;
        }
        if (!(rhs[c] * ratio == CycScalar(f.p(), Rational(static_cast<std::int64_t>(lhs[c]))))) ++cfg.failures;
      }
      res.functions += cfg.functions;
      res.case1 += cfg.case1;
      res.case2 += cfg.case2;
      res.failures += cfg.failures;
      res.configs.push_back(std::move(cfg));
    }
    std::size_t k = P.size();
    while (k > 0) {
      --k;
      if (++choice[k] < options[k]) break;
      choice[k] = 0;
      if (k == 0) return res;
    }
  }
}

Case1Report case1_report(const Divisor& D) {
  const Field& f = D.field();
  Case1Report r;
  r.D = D;
  r.scalar = Rational::power(static_cast<std::int64_t>(f.size()), D.degree() + 1);
  std::vector<std::pair<Place, Window>> support;
  Place inf = Place::infinity(f);
  bool has_inf = false;
  for (const auto& [u, n] : D.terms()) {
    support.emplace_back(u, Window{std::max(n, 0), std::max(-n, 0)});
    has_inf |= u.is_infinity();
  }
  if (!has_inf) support.emplace_back(inf, Window{0, 0});
  GlobalTestFunction phi = global_function(f, support, 1);
  const JetLayout& L = phi.layout();
  // 1 on t^{-n} O: digits below -n vanish
  for (std::uint64_t i = 0; i < phi.size(); ++i) {
    auto c = L.decode(i);
    bool in = true;
    for (const auto& b : L.blocks()) {
      int n = D[phi.support()[static_cast<std::size_t>(b.place_index)].place.place];
      for (int dig = -b.window.N; dig < std::min(-n, b.window.M) && in; ++dig)
        for (int j = 0; j < b.d && in; ++j) in = c[static_cast<std::size_t>(b.offset + (dig + b.window.N) * b.d + j)] == 0;
    }
    if (in) phi[i] = CycScalar(f.p(), Rational(1));
  }
  GlobalTestFunction F = global_fourier(phi);
  Divisor Dp = canonical_divisor(f) - D;
  const JetLayout& LF = F.layout();
  r.transform_matches = true;
  for (std::uint64_t i = 0; i < F.size() && r.transform_matches; ++i) {
    auto c = LF.decode(i);
    bool in = true;
    for (const auto& b : LF.blocks()) {
      int n = Dp[F.support()[static_cast<std::size_t>(b.place_index)].place.place];
      for (int dig = -b.window.N; dig < std::min(-n, b.window.M) && in; ++dig)
        for (int j = 0; j < b.d && in; ++j) in = c[static_cast<std::size_t>(b.offset + (dig + b.window.N) * b.d + j)] == 0;
    }
    CycScalar expect = in ? CycScalar(f.p(), r.scalar) : ValueTraits<CycScalar>::zero(f);
    r.transform_matches = F[i] == expect;
  }
  r.lhs = delta_K(phi);
  r.rhs = delta_K(F);
  r.equal = r.lhs == r.rhs;
  return r;
}

GlobalTestFunction case2_fixture(const Field& f) {
  const Poly& pi = monic_irreducibles(f, 2).at(0);
  GlobalTestFunction phi = global_function(f, {{Place::finite(pi), Window{0, 1}}}, 1);
  auto idx = global_index(phi.layout(), phi.support(), {RationalFn(Poly::x(f))});
  phi[*idx] = CycScalar(f.p(), Rational(1));
  return phi;
}

}  // namespace fqm
