#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fqm/local.hpp"

namespace fqm {

/// D_{g,t} = L[s] / (s a = g(a) s, s^n = t) over K = F_q(t), with
/// L = F_{q^n} and g = Frob_q^a.
class CyclicAlgebra {
 public:
  /// n prime, a not divisible by n. Throws std::invalid_argument otherwise.
  CyclicAlgebra(const Field& base, int n, int a);

  const Field& base() const { return ext_->base(); }
  const Field& L() const { return ext_->top(); }
  const Extension& ext() const { return *ext_; }
  int n() const { return n_; }
  int a() const { return a_; }
  std::uint32_t q() const { return ext_->q(); }

  /// g^k(x) for x in L; k may be negative.
  Elem g(Elem x, int k = 1) const;
  /// d_j = theta^j, theta the least element of L not in F_q.
  const std::vector<Elem>& basis() const { return basis_; }
  /// F_q-coordinates of x in L with respect to the basis.
  const Elem* coords(Elem x) const { return &coords_[static_cast<std::size_t>(x) * static_cast<std::size_t>(n_)]; }
  Elem from_coords(const Elem* c) const;
  std::string str() const;

 private:
  const Extension* ext_;
  int n_;
  int a_;
  std::vector<Elem> basis_;
  std::vector<Elem> coords_;
};

/// The registered algebra for (F_q, n, a mod n).
const CyclicAlgebra& cyclic_algebra(const Field& base, int n, int a);

/// sum_{i,j} x_ij d_j s^i with x_ij in F_q(t).
class AlgebraElement {
 public:
  explicit AlgebraElement(const CyclicAlgebra& A);

  static AlgebraElement scalar(const CyclicAlgebra& A, const RationalFn& c);
  static AlgebraElement one(const CyclicAlgebra& A);
  static AlgebraElement s(const CyclicAlgebra& A);
  /// c d_j s^i.
  static AlgebraElement term(const CyclicAlgebra& A, int i, int j, const RationalFn& c);
  /// u s^i with u in L(t), i.e. u a rational function over L.
  static AlgebraElement from_L(const CyclicAlgebra& A, const RationalFn& u, int i = 0);
  /// sum_i u_i s^i.
  static AlgebraElement from_u(const CyclicAlgebra& A, const std::vector<RationalFn>& u);

  const CyclicAlgebra& algebra() const { return *A_; }
  const RationalFn& operator()(int i, int j) const { return x_[idx(i, j)]; }
  void set(int i, int j, const RationalFn& c);
  /// u_i = sum_j x_ij d_j in L(t).
  RationalFn u(int i) const;
  bool is_zero() const;
  std::string str() const;

  AlgebraElement operator-() const;
  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
  /// Central scalar.
  friend AlgebraElement operator*(const RationalFn& c, const AlgebraElement& x);
  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b);

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i * A_->n() + j); }
  void check(const AlgebraElement& o) const;

  const CyclicAlgebra* A_;
  std::vector<RationalFn> x_;
};

AlgebraElement alg_mul(const AlgebraElement& x, const AlgebraElement& y);

/// Row-major n x n matrix over L(t).
using LMatrix = std::vector<RationalFn>;

/// L acts by diag(u, g(u), ..., g^{n-1}(u)); s by the cyclic shift with
/// the corner entry t.
LMatrix splitting_matrix(const AlgebraElement& x);
LMatrix matmul(const LMatrix& a, const LMatrix& b, int n);
RationalFn determinant(const LMatrix& m, int n);

/// Characteristic polynomial of an n x n matrix over a commutative ring,
/// coefficients from X^n down to X^0 (division free).
template <class R>
std::vector<R> berkowitz(const std::vector<R>& A, int n, const R& zero, const R& one) {
  auto at = [&](int i, int j) -> const R& { return A[static_cast<std::size_t>(i * n + j)]; };
  std::vector<R> poly{one};
  for (int r = 0; r < n; ++r) {
    std::vector<R> T{one, zero - at(r, r)};
    std::vector<R> v(static_cast<std::size_t>(r), zero);
    for (int i = 0; i < r; ++i) v[static_cast<std::size_t>(i)] = at(i, r);
    for (int k = 0; k < r; ++k) {
      R dot = zero;
      for (int i = 0; i < r; ++i) dot = dot + at(r, i) * v[static_cast<std::size_t>(i)];
      T.push_back(zero - dot);
      std::vector<R> w(static_cast<std::size_t>(r), zero);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) w[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] + at(i, j) * v[static_cast<std::size_t>(j)];
      v = std::move(w);
    }
    std::vector<R> next(static_cast<std::size_t>(r) + 2, zero);
    for (int k = 0; k <= r + 1; ++k)
      for (int j = 0; j <= std::min(k, r); ++j)
        next[static_cast<std::size_t>(k)] = next[static_cast<std::size_t>(k)] + T[static_cast<std::size_t>(k - j)] * poly[static_cast<std::size_t>(j)];
    poly = std::move(next);
  }
  return poly;
}

/// Reduced characteristic polynomial over F_q(t): coefficients of X^0..X^n.
/// Throws std::logic_error if a coefficient fails to descend from L(t).
std::vector<RationalFn> reduced_char_poly(const AlgebraElement& x);
RationalFn reduced_trace(const AlgebraElement& x);
RationalFn reduced_norm(const AlgebraElement& x);
std::string poly_str(const std::vector<RationalFn>& coeffs);
/// Distinct roots over an algebraic closure.
bool is_regular_semisimple(const AlgebraElement& x);

/// All x_ij in O_v; v a finite place other than t.
bool integral_test(const AlgebraElement& x, const Place& v);
/// All x_ij in O at the place t.
bool s0_test(const AlgebraElement& x);

/// Slots [lo, hi) of the s-adic expansion sum_k c_k s^k, c_k in L.
struct SlotWindow {
  int lo = 0;
  int hi = 0;
  int length() const { return hi - lo; }
  friend bool operator==(const SlotWindow&, const SlotWindow&) = default;
};
/// S_0 / t^M S_0.
inline SlotWindow integral_window(const CyclicAlgebra& A, int M) { return {0, A.n() * M}; }

/// An element of s^lo O_D / s^hi O_D at the place t. Slot k carries the
/// L-coefficient of s^k, so t^m u s^i sits in slot nm + i.
class AlgebraJet {
 public:
  AlgebraJet(const CyclicAlgebra& A, SlotWindow w);
  static AlgebraJet from_index(const CyclicAlgebra& A, SlotWindow w, std::uint64_t idx);

  const CyclicAlgebra& algebra() const { return *A_; }
  SlotWindow window() const { return w_; }
  Elem operator[](int k) const { return c_[static_cast<std::size_t>(k - w_.lo)]; }
  void set(int k, Elem c) { c_[static_cast<std::size_t>(k - w_.lo)] = c; }
  bool is_zero() const;
  /// Coordinates slot by slot, n per slot, base q with the first most
  /// significant.
  std::uint64_t index() const;
  /// Restriction to a window inside this one, or widening below by zeros.
  AlgebraJet truncate(SlotWindow w) const;
  std::string str() const;

  AlgebraJet operator-() const;
  friend AlgebraJet operator+(const AlgebraJet& a, const AlgebraJet& b);
  friend AlgebraJet operator-(const AlgebraJet& a, const AlgebraJet& b) { return a + (-b); }
  /// Window [a.lo + b.lo, min(a.hi + b.lo, a.lo + b.hi)).
  friend AlgebraJet operator*(const AlgebraJet& a, const AlgebraJet& b);
  friend bool operator==(const AlgebraJet& a, const AlgebraJet& b);

 private:
  const CyclicAlgebra* A_;
  SlotWindow w_;
  std::vector<Elem> c_;
};

/// Jet of x, or nullopt when x has a slot below w.lo.
std::optional<AlgebraJet> try_jet(const AlgebraElement& x, SlotWindow w);
/// As try_jet; throws std::domain_error.
AlgebraJet algebra_jet(const AlgebraElement& x, SlotWindow w);

/// w(sum u_i s^i) = min_i (n v_t(u_i) + i); nullopt for zero.
std::optional<int> w_valuation(const AlgebraElement& x);
/// Least nonzero slot; nullopt when every slot in the window vanishes.
std::optional<int> w_valuation(const AlgebraJet& x);

/// Reduction mod t: the jet on slots [0, n). Requires s0_test.
AlgebraJet residue_algebra_class(const AlgebraElement& x);
/// Window starts at 0 and slot 0 is nonzero.
bool is_unit(const AlgebraJet& u);
/// Inverse of a unit on the same window.
AlgebraJet inverse(const AlgebraJet& u);
/// u x u^{-1}; u a unit jet with at least x's window length.
AlgebraJet conjugate(const AlgebraJet& x, const AlgebraJet& u);
AlgebraJet random_jet(const CyclicAlgebra& A, SlotWindow w, std::mt19937_64& rng);
/// Uniform unit of S_0 / s^length S_0.
AlgebraJet random_unit(const CyclicAlgebra& A, int length, std::mt19937_64& rng);

/// Reduced characteristic polynomial of x in S_0 mod t^depth: entry k holds
/// the depth t-adic digits of the coefficient of X^k (k < n).
std::vector<std::vector<Elem>> jet_char_poly(const AlgebraJet& x, int depth);

/// Number of sampled (x, y) with w(xy) != w(x) + w(y); jets uniform on
/// S_0 / t^depth S_0 minus zero.
std::uint64_t w_additivity_violations(const CyclicAlgebra& A, int depth, int samples, std::uint64_t seed);

/// A function on the jets of D at the place t.
struct AlgebraTestFunction {
  const CyclicAlgebra* A = nullptr;
  SlotWindow window;
  std::vector<CycScalar> table;

  AlgebraTestFunction() = default;
  AlgebraTestFunction(const CyclicAlgebra& alg, SlotWindow w);
  std::uint64_t size() const { return table.size(); }
  /// phi(x): zero below the window; x must reach w.hi.
  CycScalar at(const AlgebraJet& x) const;
  CycScalar at(const AlgebraElement& x) const;
};

AlgebraTestFunction reflect(const AlgebraTestFunction& phi);
/// Number of sampled (index, unit) with phi(u x u^{-1}) != phi(x).
std::uint64_t invariance_defects(const AlgebraTestFunction& phi, int samples, std::uint64_t seed);

/// Conjugation-invariant functions on S_0 / t^M S_0 that factor through the
/// reduced characteristic polynomial mod t^depth.
struct InvariantRecipe {
  enum class Kind { Constant, TraceCharacter, CharPolyCoset };
  Kind kind = Kind::Constant;
  int depth = 0;
  /// CharPolyCoset: digits of the coefficients of X^0..X^{n-1}.
  std::vector<std::vector<Elem>> target;

  /// 1 on S_0.
  static InvariantRecipe constant();
  /// psi of the sum of the t-adic digits of Trd(x) mod t^depth.
  static InvariantRecipe trace_character(int depth);
  /// Indicator of {x : char poly of x = that of c mod t^depth}.
  static InvariantRecipe charpoly_coset(const AlgebraElement& c, int depth);
  std::string name() const;
};

/// Throws std::invalid_argument when the recipe reads past depth M.
AlgebraTestFunction invariant_fn(const CyclicAlgebra& A, const InvariantRecipe& r, int M);

enum class Pairing { Trace, DotProduct };

/// Dual window under psi(r_0(B(x, y))): for Trace, [1-n-hi, 1-n-lo); for
/// DotProduct (windows aligned to n), [-hi, -lo).
SlotWindow dual_slot_window(const CyclicAlgebra& A, SlotWindow w, Pairing pairing = Pairing::Trace);
/// log_q [S_0^perp : S_0].
int nu_D(const CyclicAlgebra& A, Pairing pairing = Pairing::Trace);
/// r_0 B(x, y) in F_q for jets whose product reaches slot -n.
Elem algebra_pairing(const AlgebraJet& x, const AlgebraJet& y, Pairing pairing = Pairing::Trace);
/// Gram matrix [k * D + l]: k-th coordinate of the dual window, l-th of w.
std::vector<Elem> algebra_gram(const CyclicAlgebra& A, SlotWindow w, Pairing pairing = Pairing::Trace);

/// q^{-n hi - nu_D/2} sum_y phi(y) psi(r_0 B(x, y)) on the dual window.
AlgebraTestFunction fourier_D(const AlgebraTestFunction& phi, Pairing pairing = Pairing::Trace);
/// Direct sum at a single point of the dual window.
CycScalar fourier_D_at(const AlgebraTestFunction& phi, const AlgebraJet& x, Pairing pairing = Pairing::Trace);

struct MatchedPair {
  AlgebraElement c;
  AlgebraElement cdot;
  std::string provenance;  ///< "bs-form" or "L-common"
};
/// (b s, b s-dot).
MatchedPair matched_pair(const CyclicAlgebra& D, const CyclicAlgebra& Ddot, Elem b);
/// c in L(t) in both algebras.
MatchedPair matched_pair_L(const CyclicAlgebra& D, const CyclicAlgebra& Ddot, const RationalFn& c);
/// (t^{-k} c + z, t^{-k} c-dot + z) with z central.
MatchedPair central_move(const MatchedPair& m, int k, const RationalFn& z);
/// b s for b in L^*, the L-elements outside F_q and d_1 (t + 1), each under
/// a fixed list of central moves reaching S_0, S_0^perp + t^{-2} + t^{-1}
/// and the deeper slots of the dual window.
std::vector<MatchedPair> theorem_a_pairs(const CyclicAlgebra& D, const CyclicAlgebra& Ddot);
/// Constant, trace character mod t^depth and char-poly cosets of s, 1 + s,
/// d_1, d_1 + s mod t^depth.
std::vector<InvariantRecipe> theorem_a_recipes(const CyclicAlgebra& D, int depth = 2);

struct TheoremARow {
  int pair_id = 0;
  std::string provenance;
  std::string charpoly;
  bool regular = false;
  CycScalar value_D;
  CycScalar value_Ddot;
  bool equal = false;
};
struct TheoremAReport {
  std::string recipe;
  int M = 0;
  std::vector<TheoremARow> rows;
  std::size_t compared = 0;  ///< regular rows
  bool ok() const;
};
/// F_D phi(c) against F_Ddot phi-dot(c-dot), phi and phi-dot built from the
/// same recipe on S_0 / t^M S_0. Non-regular pairs are reported and skipped.
TheoremAReport theorem_a_report(const CyclicAlgebra& D, const CyclicAlgebra& Ddot, const InvariantRecipe& recipe,
                                const std::vector<MatchedPair>& pairs, int M, Pairing pairing = Pairing::Trace);

}  // namespace fqm
