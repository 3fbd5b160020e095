#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fqm/cyc.hpp"
#include "fqm/motivic.hpp"
#include "fqm/poly.hpp"

namespace fqm {

/// A closed point of P^1 over F_q: a monic irreducible polynomial, or infinity.
class Place {
 public:
  Place() = default;
  /// Throws std::invalid_argument unless pi is monic irreducible.
  static Place finite(const Poly& pi);
  static Place infinity(const Field& f);

  bool is_infinity() const { return inf_; }
  const Poly& poly() const { return pi_; }
  const Field& field() const { return *f_; }
  int degree() const { return inf_ ? 1 : pi_.degree(); }
  /// "inf" or the polynomial, e.g. "t^2+t+1".
  std::string str() const;

  /// Infinity first, then by degree, then by monic_from_index order.
  friend bool operator<(const Place& a, const Place& b);
  friend bool operator==(const Place& a, const Place& b) {
    return a.f_ == b.f_ && a.inf_ == b.inf_ && a.pi_ == b.pi_;
  }

 private:
  const Field* f_ = nullptr;
  bool inf_ = false;
  Poly pi_;
};

/// A place together with nu, the exponent with O^perp = pi^nu O for the
/// local differential form: pi^{-nu} dt at a finite place, t^{nu-2} dt at
/// infinity. standard() is omega = dt (nu = 0 finite, nu = 2 at infinity).
struct PlaceData {
  Place place;
  int nu = 0;
  static PlaceData standard(const Place& p) { return {p, p.is_infinity() ? 2 : 0}; }
  int degree() const { return place.degree(); }
  friend bool operator==(const PlaceData& a, const PlaceData& b) { return a.place == b.place && a.nu == b.nu; }
};

/// Jet window t^{-N} O / t^M O.
struct Window {
  int N = 0;
  int M = 0;
  int length() const { return N + M; }
  friend bool operator==(const Window& a, const Window& b) { return a.N == b.N && a.M == b.M; }
};

/// An element of (t^{-N}O / t^M O)^m at one place. Coordinates are F_q
/// elements ordered by arity coordinate, then digit i = -N..M-1, then the
/// coefficient of t^j (j < d) of the digit polynomial; at a finite place
/// x = sum_i c_i(t) pi^i with deg c_i < d, at infinity x = sum_i c_i t^{-i}.
struct JetVector {
  PlaceData place;
  Window window;
  int arity = 1;
  std::vector<Elem> coords;

  /// Digit i of arity coordinate a as a polynomial of degree < d.
  Poly digit(int a, int i) const;
  JetVector operator-() const;
  friend JetVector operator+(const JetVector& x, const JetVector& y);
  friend bool operator==(const JetVector& x, const JetVector& y) {
    return x.place == y.place && x.window == y.window && x.arity == y.arity && x.coords == y.coords;
  }
};

JetVector alpha_encode(const PlaceData& place, Window w, int arity, const std::vector<Elem>& coeffs);
std::vector<Elem> alpha_decode(const JetVector& x);

/// A rational function whose jet is x (arity 1): P / pi^N, or a polynomial
/// in 1/t at infinity.
RationalFn jet_to_rational(const JetVector& x);

/// Residue of f * (local form) at the place. For a finite place of degree d
/// the residue field F_q[t]/pi is identified with F_{q^d} = extension(F_q, d)
/// by t -> the least-index root of pi.
struct Residue {
  const Field* field = nullptr;  ///< the residue field F_{q^d}
  Elem value = 0;
  Elem trace = 0;  ///< r(f): trace of value to F_q
};
Residue residue(const RationalFn& f, const PlaceData& place);
/// r(x) read off the jet digits; throws std::domain_error when M < nu.
Elem residue_trace(const JetVector& x);
/// r(xy) in F_q from the jet digits; throws when the windows do not
/// determine it.
Elem pairing(const JetVector& x, const JetVector& y);

struct PlaceWindow {
  PlaceData place;
  Window window;
};

/// Shape of one factor of a jet table: one arity coordinate at one place.
struct Block {
  int place_index = 0;
  int coordinate = 0;
  int d = 1;
  Window window;
  int dims = 0;    ///< d (N + M)
  int offset = 0;  ///< number of base-q digits before this block
};

/// Index arithmetic for a dense table over prod_u (jet window at u)^m.
/// The index is the base-q number whose digits are all coordinates in
/// order (place, arity coordinate, jet digit, coefficient), first most
/// significant.
class JetLayout {
 public:
  JetLayout() = default;
  JetLayout(const Field& f, const std::vector<PlaceWindow>& support, int arity);

  const Field& field() const { return *f_; }
  int arity() const { return arity_; }
  int dims() const { return dims_; }
  std::uint64_t size() const { return size_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const Block& block(int place_index, int coordinate) const {
    return blocks_[static_cast<std::size_t>(place_index * arity_ + coordinate)];
  }
  /// q^{number of digits after block b}.
  std::uint64_t stride(const Block& b) const;
  std::uint64_t block_size(const Block& b) const;

  std::vector<Elem> decode(std::uint64_t idx) const;
  std::uint64_t encode(const std::vector<Elem>& coords) const;
  /// Local index of a block's coordinates inside a full index.
  std::uint64_t local_index(std::uint64_t idx, const Block& b) const { return idx / stride(b) % block_size(b); }

 private:
  const Field* f_ = nullptr;
  int arity_ = 1;
  int dims_ = 0;
  std::uint64_t size_ = 1;
  std::vector<Block> blocks_;
  std::vector<std::uint64_t> pow_;
};

/// Index of a one-place, one-coordinate jet inside its own window.
std::uint64_t local_jet_index(const JetVector& x);
JetVector local_jet_from_index(const PlaceData& place, Window w, std::uint64_t idx);

template <class V>
struct ValueTraits;

template <>
struct ValueTraits<CycScalar> {
  static CycScalar zero(const Field& f) { return CycScalar(f.p(), Rational(0)); }
  static bool is_zero(const CycScalar& v) { return v.is_zero(); }
};

template <>
struct ValueTraits<MotivicClass> {
  static MotivicClass zero(const Field& f) { return MotivicClass(f); }
  static bool is_zero(const MotivicClass& v) { return v.is_empty(); }
};

/// Dense table of values on prod_{u in S} (t^{-N_u}O / t^{M_u}O)^m: a test
/// function supported in the product of the t^{-N_u}O^m and invariant under
/// the t^{M_u}O^m. With one place this is a local test function; with the
/// support set of a global test function it is (S, phi_S).
template <class V>
class BasicTestFunction {
 public:
  BasicTestFunction() = default;
  BasicTestFunction(const Field& f, std::vector<PlaceWindow> support, int arity)
      : support_(std::move(support)), layout_(f, support_, arity), table_(layout_.size(), ValueTraits<V>::zero(f)) {}
  BasicTestFunction(const Field& f, std::vector<PlaceWindow> support, int arity, std::vector<V> table)
      : support_(std::move(support)), layout_(f, support_, arity), table_(std::move(table)) {
    if (table_.size() != layout_.size()) throw std::invalid_argument("test function: table size does not match windows");
  }

  const Field& field() const { return layout_.field(); }
  int arity() const { return layout_.arity(); }
  const std::vector<PlaceWindow>& support() const { return support_; }
  const JetLayout& layout() const { return layout_; }
  std::uint64_t size() const { return layout_.size(); }
  const std::vector<V>& table() const { return table_; }
  std::vector<V>& table() { return table_; }
  const V& operator[](std::uint64_t i) const { return table_[i]; }
  V& operator[](std::uint64_t i) { return table_[i]; }

 private:
  std::vector<PlaceWindow> support_;
  JetLayout layout_;
  std::vector<V> table_;
};

using TestFunction = BasicTestFunction<CycScalar>;
using LocalTestFunction = TestFunction;
using SymbolicTestFunction = BasicTestFunction<MotivicClass>;

/// A test function on one place with arity m.
inline TestFunction local_function(const PlaceData& place, Window w, int arity = 1) {
  return TestFunction(place.place.field(), {{place, w}}, arity);
}

/// For each index of the target layout, the source index with the same jet
/// or -1 when the target jet lies outside the source support. Target
/// windows must dominate the source windows place by place.
std::vector<std::int64_t> window_map(const JetLayout& source, const JetLayout& target);

/// Move every place to a larger window (N' >= N, M' >= M): zero outside
/// the old support, constant on the new finer cosets.
template <class V>
BasicTestFunction<V> rewindow(const BasicTestFunction<V>& phi, const std::vector<Window>& target) {
  if (target.size() != phi.support().size()) throw std::invalid_argument("rewindow: wrong number of windows");
  std::vector<PlaceWindow> support = phi.support();
  for (std::size_t u = 0; u < support.size(); ++u) {
    if (target[u].N < support[u].window.N || target[u].M < support[u].window.M)
      throw std::invalid_argument("rewindow: window shrink requested");
    support[u].window = target[u];
  }
  BasicTestFunction<V> out(phi.field(), support, phi.arity());
  auto map = window_map(phi.layout(), out.layout());
  for (std::uint64_t i = 0; i < out.size(); ++i)
    if (map[i] >= 0) out[i] = phi[static_cast<std::uint64_t>(map[i])];
  return out;
}

/// Extension by zero to pole depth N' at place u.
template <class V>
BasicTestFunction<V> extend_zero(const BasicTestFunction<V>& phi, int N, std::size_t u = 0) {
  std::vector<Window> w;
  for (const auto& s : phi.support()) w.push_back(s.window);
  if (N < w.at(u).N) throw std::invalid_argument("extend_zero: window shrink requested");
  w[u].N = N;
  return rewindow(phi, w);
}

/// Pull back to the finer level M' at place u.
template <class V>
BasicTestFunction<V> refine(const BasicTestFunction<V>& phi, int M, std::size_t u = 0) {
  std::vector<Window> w;
  for (const auto& s : phi.support()) w.push_back(s.window);
  if (M < w.at(u).M) throw std::invalid_argument("refine: window shrink requested");
  w[u].M = M;
  return rewindow(phi, w);
}

/// Inverse of rewindow: returns phi on smaller windows, throwing
/// std::domain_error when phi is not supported in, or not invariant at,
/// the smaller windows.
TestFunction restrict_window(const TestFunction& phi, const std::vector<Window>& target);

/// prod_u q^{-d_u M_u m} * sum of the table.
CycScalar integrate(const TestFunction& phi);
/// Symbolic version: the class sum with L^{-sum d_u M_u m}.
MotivicClass integrate(const SymbolicTestFunction& phi);
/// Specialize every entry over F_{q^d}.
TestFunction specialize(const SymbolicTestFunction& phi, int d);

/// Dual window (M - nu, N + nu); throws std::domain_error when M < nu.
Window dual_window(const PlaceData& place, Window w);

/// Precomputed data for the Fourier transform of functions on one layout:
/// the dual layout, per-block pairing tables and the normalization.
class FourierPlan {
 public:
  FourierPlan(const Field& f, const std::vector<PlaceWindow>& support, int arity);

  const std::vector<PlaceWindow>& dual_support() const { return dual_; }
  const JetLayout& input() const { return in_; }
  const JetLayout& output() const { return out_; }
  /// prod q^{d (nu/2 - M)} over all blocks.
  const Rational& norm() const { return norm_; }

  TestFunction apply(const TestFunction& phi) const;
  CycScalar at(const TestFunction& phi, std::uint64_t x) const;
  /// Tr_{F_q/F_p} of sum_u r_u(x_u y_u), x an output index, y an input index.
  int phase(std::uint64_t x, std::uint64_t y) const;

 private:
  std::vector<PlaceWindow> support_;
  std::vector<PlaceWindow> dual_;
  JetLayout in_;
  JetLayout out_;
  Rational norm_;
  std::vector<std::vector<Elem>> gram_;  // per place
  mutable std::vector<std::shared_ptr<const std::vector<std::uint8_t>>> tables_;  // per place, on demand
};

/// Fourier transform in every coordinate at every place with the pairing
/// psi(sum_u r_u(x_u y_u)) and normalization prod_u q^{-d_u M_u} q^{d_u nu_u / 2}
/// per coordinate. The output lives on the dual windows. Computed one block
/// at a time. Throws on odd nu or M < nu.
TestFunction fourier_multi(const TestFunction& phi);
/// One place, arity 1.
TestFunction fourier1(const TestFunction& phi);
/// The transform at a single point x of the dual layout (given by index),
/// summing only over the nonzero entries of phi.
CycScalar fourier_at(const TestFunction& phi, std::uint64_t x);

/// Tr_{F_q/F_p} r(x y) for all pairs of one-coordinate jets, x in the dual
/// window and y in w: entry [x * |w| + y].
std::vector<std::uint8_t> pairing_table(const PlaceData& place, Window w);
/// Gram matrix of r(xy) in jet coordinates: entry [k * D + l] for the
/// k-th coordinate of the dual window and the l-th of w.
std::vector<Elem> gram_matrix(const PlaceData& place, Window w);
/// Shared, memoized pairing_table.
std::shared_ptr<const std::vector<std::uint8_t>> cached_pairing_table(const PlaceData& place, Window w);

/// scale * sum_y in[y] psi(sum_kl x_k B_kl y_l) for a table over F_q^D
/// indexed base q, first coordinate most significant.
std::vector<CycScalar> gram_fourier(const Field& f, const std::vector<Elem>& B, int D,
                                    const std::vector<CycScalar>& in, const Rational& scale);

/// phi(-x).
TestFunction reflect(const TestFunction& phi);

}  // namespace fqm
