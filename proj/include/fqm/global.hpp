#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fqm/local.hpp"

namespace fqm {

inline constexpr std::uint64_t kDefaultEnumCap = 1ull << 20;

/// Infinity, then the monic irreducibles of degree 1..B.
std::vector<Place> places_up_to(const Field& f, int B);

/// v_u(f) for f != 0.
int valuation_at(const RationalFn& f, const Place& u);

class Divisor {
 public:
  Divisor() = default;
  explicit Divisor(const Field& f) : f_(&f) {}

  bool has_field() const { return f_ != nullptr; }
  const Field& field() const { return *f_; }
  int operator[](const Place& u) const;
  Divisor& add(const Place& u, int n);
  /// sum_u n_u deg u
  int degree() const;
  const std::map<Place, int>& terms() const { return terms_; }
  std::string str() const;

  friend Divisor operator+(Divisor a, const Divisor& b);
  friend Divisor operator-(Divisor a, const Divisor& b);
  friend bool operator==(const Divisor& a, const Divisor& b) { return a.terms_ == b.terms_; }

 private:
  const Field* f_ = nullptr;
  std::map<Place, int> terms_;
};

Divisor divisor_of(const RationalFn& f);
/// div(dt) = -2 [inf].
Divisor canonical_divisor(const Field& f);

/// F_q-basis of L(D) = {f : v_u(f) >= -D(u) for all u}. When D >= 0 the
/// basis is 1..t^{D(inf)} followed by t^a / pi_u^k (k <= D(u), a < deg u);
/// otherwise t^j A / B with D = div(B)-div(A) on the finite part.
std::vector<RationalFn> rr_basis(const Divisor& D);
bool in_rr_space(const RationalFn& f, const Divisor& D);

/// Jet of f at the place in the window; throws std::domain_error when f
/// has a pole deeper than N.
JetVector jet_at(const RationalFn& f, const PlaceData& place, Window w);
/// As jet_at, writing the d(N+M) coordinates to out; false on a deep pole.
bool jet_coords(const RationalFn& f, const PlaceData& place, Window w, Elem* out);

/// A global test function (S, phi_S) with omega = dt: a TestFunction whose
/// support lists distinct places in Place order with the standard nu.
using GlobalTestFunction = TestFunction;

GlobalTestFunction global_function(const Field& f, std::vector<std::pair<Place, Window>> support, int arity = 1);
/// Indicator of the product of the t^{-N_u} O_u^m on the given windows.
GlobalTestFunction integral_indicator(const Field& f, const std::vector<std::pair<Place, Window>>& support,
                                      int arity = 1);
/// Table index of the jets of x (one rational function per coordinate), or
/// nullopt when some jet leaves the support.
std::optional<std::uint64_t> global_index(const JetLayout& layout, const std::vector<PlaceWindow>& support,
                                          const std::vector<RationalFn>& x);
/// Window of phi at u, or (0,0) when u is not in the support.
Window window_at(const GlobalTestFunction& phi, const Place& u);

/// Y_0 = L(sum_u N_u [u])^m pushed into the jet table: sorted (index,
/// multiplicity) pairs. Throws std::length_error beyond the cap.
struct RationalPoints {
  int dimension = 0;  ///< dim L(D), per coordinate
  std::uint64_t count = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> histogram;
};
RationalPoints rational_points(const Field& f, const std::vector<PlaceWindow>& support, int arity,
                               std::uint64_t cap = kDefaultEnumCap);

/// sum_{y in K^m} phi(y).
CycScalar delta_K(const GlobalTestFunction& phi, std::uint64_t cap = kDefaultEnumCap);

/// Adds places (disjoint from the support) carrying the indicator of O on
/// window w.
GlobalTestFunction normalize_support(const GlobalTestFunction& phi, const std::vector<Place>& extra,
                                     Window w = {0, 0});

/// Adds infinity if needed, refines every M_u to at least nu_u and applies
/// fourier_multi.
GlobalTestFunction global_fourier(const GlobalTestFunction& phi);

/// Support and windows reached by the auto-enlargement of the moves below.
/// With strict, enlargement throws std::domain_error instead.
/// phi(x + a), a one element per coordinate.
GlobalTestFunction translate(const GlobalTestFunction& phi, const std::vector<RationalFn>& a, bool strict = false);
/// phi(a x), a != 0.
GlobalTestFunction scale(const GlobalTestFunction& phi, const RationalFn& a, bool strict = false);
/// psi(sum_u r_u(a . x)) phi(x).
GlobalTestFunction multiply_character(const GlobalTestFunction& phi, const std::vector<RationalFn>& a,
                                      bool strict = false);

struct PoissonReport {
  CycScalar lhs;
  CycScalar rhs;
  bool equal = false;
  std::uint64_t points = 0;       ///< |Y_0|
  std::uint64_t dual_points = 0;  ///< |Y_0'|
};
/// delta_K(phi) against delta_K(F phi). With pointwise, F phi is evaluated
/// only at the rational points of the dual support.
PoissonReport poisson_report(const GlobalTestFunction& phi, bool pointwise = false,
                             std::uint64_t cap = kDefaultEnumCap);

/// One support configuration of an exhaustive sweep.
struct SweepConfig {
  std::vector<std::pair<Place, Window>> support;
  std::uint64_t functions = 0;
  std::uint64_t case1 = 0;  ///< cosets meeting K
  std::uint64_t case2 = 0;  ///< cosets missing K
  std::uint64_t failures = 0;
};
struct SweepResult {
  std::vector<SweepConfig> configs;
  std::uint64_t functions = 0;
  std::uint64_t case1 = 0;
  std::uint64_t case2 = 0;
  std::uint64_t failures = 0;
  bool ok() const { return failures == 0; }
};
/// Poisson summation for every simple coset indicator with windows
/// (N_u, M_u) <= (maxN, maxM) at the given places (window (0,0) = absent).
/// delta_K(F phi) is computed as sum_y phi(y) G(y) with G the transform of
/// the Y_0' histogram.
SweepResult poisson_sweep(const Field& f, const std::vector<Place>& places, int maxN = 1, int maxM = 1,
                          std::uint64_t cap = kDefaultEnumCap);

/// F(1_{prod t^{-D(u)} O_u}) against q^{deg D + 1} 1_{prod t^{-D'(u)} O_u},
/// D' = div(dt) - D.
struct Case1Report {
  Divisor D;
  Rational scalar;  ///< q^{deg D + 1}
  bool transform_matches = false;
  CycScalar lhs;
  CycScalar rhs;
  bool equal = false;
};
Case1Report case1_report(const Divisor& D);

/// Over F_2: the indicator of t + pi O at pi = t^2+t+1, a coset of O_pi
/// whose residue lies in F_4 \ F_2. No rational function lands in it.
GlobalTestFunction case2_fixture(const Field& f);

}  // namespace fqm
