#pragma once

#include <functional>
#include <vector>

#include "fqm/cyc.hpp"
#include "fqm/mpoly.hpp"

namespace fqm {

/// {x in A^m : f(x) = 0 for f in equations, g(x) != 0 for g in inequations}
/// over a base field F_q. Points may be taken over any F_{q^d}.
struct ConstructibleSet {
  const Field* base = nullptr;
  int m = 0;
  std::vector<MPoly> equations;
  std::vector<MPoly> inequations;

  static ConstructibleSet affine(const Field& f, int m);
  bool contains(const Extension& ext, const Elem* point) const;
};

/// X x Y on concatenated coordinates.
ConstructibleSet product(const ConstructibleSet& a, const ConstructibleSet& b);

/// Calls fn(point) for every point of X(F_{q^d}), coordinates in the top
/// field of extension(base, d), in lexicographic order of element indices.
void for_each_point(const ConstructibleSet& X, int d, const std::function<void(const std::vector<Elem>&)>& fn);
std::vector<std::vector<Elem>> enumerate_points(const ConstructibleSet& X, int d);

struct MotivicTerm {
  long coef = 1;
  ConstructibleSet X;
  MPoly h;
};

/// Integer combination of generators [X, h], times L^lshift.
class MotivicClass {
 public:
  MotivicClass() = default;
  explicit MotivicClass(const Field& f) : base_(&f) {}
  static MotivicClass generator(const ConstructibleSet& X, const MPoly& h, long coef = 1);
  /// L = [A^1, 0].
  static MotivicClass lefschetz(const Field& f);
  static MotivicClass one(const Field& f);
  /// [{c}, Id], specializing to psi(c).
  static MotivicClass psi_point(const Field& f, Elem c);

  const Field* base() const { return base_; }
  const std::vector<MotivicTerm>& terms() const { return terms_; }
  int lshift() const { return lshift_; }
  bool is_empty() const { return terms_.empty(); }

  friend MotivicClass class_add(const MotivicClass& a, const MotivicClass& b);
  friend MotivicClass class_mul(const MotivicClass& a, const MotivicClass& b);
  friend MotivicClass shift_L(const MotivicClass& a, int k);
  MotivicClass scaled(long c) const;

 private:
  const Field* base_ = nullptr;
  std::vector<MotivicTerm> terms_;
  int lshift_ = 0;
};

MotivicClass class_add(const MotivicClass& a, const MotivicClass& b);
MotivicClass class_mul(const MotivicClass& a, const MotivicClass& b);
MotivicClass shift_L(const MotivicClass& a, int k);

/// sum_terms coef * sum_{x in X(F_{q^d})} psi(h(x)) * q^{d lshift}, with psi
/// on F_{q^d} taken through the trace to F_p.
CycScalar specialize(const MotivicClass& a, int d);

/// Result of comparing two classes through specialization.
struct ClassComparison {
  bool distinguished = false;
  int degree = 0;  ///< first d with different specializations, or the bound D
};
ClassComparison compare_classes(const MotivicClass& a, const MotivicClass& b, int max_degree = 3);

struct ClosedPoint {
  int degree = 0;
  std::vector<Elem> rep;  ///< coordinates in the top field of extension(base, degree)
};

/// Size of the q-power Frobenius orbit of a point over F_{q^d}.
int orbit_size(const Extension& ext, const std::vector<Elem>& point);

/// One representative (least in index order) per Frobenius orbit, for all
/// closed points of degree <= B, ordered by degree then representative.
std::vector<ClosedPoint> closed_points(const ConstructibleSet& X, int B);

/// psi of Tr_{F_{q^n}/F_p} h(x_0) at a degree-n closed point.
/// Throws std::invalid_argument for a degenerate orbit or a point off X.
CycScalar orbit_norm_value(const ConstructibleSet& X, const ClosedPoint& P, const MPoly& h);

/// a(v) = coef * psi(Tr h(x_0)); coef = 0 gives a = 0.
struct EulerRecipe {
  long coef = 1;
  MPoly h;
};

struct EulerSeries {
  std::vector<CycScalar> lhs;  ///< coefficients of t^0..t^B
  std::vector<CycScalar> rhs;
  bool equal() const { return lhs == rhs; }
};

/// lhs: product over closed points of (1 + a(v) t^{deg v}) to t^B.
/// rhs: the symmetric-power series sum_n b_n t^n, obtained from Frobenius
/// fixed points over F_{q^m} (m <= B) via the exponential formula.
EulerSeries euler_product(const ConstructibleSet& X, const EulerRecipe& a, int B);

}  // namespace fqm
