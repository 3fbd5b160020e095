#include <random>
#include <set>

#include "doctest.h"
#include "fqm/algebra.hpp"

using namespace fqm;

namespace {

struct Desk {
  const Field& K = make_field(2, 1);
  const CyclicAlgebra& D = cyclic_algebra(K, 3, 1);
  const CyclicAlgebra& Dd = cyclic_algebra(K, 3, 2);
  RationalFn one = RationalFn::constant(K, 1);
  RationalFn t = RationalFn(Poly::x(K));
};

RationalFn random_poly(const Field& K, int deg, std::mt19937_64& rng) {
  std::vector<Elem> c(static_cast<std::size_t>(deg) + 1);
  for (auto& x : c) x = static_cast<Elem>(rng() % K.size());
  return RationalFn(Poly(K, c));
}

AlgebraElement random_element(const CyclicAlgebra& A, int deg, std::mt19937_64& rng, bool with_den = false) {
  AlgebraElement x(A);
  const Field& K = A.base();
  for (int i = 0; i < A.n(); ++i)
    for (int j = 0; j < A.n(); ++j) {
      RationalFn c = random_poly(K, deg, rng);
      if (with_den && rng() % 2) c /= RationalFn(Poly(K, {1, 1}));
      x.set(i, j, c);
    }
  return x;
}

// sum_k c_k x^k by repeated multiplication.
AlgebraElement evaluate(const std::vector<RationalFn>& c, const AlgebraElement& x) {
  const CyclicAlgebra& A = x.algebra();
  AlgebraElement acc(A), pw = AlgebraElement::one(A);
  for (const auto& ck : c) {
    acc += ck * pw;
    pw = alg_mul(pw, x);
  }
  return acc;
}

AlgebraElement L_const(const CyclicAlgebra& A, Elem u, int i = 0) {
  return AlgebraElement::from_L(A, RationalFn::constant(A.L(), u), i);
}

}  // namespace

TEST_CASE("cyclic algebra: defining relations") {
  Desk d;
  const Field& L = d.D.L();
  CHECK(d.D.basis().size() == 3);
  for (Elem a = 0; a < L.size(); ++a) {
    const Elem* c = d.D.coords(a);
    CHECK(d.D.from_coords(c) == a);
  }
  AlgebraElement s = AlgebraElement::s(d.D);
  for (Elem b : d.D.basis()) {
    AlgebraElement lhs = s * L_const(d.D, b);
    AlgebraElement rhs = L_const(d.D, d.D.g(b)) * s;
    CHECK(lhs == rhs);
    // the other form twists by g^2
    AlgebraElement sd = AlgebraElement::s(d.Dd);
    CHECK(sd * L_const(d.Dd, b) == L_const(d.Dd, L.pow(b, 4)) * sd);
  }
  CHECK(s * s * s == AlgebraElement::scalar(d.D, d.t));
  CHECK_THROWS_AS(CyclicAlgebra(d.K, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(CyclicAlgebra(d.K, 3, 3), std::invalid_argument);
}

TEST_CASE("cyclic algebra: associativity and distributivity") {
  Desk d;
  std::mt19937_64 rng(11);
  for (int it = 0; it < 100; ++it) {
    const CyclicAlgebra& A = it % 2 ? d.D : d.Dd;
    AlgebraElement x = random_element(A, 2, rng), y = random_element(A, 2, rng), z = random_element(A, 2, rng);
    CHECK((x * y) * z == x * (y * z));
    if (it % 10 == 0) {
      CHECK(x * (y + z) == x * y + x * z);
      CHECK((x + y) * z == x * z + y * z);
    }
  }
  AlgebraElement x = random_element(d.D, 1, rng, true), y = random_element(d.D, 1, rng, true);
  CHECK((x * y) * x == x * (y * x));
  CHECK_THROWS_AS(alg_mul(x, AlgebraElement::s(d.Dd)), std::invalid_argument);
}

TEST_CASE("splitting matrix") {
  Desk d;
  const Field& L = d.D.L();
  LMatrix I = splitting_matrix(AlgebraElement::one(d.D));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(I[static_cast<std::size_t>(i * 3 + j)] == RationalFn::constant(L, i == j ? 1 : 0));
  CHECK(determinant(splitting_matrix(AlgebraElement::s(d.D)), 3) == RationalFn(Poly::x(L)));
  std::mt19937_64 rng(5);
  for (int it = 0; it < 20; ++it) {
    AlgebraElement x = random_element(d.D, 2, rng, it % 3 == 0), y = random_element(d.D, 1, rng);
    CHECK(splitting_matrix(x * y) == matmul(splitting_matrix(x), splitting_matrix(y), 3));
    CHECK(splitting_matrix(x + y) == [&] {
      LMatrix a = splitting_matrix(x), b = splitting_matrix(y);
      for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
      return a;
    }());
    bool zero = true;
    for (const auto& e : splitting_matrix(x)) zero &= e.is_zero();
    CHECK(zero == x.is_zero());
  }
  // integral coefficients at t+1 give matrices over O_{t+1}
  Place v = Place::finite(Poly(d.K, {1, 1}));
  Poly pi = Poly(L, {1, 1});
  for (int it = 0; it < 10; ++it) {
    AlgebraElement x = random_element(d.D, 2, rng, true);
    bool integral = true;
    for (const auto& e : splitting_matrix(x)) integral &= e.is_zero() || e.valuation(pi) >= 0;
    CHECK(integral == integral_test(x, v));
  }
}

TEST_CASE("reduced characteristic polynomial") {
  Desk d;
  const Field& L = d.D.L();
  auto P = reduced_char_poly(AlgebraElement::s(d.D));
  CHECK(P == std::vector<RationalFn>{d.t, RationalFn(d.K), RationalFn(d.K), d.one});
  CHECK(poly_str(P) == "X^3 + (t)");
  CHECK(reduced_norm(AlgebraElement::s(d.D)) == d.t);
  for (Elem b = 1; b < L.size(); ++b) {
    Elem N = d.D.ext().restrict(L.pow(b, 1 + 2 + 4));
    CHECK(N == 1);
    for (const CyclicAlgebra* A : {&d.D, &d.Dd}) {
      auto Q = reduced_char_poly(L_const(*A, b, 1));
      CHECK(Q == std::vector<RationalFn>{RationalFn::constant(d.K, N) * d.t, RationalFn(d.K), RationalFn(d.K), d.one});
    }
  }
  // central x: (X - x)^3
  RationalFn c = RationalFn(Poly(d.K, {1, 0, 1})) / RationalFn(Poly(d.K, {0, 1, 1}));
  auto C = reduced_char_poly(AlgebraElement::scalar(d.D, c));
  RationalFn three = d.one + d.one + d.one;
  CHECK(C == std::vector<RationalFn>{-(c * c * c), three * c * c, -(three * c), d.one});
  std::mt19937_64 rng(9);
  for (int it = 0; it < 20; ++it) {
    AlgebraElement x = random_element(d.D, 1, rng, it % 2 == 0), y = random_element(d.D, 1, rng);
    auto Px = reduced_char_poly(x);
    CHECK(evaluate(Px, x).is_zero());
    CHECK(reduced_char_poly(x * y) == reduced_char_poly(y * x));
    CHECK(reduced_norm(x * y) == reduced_norm(x) * reduced_norm(y));
    CHECK(reduced_trace(x + y) == reduced_trace(x) + reduced_trace(y));
  }
  // q = 3, a form with a = 2
  const Field& K3 = make_field(3, 1);
  const CyclicAlgebra& A3 = cyclic_algebra(K3, 3, 2);
  for (int it = 0; it < 5; ++it) {
    AlgebraElement x = random_element(A3, 1, rng);
    CHECK(evaluate(reduced_char_poly(x), x).is_zero());
  }
}

TEST_CASE("integrality and S_0") {
  Desk d;
  AlgebraElement s = AlgebraElement::s(d.D);
  Place v1 = Place::finite(Poly(d.K, {1, 1}));
  Place v2 = Place::finite(Poly(d.K, {1, 1, 1}));
  CHECK(integral_test(s, v1));
  CHECK(integral_test(s, v2));
  CHECK(s0_test(s));
  AlgebraElement x = AlgebraElement::term(d.D, 0, 1, d.one / RationalFn(Poly(d.K, {1, 1})));
  CHECK_FALSE(integral_test(x, v1));
  CHECK(integral_test(x, v2));
  CHECK(s0_test(x));
  CHECK_FALSE(s0_test(AlgebraElement::scalar(d.D, d.t.inverse())));
  CHECK_THROWS_AS(integral_test(s, Place::finite(Poly::x(d.K))), std::invalid_argument);
  CHECK_THROWS_AS(integral_test(s, Place::infinity(d.K)), std::invalid_argument);
}

TEST_CASE("w valuation and jets") {
  Desk d;
  AlgebraElement s = AlgebraElement::s(d.D);
  CHECK(w_valuation(s) == 1);
  CHECK(w_valuation(AlgebraElement::scalar(d.D, d.t)) == 3);
  CHECK(w_valuation(AlgebraElement::term(d.D, 0, 1, d.one)) == 0);
  CHECK(!w_valuation(AlgebraElement(d.D)).has_value());
  CHECK(w_valuation(AlgebraElement::term(d.D, 2, 1, d.t.inverse())) == -1);

  std::mt19937_64 rng(3);
  SlotWindow w = integral_window(d.D, 3);
  for (int it = 0; it < 30; ++it) {
    AlgebraElement x = random_element(d.D, 2, rng, true), y = random_element(d.D, 2, rng, true);
    AlgebraJet jx = algebra_jet(x, w), jy = algebra_jet(y, w);
    CHECK(algebra_jet(x * y, w) == jx * jy);
    CHECK(algebra_jet(x + y, w) == jx + jy);
    auto wx = w_valuation(x);
    CHECK(w_valuation(jx) == (wx && *wx < w.hi ? wx : std::nullopt));
    CHECK(AlgebraJet::from_index(d.D, w, jx.index()) == jx);
    // the same element seen on a window reaching below zero
    AlgebraJet lo = algebra_jet(AlgebraElement::scalar(d.D, d.t.inverse()) * x, {-3, 6});
    CHECK(lo.truncate({-3, 6}) == lo);
  }
  CHECK(!try_jet(AlgebraElement::term(d.D, 1, 0, d.t.inverse()), {0, 3}).has_value());
  CHECK(try_jet(AlgebraElement::term(d.D, 1, 0, d.t.inverse()), {-2, 3}).has_value());
  CHECK(w_additivity_violations(d.D, 4, 1000, 42) == 0);
  CHECK(w_additivity_violations(d.Dd, 4, 200, 43) == 0);
}

TEST_CASE("residue algebra and units at level 1") {
  Desk d;
  AlgebraJet r = residue_algebra_class(AlgebraElement::s(d.D));
  CHECK(r[1] == 1);
  CHECK((r * r * r).is_zero());
  CHECK_FALSE((r * r).is_zero());
  AlgebraJet d1 = residue_algebra_class(AlgebraElement::term(d.D, 0, 1, d.one));
  CHECK(d1[0] == d.D.basis()[1]);
  CHECK(d1[1] == 0);
  CHECK_THROWS_AS(residue_algebra_class(AlgebraElement::scalar(d.D, d.t.inverse())), std::invalid_argument);

  // units of S_0 / t S_0 by brute force
  SlotWindow w = integral_window(d.D, 1);
  AlgebraJet one(d.D, w);
  one.set(0, 1);
  std::uint64_t size = 512, units = 0;
  for (std::uint64_t i = 0; i < size; ++i) {
    AlgebraJet x = AlgebraJet::from_index(d.D, w, i);
    bool has_inverse = false;
    for (std::uint64_t j = 0; j < size && !has_inverse; ++j) has_inverse = x * AlgebraJet::from_index(d.D, w, j) == one;
    CHECK(has_inverse == (x[0] != 0));
    CHECK(has_inverse == is_unit(x));
    CHECK(has_inverse == (w_valuation(x) == 0));
    units += has_inverse;
  }
  CHECK(units == 7 * 64);
  std::mt19937_64 rng(8);
  for (int it = 0; it < 50; ++it) {
    AlgebraJet u = random_unit(d.D, 9, rng);
    AlgebraJet e(d.D, {0, 9});
    e.set(0, 1);
    CHECK(u * inverse(u) == e);
    CHECK(inverse(u) * u == e);
  }
}

TEST_CASE("jet char poly against the rational char poly") {
  Desk d;
  std::mt19937_64 rng(21);
  for (int it = 0; it < 20; ++it) {
    AlgebraElement x = random_element(d.D, 3, rng, true);
    auto P = reduced_char_poly(x);
    auto J = jet_char_poly(algebra_jet(x, integral_window(d.D, 3)), 3);
    for (int k = 0; k < 3; ++k) {
      auto jk = algebra_jet(AlgebraElement::scalar(d.D, P[static_cast<std::size_t>(k)]), {0, 9});
      for (int m = 0; m < 3; ++m) CHECK(J[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)] == jk[3 * m]);
    }
  }
  CHECK_THROWS_AS(jet_char_poly(AlgebraJet(d.D, {0, 3}), 2), std::domain_error);
}

TEST_CASE("invariant functions") {
  Desk d;
  AlgebraTestFunction c = invariant_fn(d.D, InvariantRecipe::constant(), 1);
  for (const auto& v : c.table) CHECK(v == CycScalar(2, Rational(1)));
  CHECK_THROWS_AS(invariant_fn(d.D, InvariantRecipe::trace_character(2), 1), std::invalid_argument);

  // psi(-Trd mod t): Trd = Tr_{L/F_q}(slot 0)
  AlgebraTestFunction tr = invariant_fn(d.D, InvariantRecipe::trace_character(1), 1);
  for (std::uint64_t i = 0; i < tr.size(); ++i) {
    AlgebraJet x = AlgebraJet::from_index(d.D, tr.window, i);
    CHECK(tr.table[i] == d.K.psi(d.D.ext().trace(x[0])));
  }
  CHECK(invariance_defects(tr, 200, 1) == 0);

  InvariantRecipe r = InvariantRecipe::charpoly_coset(AlgebraElement::s(d.D), 2);
  CHECK(r.target == std::vector<std::vector<Elem>>{{0, 1}, {0, 0}, {0, 0}});
  AlgebraTestFunction phi = invariant_fn(d.D, r, 2);
  CHECK(invariance_defects(phi, 200, 2) == 0);
  // b s with N(b) = 1 lies in the coset, 1 + s does not
  std::uint64_t hits = 0;
  for (const auto& v : phi.table) hits += !v.is_zero();
  CHECK(hits > 0);
  CHECK(phi.at(AlgebraElement::s(d.D)) == CycScalar(2, Rational(1)));
  CHECK(phi.at(L_const(d.D, 5, 1)) == CycScalar(2, Rational(1)));
  CHECK(phi.at(AlgebraElement::one(d.D) + AlgebraElement::s(d.D)).is_zero());
  CHECK(phi.at(AlgebraElement::scalar(d.D, d.t.inverse())).is_zero());

  // a non-invariant function is caught by the sampler
  AlgebraTestFunction bad(d.D, integral_window(d.D, 1));
  for (std::uint64_t i = 0; i < bad.size(); ++i)
    if (AlgebraJet::from_index(d.D, bad.window, i)[1] == 1) bad.table[i] = CycScalar(2, Rational(1));
  CHECK(invariance_defects(bad, 200, 3) > 0);
}

TEST_CASE("fourier on D") {
  Desk d;
  SlotWindow w = integral_window(d.D, 1);
  CHECK(nu_D(d.D) == 6);
  CHECK(nu_D(d.D, Pairing::DotProduct) == 0);
  CHECK(dual_slot_window(d.D, w) == SlotWindow{-5, -2});
  CHECK(dual_slot_window(d.D, w, Pairing::DotProduct) == SlotWindow{-3, 0});
  CHECK_THROWS_AS(dual_slot_window(d.D, {0, 2}, Pairing::DotProduct), std::invalid_argument);

  // Gram matrix against the jet product
  auto B = algebra_gram(d.D, w);
  SlotWindow wd = dual_slot_window(d.D, w);
  for (int k = 0; k < 9; ++k)
    for (int l = 0; l < 9; ++l) {
      AlgebraJet x(d.D, {-5, 0}), y(d.D, w);
      x.set(wd.lo + k / 3, d.D.basis()[static_cast<std::size_t>(k % 3)]);
      y.set(w.lo + l / 3, d.D.basis()[static_cast<std::size_t>(l % 3)]);
      AlgebraJet xy = x * y;
      CHECK(B[static_cast<std::size_t>(k * 9 + l)] == d.D.ext().trace(xy[-3]));
    }

  AlgebraTestFunction zero(d.D, w);
  for (const auto& v : fourier_D(zero).table) CHECK(v.is_zero());

  // F(1_{S_0}) = q^{-nu_D/2} 1_{S_0^perp}; on this window S_0^perp is the zero class
  AlgebraTestFunction one = invariant_fn(d.D, InvariantRecipe::constant(), 1);
  AlgebraTestFunction F1 = fourier_D(one);
  CHECK(F1.window == wd);
  for (std::uint64_t i = 0; i < F1.size(); ++i) {
    CycScalar expect(2, Rational(i == 0 ? 1 : 0, 8));
    CHECK(F1.table[i] == expect);
    if (i % 37 == 0) CHECK(fourier_D_at(one, AlgebraJet::from_index(d.D, wd, i)) == expect);
  }

  // F F = reflection on the delta basis, both pairings
  for (Pairing pr : {Pairing::Trace, Pairing::DotProduct}) {
    for (std::uint64_t i = 0; i < 512; ++i) {
      AlgebraTestFunction delta(d.D, w);
      delta.table[i] = CycScalar(2, Rational(1));
      AlgebraTestFunction FF = fourier_D(fourier_D(delta, pr), pr);
      CHECK(FF.window == w);
      AlgebraTestFunction R = reflect(delta);
      bool same = FF.table == R.table;
      CHECK(same);
    }
  }

  // table transform against the direct sum, q = 3 and a random function
  const Field& K3 = make_field(3, 1);
  const CyclicAlgebra& A3 = cyclic_algebra(K3, 3, 1);
  std::mt19937_64 rng(4);
  AlgebraTestFunction f3(A3, {0, 2});
  for (auto& v : f3.table) v = CycScalar::zeta_power(3, static_cast<long>(rng() % 3)) * Rational(static_cast<std::int64_t>(rng() % 5));
  AlgebraTestFunction F3 = fourier_D(f3);
  for (int it = 0; it < 40; ++it) {
    std::uint64_t i = rng() % F3.size();
    CHECK(F3.table[i] == fourier_D_at(f3, AlgebraJet::from_index(A3, F3.window, i)));
  }
}

TEST_CASE("fourier on D transports invariance") {
  Desk d;
  for (const auto& r : {InvariantRecipe::trace_character(1),
                        InvariantRecipe::charpoly_coset(AlgebraElement::s(d.D), 1),
                        InvariantRecipe::charpoly_coset(AlgebraElement::term(d.D, 0, 1, d.one), 1)}) {
    AlgebraTestFunction F = fourier_D(invariant_fn(d.D, r, 1));
    CHECK(invariance_defects(F, 200, 7) == 0);
  }
  AlgebraTestFunction F2 = fourier_D(invariant_fn(d.D, InvariantRecipe::charpoly_coset(AlgebraElement::s(d.D), 2), 2));
  CHECK(invariance_defects(F2, 200, 8) == 0);
}

TEST_CASE("matched pairs") {
  Desk d;
  const Field& L = d.D.L();
  MatchedPair m = matched_pair(d.D, d.Dd, 1);
  CHECK(m.c == AlgebraElement::s(d.D));
  CHECK(m.cdot == AlgebraElement::s(d.Dd));
  CHECK(poly_str(reduced_char_poly(m.c)) == "X^3 + (t)");
  MatchedPair g = matched_pair(d.D, d.Dd, L.generator());
  CHECK(reduced_char_poly(g.c) == reduced_char_poly(g.cdot));
  CHECK(reduced_norm(g.c) == d.t);
  RationalFn c = RationalFn(Poly(L, {d.D.basis()[1], d.D.basis()[1]}));
  MatchedPair l = matched_pair_L(d.D, d.Dd, c);
  CHECK(l.provenance == "L-common");
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(l.c(i, j) == l.cdot(i, j));
  CHECK(l.c(0, 1) == RationalFn(Poly(d.K, {1, 1})));
  CHECK_THROWS_AS(matched_pair(d.D, d.Dd, 0), std::invalid_argument);
  CHECK_THROWS_AS(matched_pair(d.D, d.D, 1), std::invalid_argument);

  auto pairs = theorem_a_pairs(d.D, d.Dd);
  CHECK(pairs.size() >= 20);
  for (const auto& p : pairs) {
    CHECK(reduced_char_poly(p.c) == reduced_char_poly(p.cdot));
    CHECK(is_regular_semisimple(p.c));
  }
  CHECK_FALSE(is_regular_semisimple(AlgebraElement::one(d.D)));
  CHECK_FALSE(is_regular_semisimple(AlgebraElement::scalar(d.D, d.t)));
}

TEST_CASE("theorem A at window (0,1)") {
  Desk d;
  auto pairs = theorem_a_pairs(d.D, d.Dd);
  pairs.push_back(matched_pair_L(d.D, d.Dd, RationalFn::constant(d.D.L(), 1)));
  for (const auto& r : {InvariantRecipe::constant(), InvariantRecipe::trace_character(1),
                        InvariantRecipe::charpoly_coset(AlgebraElement::s(d.D), 1)}) {
    TheoremAReport rep = theorem_a_report(d.D, d.Dd, r, pairs, 1);
    CHECK(rep.ok());
    CHECK(rep.compared == pairs.size() - 1);
    CHECK_FALSE(rep.rows.back().regular);
  }
  // the values separate classes, so the comparison is not vacuous
  TheoremAReport rep = theorem_a_report(d.D, d.Dd, InvariantRecipe::charpoly_coset(AlgebraElement::s(d.D), 1), pairs, 1);
  std::set<std::string> values;
  for (const auto& row : rep.rows) values.insert(row.value_D.str());
  CHECK(values.size() > 1);
}
