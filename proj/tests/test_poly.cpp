#include <random>

#include "doctest.h"
#include "fqm/mpoly.hpp"
#include "fqm/poly.hpp"

using namespace fqm;

namespace {

// Necklace count of monic irreducibles of degree n over F_q.
long necklace(long q, int n) {
  auto mu = [](int m) {
    int r = 1;
    for (int d = 2; d * d <= m; ++d) {
      if (m % d) continue;
      m /= d;
      if (m % d == 0) return 0;
      r = -r;
    }
    return m > 1 ? -r : r;
  };
  long s = 0;
  for (int d = 1; d <= n; ++d) {
    if (n % d) continue;
    long pw = 1;
    for (int i = 0; i < n / d; ++i) pw *= q;
    s += mu(d) * pw;
  }
  return s / n;
}

Poly random_poly(const Field& f, std::mt19937& rng, int deg) {
  std::vector<Elem> c(static_cast<std::size_t>(deg) + 1);
  for (auto& x : c) x = rng() % f.size();
  return Poly(f, c);
}

}  // namespace

TEST_CASE("irreducible counts match the necklace formula") {
  for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}}) {
    const Field& f = make_field(p, e);
    for (int n = 1; n <= 4; ++n)
      CHECK(static_cast<long>(monic_irreducibles(f, n).size()) == necklace(f.size(), n));
  }
  const Field& f2 = make_field(2, 1);
  CHECK(monic_irreducibles(f2, 2).size() == 1);
  CHECK(monic_irreducibles(f2, 2)[0].str() == "t^2+t+1");
}

TEST_CASE("division, gcd and inverses") {
  const Field& f = make_field(3, 1);
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Poly a = random_poly(f, rng, 6), b = random_poly(f, rng, 3);
    if (b.is_zero()) continue;
    Poly q, r;
    Poly::divmod(a, b, q, r);
    CHECK(q * b + r == a);
    CHECK(r.degree() < b.degree());
    Poly g = gcd(a, b);
    if (!g.is_zero()) {
      CHECK((a % g).is_zero());
      CHECK((b % g).is_zero());
    }
    Poly m = Poly::monic_from_index(f, 3, 5);
    if (gcd(a, m).degree() == 0) CHECK(((inverse_mod(a, m) * a) % m).is_one());
  }
}

TEST_CASE("factorization reconstructs the input") {
  const Field& f = make_field(2, 1);
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    Poly a = random_poly(f, rng, 8);
    if (a.is_zero()) continue;
    Poly prod = Poly::constant(f, 1);
    for (const auto& [p, m] : factor(a)) {
      CHECK(is_irreducible(p));
      prod *= power(p, m);
    }
    CHECK(prod == a.monic());
  }
}

TEST_CASE("rational functions reduce and have valuations") {
  const Field& f = make_field(2, 1);
  Poly t = Poly::x(f), one = Poly::constant(f, 1);
  RationalFn r(t * t + t, t * t);  // (t+1)/t
  CHECK(r.num() == t + one);
  CHECK(r.den() == t);
  CHECK(r.valuation(t) == -1);
  CHECK(r.valuation(t + one) == 1);
  CHECK(r.valuation_infinity() == 0);
  CHECK(r * r.inverse() == RationalFn::constant(f, 1));
  CHECK(r - r == RationalFn(f));
}

TEST_CASE("multivariate parser") {
  const Field& f = make_field(3, 1);
  auto vars = std::vector<std::string>{"x", "y"};
  MPoly h = parse_mpoly(f, "x^2 + 2*x*y - (y - 1)", vars);
  Elem pt[2] = {1, 2};
  // 1 + 2*2 - 1 = 4 = 1 mod 3
  CHECK(h.eval(pt) == 1);
  try {
    parse_mpoly(f, "x +\n  z", vars);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.column == 3);
  }
  const Field& f4 = make_field(2, 2);
  MPoly g = parse_mpoly(f4, "a*x + a^2", {"x"});
  Elem z[1] = {0};
  CHECK(g.eval(z) == 3);
}
