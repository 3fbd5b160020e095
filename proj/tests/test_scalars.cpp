#include <random>
#include <set>

#include "doctest.h"
#include "fqm/cyc.hpp"
#include "fqm/field.hpp"

using namespace fqm;

namespace {

// Schoolbook product of coefficient vectors modulo the field modulus.
std::vector<int> naive_mul(const Field& f, std::vector<int> a, std::vector<int> b) {
  int p = f.p(), e = f.degree();
  std::vector<int> r(static_cast<std::size_t>(2 * e), 0);
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < e; ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  const auto& m = f.modulus();
  for (int k = 2 * e - 1; k >= e; --k) {
    int c = r[k];
    for (int j = 0; j <= e; ++j) r[k - e + j] = ((r[k - e + j] - c * m[j]) % p + p) % p;
  }
  r.resize(static_cast<std::size_t>(e));
  return r;
}

Elem naive_pow(const Field& f, Elem x, long k) {
  Elem r = 1;
  for (long i = 0; i < k; ++i) r = f.from_coeffs(naive_mul(f, f.coeffs(r), f.coeffs(x)));
  return r;
}

}  // namespace

TEST_CASE("make_field sizes and moduli") {
  CHECK(make_field(2, 1).size() == 2);
  const Field& f8 = make_field(2, 3);
  CHECK(f8.size() == 8);
  CHECK(f8.modulus() == std::vector<int>{1, 1, 0, 1});
  CHECK(make_field(2, 2).modulus() == std::vector<int>{1, 1, 1});
  CHECK(make_field(3, 2).modulus() == std::vector<int>{1, 0, 1});
  CHECK(&make_field(2, 3) == &f8);
  CHECK_THROWS_AS(make_field(4, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_field(2, 0), std::invalid_argument);
}

TEST_CASE("F_8 multiplicative group is cyclic of order 7") {
  const Field& f = make_field(2, 3);
  std::set<Elem> seen;
  Elem g = f.generator(), x = 1;
  for (int i = 0; i < 7; ++i) {
    seen.insert(x);
    x = f.from_coeffs(naive_mul(f, f.coeffs(x), f.coeffs(g)));
  }
  CHECK(x == 1);
  CHECK(seen.size() == 7);
  CHECK(f.order(g) == 7);
}

TEST_CASE("F_9 contains F_3 as the elements fixed by x -> x^3") {
  const Field& f = make_field(3, 2);
  std::set<Elem> fixed;
  for (Elem x = 0; x < 9; ++x)
    if (naive_pow(f, x, 3) == x) fixed.insert(x);
  CHECK(fixed == std::set<Elem>{0, 1, 2});
  for (Elem a : fixed)
    for (Elem b : fixed) {
      CHECK(fixed.count(f.add(a, b)) == 1);
      CHECK(fixed.count(f.mul(a, b)) == 1);
    }
}

TEST_CASE("table arithmetic matches schoolbook arithmetic") {
  for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 3}, {2, 4}, {3, 2}, {3, 3}, {5, 2}, {3, 7}}) {
    const Field& f = make_field(p, e);
    std::mt19937 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
      Elem a = rng() % f.size(), b = rng() % f.size();
      CHECK(f.mul(a, b) == f.from_coeffs(naive_mul(f, f.coeffs(a), f.coeffs(b))));
      auto ca = f.coeffs(a), cb = f.coeffs(b);
      for (int i = 0; i < e; ++i) ca[i] = (ca[i] + cb[i]) % p;
      CHECK(f.add(a, b) == f.from_coeffs(ca));
      CHECK(f.sub(f.add(a, b), b) == a);
      if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1);
    }
  }
}

TEST_CASE("trace examples") {
  const Field& f4 = make_field(2, 2);
  CHECK(trace(f4, 0, 1) == 0);
  // root x of X^2+X+1: x + x^2 = 1
  CHECK(trace(f4, 2, 1) == 1);
  const Field& f9 = make_field(3, 2);
  for (Elem x = 0; x < 9; ++x) CHECK(trace(f9, x, 2) == x);
  CHECK_THROWS_AS(trace(make_field(2, 3), 1, 2), std::invalid_argument);
}

TEST_CASE("trace is transitive for e <= 6") {
  for (int p : {2, 3}) {
    for (int e = 1; e <= 6; ++e) {
      const Field& f = make_field(p, e);
      for (int d = 1; d <= e; ++d) {
        if (e % d != 0) continue;
        const Field& sub = make_field(p, d);
        for (Elem x = 0; x < f.size(); ++x) {
          Elem t = trace(f, x, d);
          REQUIRE(t < sub.size());
          CHECK(trace(sub, t, 1) == trace(f, x, 1));
        }
      }
    }
  }
}

TEST_CASE("trace agrees with the sum of conjugates") {
  const Field& f = make_field(2, 6);
  const Extension& ext = extension(make_field(2, 2), 3);
  for (Elem x = 0; x < f.size(); ++x) {
    Elem s = 0;
    for (int i = 0; i < 3; ++i) s = f.add(s, naive_pow(f, x, 1L << (2 * i)));
    CHECK(s == ext.embed(ext.trace(x)));
  }
}

TEST_CASE("psi is additive and sums to zero") {
  for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {2, 3}, {3, 2}}) {
    const Field& f = make_field(p, e);
    CycScalar sum(p, Rational(0));
    for (Elem x = 0; x < f.size(); ++x) {
      sum += f.psi(x);
      for (Elem y = 0; y < f.size(); ++y) CHECK(f.psi(f.add(x, y)) == f.psi(x) * f.psi(y));
    }
    CHECK(sum.is_zero());
  }
  const Field& f2 = make_field(2, 1);
  CHECK(f2.psi(0) == CycScalar(2, Rational(1)));
  CHECK(f2.psi(1) == CycScalar(2, Rational(-1)));
}

TEST_CASE("sum of psi(x^2) over F_3 is 1 + 2 zeta") {
  const Field& f = make_field(3, 1);
  CycScalar s(3, Rational(0));
  for (Elem x = 0; x < 3; ++x) s += f.psi(f.mul(x, x));
  std::vector<Rational> expect{1, 2};
  CHECK(s.coeffs() == expect);
  CHECK(s.str() == "1+2*z");
}

TEST_CASE("cyc_normalize") {
  std::vector<Rational> ones{1, 1, 1};
  CHECK(CycScalar::normalize(3, ones).is_zero());
  std::vector<Rational> top{0, 0, 0, 0, 1};
  CHECK(CycScalar::normalize(5, top).coeffs() == std::vector<Rational>(4, Rational(-1)));
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    int p = trial % 2 ? 5 : 3;
    std::vector<Rational> raw;
    for (int i = 0; i < p; ++i) raw.emplace_back(static_cast<int>(rng() % 11) - 5, 1 + static_cast<int>(rng() % 4));
    CycScalar a = CycScalar::normalize(p, raw);
    CHECK(CycScalar::normalize(p, a.coeffs()) == a);
  }
}

TEST_CASE("cyclotomic arithmetic") {
  CycScalar z = CycScalar::zeta_power(5, 1);
  CycScalar acc(5, Rational(1));
  for (int i = 0; i < 5; ++i) acc *= z;
  CHECK(acc == CycScalar(5, Rational(1)));
  CHECK(z.times_zeta(4) == CycScalar(5, Rational(1)));
  CHECK(CycScalar::zeta_power(2, 1) == CycScalar(2, Rational(-1)));
  CHECK_THROWS(CycScalar(3, Rational(1)) + CycScalar(5, Rational(1)));
}

TEST_CASE("rational overflow is reported") {
  Rational big(std::int64_t{1} << 62);
  CHECK_THROWS_AS(big * Rational(4), std::overflow_error);
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK(Rational::parse("-3/6") == Rational(-1, 2));
}
