#include "fqm/serialize.hpp"

#include <stdexcept>

namespace fqm {

const Field& field_of_order(std::uint64_t q) {
  if (q < 2) throw std::invalid_argument("field_of_order: q = " + std::to_string(q));
  std::uint64_t p = 2;
  while (q % p != 0) ++p;
  int e = 0;
  std::uint64_t r = q;
  while (r % p == 0) {
    r /= p;
    ++e;
  }
  if (r != 1) throw std::invalid_argument("field_of_order: " + std::to_string(q) + " is not a prime power");
  return make_field(static_cast<int>(p), e);
}

Json to_json(const Rational& r) { return Json::array({r.num(), r.den()}); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("rational: expected [num, den]");
  return Rational(j[0].get<std::int64_t>(), j[1].get<std::int64_t>());
}

Json to_json(const CycScalar& v) {
  Json c = Json::array();
  for (const auto& r : v.coeffs()) c.push_back(to_json(r));
  return Json{{"p", v.prime()}, {"coeffs", c}};
}

CycScalar cyc_from_json(const Json& j) {
  int p = j.at("p").get<int>();
  std::vector<Rational> raw;
  for (const auto& c : j.at("coeffs")) raw.push_back(rational_from_json(c));
  return CycScalar::normalize(p, raw);
}

Json elem_to_json(const Field& f, Elem x) { return Json(f.coeffs(x)); }

Elem elem_from_json(const Field& f, const Json& j) {
  if (j.is_number_integer()) {
    long v = j.get<long>();
    if (v < 0 || v >= f.p()) throw std::invalid_argument("element: integer outside F_p");
    return static_cast<Elem>(v);
  }
  std::vector<int> c = j.get<std::vector<int>>();
  if (static_cast<int>(c.size()) > f.degree()) throw std::invalid_argument("element: too many coefficients");
  for (int x : c)
    if (x < 0 || x >= f.p()) throw std::invalid_argument("element: coefficient outside [0, p)");
  return f.from_coeffs(c);
}

Json to_json(const Poly& p) {
  Json out = Json::array();
  for (Elem c : p.coeffs()) out.push_back(elem_to_json(p.field(), c));
  return out;
}

Poly poly_from_json(const Field& f, const Json& j) {
  std::vector<Elem> c;
  for (const auto& x : j) c.push_back(elem_from_json(f, x));
  return Poly(f, std::move(c));
}

Json to_json(const RationalFn& x) { return Json{{"num", to_json(x.num())}, {"den", to_json(x.den())}}; }

RationalFn rational_fn_from_json(const Field& f, const Json& j) {
  if (j.is_array()) return RationalFn(poly_from_json(f, j));
  return RationalFn(poly_from_json(f, j.at("num")), poly_from_json(f, j.at("den")));
}

Json to_json(const Place& u) { return u.is_infinity() ? Json("inf") : to_json(u.poly()); }

Place place_from_json(const Field& f, const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "inf") throw std::invalid_argument("place: expected \"inf\" or a coefficient list");
    return Place::infinity(f);
  }
  return Place::finite(poly_from_json(f, j));
}

Json to_json(const TestFunction& phi) {
  const Field& f = phi.field();
  Json places = Json::array();
  for (const auto& pw : phi.support())
    places.push_back(Json{{"place", to_json(pw.place.place)},
                          {"nu", pw.place.nu},
                          {"N", pw.window.N},
                          {"M", pw.window.M}});
  Json table = Json::array();
  for (const auto& v : phi.table()) table.push_back(to_json(v));
  return Json{{"q", f.size()}, {"p", f.p()}, {"places", places}, {"arity", phi.arity()}, {"table", table}};
}

TestFunction test_function_from_json(const Json& j) {
  const Field& f = field_of_order(j.at("q").get<std::uint64_t>());
  if (j.contains("p") && j.at("p").get<int>() != f.p()) throw std::invalid_argument("test function: p does not divide q");
  std::vector<PlaceWindow> support;
  for (const auto& pj : j.at("places")) {
    PlaceData pd = PlaceData::standard(place_from_json(f, pj.at("place")));
    if (pj.contains("nu")) pd.nu = pj.at("nu").get<int>();
    support.push_back({pd, {pj.at("N").get<int>(), pj.at("M").get<int>()}});
  }
  int arity = j.value("arity", 1);
  TestFunction phi(f, support, arity);
  const Json& table = j.at("table");
  if (table.size() != phi.size())
    throw std::invalid_argument("test function: table has " + std::to_string(table.size()) + " entries, windows need " +
                                std::to_string(phi.size()));
  for (std::uint64_t i = 0; i < phi.size(); ++i) {
    CycScalar v = cyc_from_json(table[i]);
    if (v.prime() != f.p()) throw std::invalid_argument("test function: value over the wrong cyclotomic field");
    phi[i] = v;
  }
  return phi;
}

Json to_json(const ConstructibleSet& X) {
  auto vars = default_vars(X.m);
  Json eq = Json::array(), neq = Json::array();
  for (const auto& e : X.equations) eq.push_back(e.str(vars));
  for (const auto& e : X.inequations) neq.push_back(e.str(vars));
  return Json{{"q", X.base->size()}, {"m", X.m}, {"vars", vars}, {"equations", eq}, {"inequations", neq}};
}

Json to_json(const MotivicClass& c) {
  Json terms = Json::array();
  for (const auto& t : c.terms())
    terms.push_back(Json{{"coef", t.coef}, {"X", to_json(t.X)}, {"h", t.h.str(default_vars(t.X.m))}});
  return Json{{"lshift", c.lshift()}, {"terms", terms}};
}

Json to_json(const AlgebraElement& x) {
  const CyclicAlgebra& A = x.algebra();
  Json rows = Json::array();
  for (int i = 0; i < A.n(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < A.n(); ++j) row.push_back(to_json(x(i, j)));
    rows.push_back(row);
  }
  return Json{{"q", A.q()}, {"n", A.n()}, {"a", A.a()}, {"coeffs", rows}};
}

AlgebraElement algebra_element_from_json(const Json& j) {
  const Field& f = field_of_order(j.at("q").get<std::uint64_t>());
  const CyclicAlgebra& A = cyclic_algebra(f, j.at("n").get<int>(), j.at("a").get<int>());
  AlgebraElement x(A);
  const Json& rows = j.at("coeffs");
  if (rows.size() != static_cast<std::size_t>(A.n())) throw std::invalid_argument("algebra element: expected n rows");
  for (int i = 0; i < A.n(); ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (row.size() != static_cast<std::size_t>(A.n())) throw std::invalid_argument("algebra element: expected n columns");
    for (int k = 0; k < A.n(); ++k) x.set(i, k, rational_fn_from_json(f, row[static_cast<std::size_t>(k)]));
  }
  return x;
}

Json to_json(const PoissonReport& r) {
  return Json{{"lhs", to_json(r.lhs)},
              {"rhs", to_json(r.rhs)},
              {"equal", r.equal},
              {"points", r.points},
              {"dual_points", r.dual_points}};
}

Json to_json(const Case1Report& r) {
  return Json{{"D", r.D.str()},
              {"scalar", to_json(r.scalar)},
              {"transform_matches", r.transform_matches},
              {"lhs", to_json(r.lhs)},
              {"rhs", to_json(r.rhs)},
              {"equal", r.equal}};
}

Json to_json(const EulerSeries& s) {
  Json lhs = Json::array(), rhs = Json::array();
  for (const auto& v : s.lhs) lhs.push_back(to_json(v));
  for (const auto& v : s.rhs) rhs.push_back(to_json(v));
  return Json{{"lhs", lhs}, {"rhs", rhs}, {"equal", s.equal()}};
}

Json to_json(const TheoremAReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back(Json{{"pair_id", row.pair_id},
                        {"provenance", row.provenance},
                        {"charpoly", row.charpoly},
                        {"regular", row.regular},
                        {"value_D", to_json(row.value_D)},
                        {"value_Ddot", to_json(row.value_Ddot)},
                        {"equal", row.equal}});
  return Json{{"recipe", r.recipe}, {"M", r.M}, {"compared", r.compared}, {"ok", r.ok()}, {"rows", rows}};
}

}  // namespace fqm
