#pragma once

#include <string>

#include "fqm/algebra.hpp"
#include "fqm/global.hpp"
#include "fqm/motivic.hpp"
#include "json.hpp"

namespace fqm {

inline constexpr const char* kLibraryVersion = "0.1.0";

/// Keys keep insertion order, so dumps are byte-stable.
using Json = nlohmann::ordered_json;

/// The registered F_q; throws std::invalid_argument unless q is a prime power.
const Field& field_of_order(std::uint64_t q);

/// [numerator, denominator]
Json to_json(const Rational& r);
Rational rational_from_json(const Json& j);

/// {"p": p, "coeffs": [[num, den], ...]} in the basis 1, zeta, ..., zeta^{p-2}.
Json to_json(const CycScalar& v);
CycScalar cyc_from_json(const Json& j);

/// Coefficient sequence over F_p.
Json elem_to_json(const Field& f, Elem x);
Elem elem_from_json(const Field& f, const Json& j);

/// Coefficients from t^0 up, each an element.
Json to_json(const Poly& p);
Poly poly_from_json(const Field& f, const Json& j);
/// {"num": poly, "den": poly}
Json to_json(const RationalFn& x);
RationalFn rational_fn_from_json(const Field& f, const Json& j);

/// "inf" or the coefficient list of the monic irreducible.
Json to_json(const Place& u);
Place place_from_json(const Field& f, const Json& j);

/// {q, p, places: [{place, nu, N, M}], arity, table: [CycScalar]} with the
/// table in jet-index order.
Json to_json(const TestFunction& phi);
/// nu defaults to the value for omega = dt.
TestFunction test_function_from_json(const Json& j);

Json to_json(const ConstructibleSet& X);
Json to_json(const MotivicClass& c);

/// {q, n, a, coeffs: n x n table of rational functions, row i for s^i}.
Json to_json(const AlgebraElement& x);
AlgebraElement algebra_element_from_json(const Json& j);

Json to_json(const PoissonReport& r);
Json to_json(const Case1Report& r);
Json to_json(const EulerSeries& s);
/// {recipe, M, compared, ok, rows: [{pair_id, provenance, charpoly, regular,
/// value_D, value_Ddot, equal}]}
Json to_json(const TheoremAReport& r);

}  // namespace fqm
