#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fqm/field.hpp"

namespace fqm {

/// Sparse multivariate polynomial over a finite field F_q.
class MPoly {
 public:
  using Exponents = std::vector<int>;

  MPoly() = default;
  MPoly(const Field& f, int nvars) : f_(&f), n_(nvars) {}
  static MPoly constant(const Field& f, int nvars, Elem c);
  static MPoly variable(const Field& f, int nvars, int i);

  const Field& field() const { return *f_; }
  int nvars() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exponents, Elem>& terms() const { return terms_; }
  int total_degree() const;

  void add_term(const Exponents& e, Elem c);
  MPoly operator-() const;
  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly& operator*=(const MPoly& o);
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(MPoly a, const MPoly& b) { return a *= b; }
  friend bool operator==(const MPoly& a, const MPoly& b) { return a.n_ == b.n_ && a.terms_ == b.terms_; }
  MPoly pow(int k) const;

  /// The same polynomial in `total` variables, its own occupying
  /// [offset, offset + nvars()).
  MPoly relocate(int offset, int total) const;

  /// Value at a point over the top field of ext (coefficients are embedded
  /// from ext.base(), which must be this polynomial's field).
  Elem eval(const Extension& ext, const Elem* point) const;
  Elem eval(const Elem* point) const;

  std::string str(const std::vector<std::string>& vars) const;

 private:
  void check(const MPoly& o) const;

  const Field* f_ = nullptr;
  int n_ = 0;
  std::map<Exponents, Elem> terms_;
};

/// Default variable names: "x" for one variable, else x1..xm.
std::vector<std::string> default_vars(int m);

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int column);
  int line;
  int column;
};

/// Parse a polynomial in the given variables. Integers denote prime-field
/// elements; for a non-prime field the symbol `a` denotes the root of the
/// field modulus. Grammar: sums and differences of products of powers, with
/// parentheses and unary minus. Errors report 1-based line and column.
MPoly parse_mpoly(const Field& f, const std::string& text, const std::vector<std::string>& vars);

}  // namespace fqm
