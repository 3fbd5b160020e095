#include "fqm/mpoly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace fqm {

MPoly MPoly::constant(const Field& f, int nvars, Elem c) {
  MPoly r(f, nvars);
  r.add_term(Exponents(static_cast<std::size_t>(nvars), 0), c);
  return r;
}

MPoly MPoly::variable(const Field& f, int nvars, int i) {
  if (i < 0 || i >= nvars) throw std::out_of_range("MPoly: variable index");
  MPoly r(f, nvars);
  Exponents e(static_cast<std::size_t>(nvars), 0);
  e[static_cast<std::size_t>(i)] = 1;
  r.add_term(e, 1);
  return r;
}

int MPoly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

void MPoly::check(const MPoly& o) const {
  if (f_ != o.f_ || n_ != o.n_) throw std::invalid_argument("MPoly: field or arity mismatch");
}

void MPoly::add_term(const Exponents& e, Elem c) {
  if (static_cast<int>(e.size()) != n_) throw std::invalid_argument("MPoly: exponent length");
  if (c == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
    return;
  }
  it->second = f_->add(it->second, c);
  if (it->second == 0) terms_.erase(it);
}

MPoly MPoly::operator-() const {
  MPoly r = *this;
  for (auto& [e, c] : r.terms_) c = f_->neg(c);
  return r;
}

MPoly& MPoly::operator+=(const MPoly& o) {
  check(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) { return *this += -o; }

MPoly& MPoly::operator*=(const MPoly& o) {
  check(o);
  MPoly r(*f_, n_);
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : o.terms_) {
      Exponents e = e1;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += e2[i];
      r.add_term(e, f_->mul(c1, c2));
    }
  }
  return *this = std::move(r);
}

MPoly MPoly::pow(int k) const {
  MPoly r = constant(*f_, n_, 1);
  for (int i = 0; i < k; ++i) r *= *this;
  return r;
}

MPoly MPoly::relocate(int offset, int total) const {
  if (offset < 0 || offset + n_ > total) throw std::invalid_argument("MPoly: relocate out of range");
  MPoly r(*f_, total);
  for (const auto& [e, c] : terms_) {
    Exponents ne(static_cast<std::size_t>(total), 0);
    std::copy(e.begin(), e.end(), ne.begin() + offset);
    r.add_term(ne, c);
  }
  return r;
}

Elem MPoly::eval(const Extension& ext, const Elem* point) const {
  if (&ext.base() != f_) throw std::invalid_argument("MPoly: extension base mismatch");
  const Field& F = ext.top();
  Elem v = 0;
  for (const auto& [e, c] : terms_) {
    Elem m = ext.embed(c);
    for (std::size_t i = 0; i < e.size() && m != 0; ++i)
      if (e[i] != 0) m = F.mul(m, F.pow(point[i], e[i]));
    v = F.add(v, m);
  }
  return v;
}

Elem MPoly::eval(const Elem* point) const {
  Elem v = 0;
  for (const auto& [e, c] : terms_) {
    Elem m = c;
    for (std::size_t i = 0; i < e.size() && m != 0; ++i)
      if (e[i] != 0) m = f_->mul(m, f_->pow(point[i], e[i]));
    v = f_->add(v, m);
  }
  return v;
}

std::string MPoly::str(const std::vector<std::string>& vars) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    if (!first) os << " + ";
    first = false;
    bool has_var = std::any_of(e.begin(), e.end(), [](int x) { return x != 0; });
    bool wrote = false;
    if (c != 1 || !has_var) {
      if (f_->degree() == 1) {
        os << c;
      } else {
        // Write the coefficient as a polynomial in the generator a.
        auto cs = f_->coeffs(c);
        std::vector<std::string> parts;
        for (std::size_t i = 0; i < cs.size(); ++i) {
          if (cs[i] == 0) continue;
          std::string s = i == 0 ? std::to_string(cs[i]) : (cs[i] == 1 ? "" : std::to_string(cs[i]) + "*") + "a" + (i > 1 ? "^" + std::to_string(i) : "");
          parts.push_back(s);
        }
        os << '(';
        for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "+" : "") << parts[i];
        os << ')';
      }
      wrote = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (wrote) os << '*';
      os << vars.at(i);
      if (e[i] > 1) os << '^' << e[i];
      wrote = true;
    }
  }
  return os.str();
}

std::vector<std::string> default_vars(int m) {
  if (m == 1) return {"x"};
  std::vector<std::string> v;
  for (int i = 1; i <= m; ++i) v.push_back("x" + std::to_string(i));
  return v;
}

ParseError::ParseError(const std::string& msg, int l, int c)
    : std::runtime_error("parse error at line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg),
      line(l),
      column(c) {}

namespace {

class Parser {
 public:
  Parser(const Field& f, const std::string& s, const std::vector<std::string>& vars) : f_(f), s_(s), vars_(vars) {}

  MPoly parse() {
    MPoly r = expr();
    skip();
    if (pos_ < s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return r;
  }

 private:
  int n() const { return static_cast<int>(vars_.size()); }

  [[noreturn]] void fail(const std::string& msg) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  MPoly expr() {
    MPoly r = term();
    while (true) {
      if (accept('+')) {
        r += term();
      } else if (accept('-')) {
        r -= term();
      } else {
        return r;
      }
    }
  }

  MPoly term() {
    MPoly r = factor();
    while (accept('*')) r *= factor();
    return r;
  }

  MPoly factor() {
    if (accept('-')) return -factor();
    MPoly b = base();
    if (accept('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      int k = std::stoi(s_.substr(start, pos_ - start));
      b = b.pow(k);
    }
    return b;
  }

  MPoly base() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      MPoly r = expr();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      long v = std::stol(s_.substr(start, pos_ - start)) % f_.p();
      return MPoly::constant(f_, n(), f_.from_int(v));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      for (int i = 0; i < n(); ++i)
        if (vars_[static_cast<std::size_t>(i)] == name) return MPoly::variable(f_, n(), i);
      if (name == "a" && f_.degree() > 1) return MPoly::constant(f_, n(), static_cast<Elem>(f_.p()));
      pos_ = start;
      fail("unknown symbol '" + name + "'");
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  const Field& f_;
  const std::string& s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

MPoly parse_mpoly(const Field& f, const std::string& text, const std::vector<std::string>& vars) {
  return Parser(f, text, vars).parse();
}

}  // namespace fqm
