#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

namespace fqm::cli {

namespace {

class Budget {
 public:
  explicit Budget(int seconds) : limit_(seconds), start_(std::chrono::steady_clock::now()) {}
  void check(const std::string& stage) const {
    if (limit_ <= 0) return;
    auto spent = std::chrono::steady_clock::now() - start_;
    if (spent > std::chrono::seconds(limit_))
      throw BudgetError("--timeout " + std::to_string(limit_) + "s exceeded during " + stage);
  }

 private:
  int limit_;
  std::chrono::steady_clock::time_point start_;
};

void check_enum(std::uint64_t q, int exponent, std::uint64_t cap, const std::string& what) {
  std::uint64_t v = 1;
  for (int i = 0; i < exponent; ++i) {
    if (v > cap / q) throw BudgetError(what + ": " + std::to_string(q) + "^" + std::to_string(exponent) +
                                       " points exceed --max-enum " + std::to_string(cap));
    v *= q;
  }
}

const Field& field_for(const RunConfig& c) {
  const Field* f = nullptr;
  try {
    f = &field_of_order(c.q);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--q: ") + e.what());
  }
  if (c.p != 0 && c.p != f->p())
    throw UsageError("--p " + std::to_string(c.p) + " is not the characteristic of F_" + std::to_string(c.q));
  return *f;
}

MPoly parse_flag(const Field& f, const std::string& text, const std::vector<std::string>& vars, const std::string& flag) {
  try {
    return parse_mpoly(f, text, vars);
  } catch (const ParseError& e) {
    throw UsageError(flag + " \"" + text + "\": " + e.what());
  }
}

ConstructibleSet parse_set(const Field& f, const RunConfig& c) {
  if (c.m < 1) throw UsageError("--m must be positive");
  ConstructibleSet X = ConstructibleSet::affine(f, c.m);
  auto vars = default_vars(c.m);
  for (const auto& e : c.eq) X.equations.push_back(parse_flag(f, e, vars, "--eq"));
  for (const auto& e : c.neq) X.inequations.push_back(parse_flag(f, e, vars, "--neq"));
  return X;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

TestFunction read_test_function(const std::string& path) {
  Json j = read_json(path);
  try {
    return test_function_from_json(j);
  } catch (const Json::exception& e) {
    throw UsageError(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::string support_str(const std::vector<PlaceWindow>& s) {
  std::string out;
  for (const auto& pw : s) {
    if (!out.empty()) out += ";";
    out += pw.place.place.str() + "(" + std::to_string(pw.window.N) + "," + std::to_string(pw.window.M) + ")";
  }
  return out.empty() ? "-" : out;
}

std::string window_str(Window w) { return "(" + std::to_string(w.N) + "," + std::to_string(w.M) + ")"; }

RunResult charsum(const RunConfig& c, const Budget& budget) {
  const Field& f = field_for(c);
  ConstructibleSet X = parse_set(f, c);
  auto vars = default_vars(c.m);
  MPoly h = parse_flag(f, c.h, vars, "--h");
  int D = c.precision > 0 ? c.precision : 3;
  check_enum(c.q, D * c.m, c.max_enum, "charsum");
  MotivicClass cls = MotivicClass::generator(X, h);
  RunResult r;
  r.csv_header = {"d", "value"};
  Json values = Json::array();
  for (int d = 1; d <= D; ++d) {
    CycScalar v = specialize(cls, d);
    values.push_back(Json{{"d", d}, {"value", fqm::to_json(v)}, {"text", v.str()}});
    r.csv_rows.push_back({std::to_string(d), v.str()});
    budget.check("charsum d = " + std::to_string(d));
  }
  r.report = Json{{"set", fqm::to_json(X)}, {"h", h.str(vars)}, {"class", fqm::to_json(cls)}, {"values", values}};
  r.ok = true;
  return r;
}

RunResult euler(const RunConfig& c, const Budget& budget) {
  const Field& f = field_for(c);
  ConstructibleSet X = parse_set(f, c);
  auto vars = default_vars(c.m);
  MPoly h = parse_flag(f, c.h, vars, "--h");
  int B = c.precision > 0 ? c.precision : 4;
  check_enum(c.q, B * c.m, c.max_enum, "euler");
  EulerSeries s = euler_product(X, {c.coef, h}, B);
  budget.check("euler");
  RunResult r;
  r.csv_header = {"k", "lhs", "rhs", "equal"};
  for (std::size_t k = 0; k < s.lhs.size(); ++k)
    r.csv_rows.push_back({std::to_string(k), s.lhs[k].str(), s.rhs[k].str(), s.lhs[k] == s.rhs[k] ? "true" : "false"});
  r.report = Json{{"set", fqm::to_json(X)},
                  {"recipe", Json{{"coef", c.coef}, {"h", h.str(vars)}}},
                  {"B", B},
                  {"series", fqm::to_json(s)}};
  r.ok = s.equal();
  return r;
}

RunResult local_fourier(const RunConfig& c, const Budget& budget) {
  RunResult r;
  if (!c.in.empty()) {
    TestFunction phi = read_test_function(c.in);
    if (phi.size() > c.max_enum) throw BudgetError("local-fourier: input table exceeds --max-enum");
    TestFunction F = fourier_multi(phi);
    budget.check("local-fourier transform");
    TestFunction FF = fourier_multi(F);
    bool inversion = FF.table() == reflect(phi).table();
    r.csv_header = {"index", "value"};
    for (std::uint64_t i = 0; i < F.size(); ++i) r.csv_rows.push_back({std::to_string(i), F[i].str()});
    r.report = Json{{"input", support_str(phi.support())},
                    {"dual", support_str(F.support())},
                    {"transform", fqm::to_json(F)},
                    {"inversion", inversion}};
    r.ok = inversion;
    return r;
  }
  const Field& f = field_for(c);
  if (c.places.size() != 1) throw UsageError("local-fourier: give exactly one --places entry or --in");
  PlaceData pd = PlaceData::standard(parse_place(f, c.places[0]));
  if (c.nu >= 0) pd.nu = c.nu;
  std::vector<Window> windows;
  if (!c.window.empty()) {
    windows.push_back(parse_window(c.window));
  } else {
    int L = c.precision > 0 ? c.precision : 3;
    for (int N = 0; N <= L; ++N)
      for (int M = pd.nu; N + M <= L; ++M)
        if (N + M > 0) windows.push_back({N, M});
  }
  r.csv_header = {"place", "nu", "window", "dual", "deltas", "failures"};
  Json rows = Json::array();
  std::uint64_t failures = 0;
  for (Window w : windows) {
    check_enum(f.size(), pd.degree() * w.length(), c.max_enum, "local-fourier " + window_str(w));
    TestFunction d = local_function(pd, w);
    Window dw;
    try {
      dw = dual_window(pd, w);
    } catch (const std::exception& e) {
      throw UsageError(std::string("local-fourier: ") + e.what());
    }
    std::uint64_t bad = 0;
    for (std::uint64_t i = 0; i < d.size(); ++i) {
      d[i] = CycScalar(f.p(), Rational(1));
      TestFunction FF = fourier1(fourier1(d));
      if (FF.table() != reflect(d).table()) ++bad;
      d[i] = CycScalar(f.p(), Rational(0));
    }
    budget.check("local-fourier " + window_str(w));
    failures += bad;
    rows.push_back(Json{{"window", Json::array({w.N, w.M})},
                        {"dual", Json::array({dw.N, dw.M})},
                        {"deltas", d.size()},
                        {"failures", bad}});
    r.csv_rows.push_back({pd.place.str(), std::to_string(pd.nu), window_str(w), window_str(dw), std::to_string(d.size()),
                          std::to_string(bad)});
  }
  r.report = Json{{"place", fqm::to_json(pd.place)}, {"nu", pd.nu}, {"windows", rows}, {"failures", failures}};
  r.ok = failures == 0;
  return r;
}

RunResult poisson(const RunConfig& c, const Budget& budget) {
  RunResult r;
  std::string mode = c.mode.empty() ? (c.in.empty() ? "sweep" : "file") : c.mode;
  auto single = [&](const TestFunction& phi, const std::string& label) {
    PoissonReport p;
    try {
      p = poisson_report(phi, false, c.max_enum);
    } catch (const std::length_error& e) {
      throw BudgetError(e.what());
    }
    budget.check("poisson");
    r.csv_header = {"function", "lhs", "rhs", "equal"};
    r.csv_rows.push_back({label, p.lhs.str(), p.rhs.str(), p.equal ? "true" : "false"});
    r.report = Json{{"mode", mode}, {"support", support_str(phi.support())}, {"report", fqm::to_json(p)}};
    r.ok = p.equal;
  };
  if (mode == "file") {
    if (c.in.empty()) throw UsageError("poisson --mode file needs --in");
    single(read_test_function(c.in), c.in);
    return r;
  }
  const Field& f = field_for(c);
  if (mode == "case2") {
    single(case2_fixture(f), "case2");
    return r;
  }
  if (mode == "case1") {
    Divisor D(f);
    for (const auto& s : c.places) {
      int k = 1;
      Place u = parse_place(f, s, &k);
      D.add(u, k);
    }
    Case1Report rep = case1_report(D);
    budget.check("poisson case1");
    r.csv_header = {"D", "scalar", "transform_matches", "lhs", "rhs", "equal"};
    r.csv_rows.push_back({D.str(), rep.scalar.str(), rep.transform_matches ? "true" : "false", rep.lhs.str(),
                          rep.rhs.str(), rep.equal ? "true" : "false"});
    r.report = Json{{"mode", mode}, {"report", fqm::to_json(rep)}};
    r.ok = rep.transform_matches && rep.equal;
    return r;
  }
  if (mode != "sweep") throw UsageError("poisson: unknown --mode " + mode);
  if (c.places.empty()) throw UsageError("poisson sweep: --places is required");
  std::vector<Place> places;
  for (const auto& s : c.places) places.push_back(parse_place(f, s));
  Window w = parse_window(c.window.empty() ? "1,1" : c.window);
  SweepResult s;
  try {
    s = poisson_sweep(f, places, w.N, w.M, c.max_enum);
  } catch (const std::length_error& e) {
    throw BudgetError(e.what());
  }
  budget.check("poisson sweep");
  r.csv_header = {"support", "functions", "case1", "case2", "failures"};
  Json configs = Json::array();
  for (const auto& cfg : s.configs) {
    std::string label;
    for (const auto& [u, win] : cfg.support) {
      if (!label.empty()) label += ";";
      label += u.str() + window_str(win);
    }
    if (label.empty()) label = "-";
    configs.push_back(Json{{"support", label},
                           {"functions", cfg.functions},
                           {"case1", cfg.case1},
                           {"case2", cfg.case2},
                           {"failures", cfg.failures}});
    r.csv_rows.push_back({label, std::to_string(cfg.functions), std::to_string(cfg.case1), std::to_string(cfg.case2),
                          std::to_string(cfg.failures)});
  }
  r.report = Json{{"mode", mode},
                  {"max_window", Json::array({w.N, w.M})},
                  {"functions", s.functions},
                  {"case1", s.case1},
                  {"case2", s.case2},
                  {"failures", s.failures},
                  {"configs", configs}};
  r.ok = s.ok();
  return r;
}

const CyclicAlgebra& algebra_for(const Field& f, int n, int a) {
  try {
    return cyclic_algebra(f, n, a);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

RunResult alg_check(const RunConfig& c, const Budget& budget) {
  const Field& f = field_for(c);
  const CyclicAlgebra& A = algebra_for(f, c.n, c.a);
  int depth = c.precision > 0 ? c.precision : 4;
  RationalFn t(Poly(f, {0, 1}));
  AlgebraElement s = AlgebraElement::s(A);
  RunResult r;
  r.csv_header = {"check", "value", "ok"};
  Json checks = Json::array();
  auto add = [&](const std::string& name, const std::string& value, bool ok) {
    checks.push_back(Json{{"check", name}, {"value", value}, {"ok", ok}});
    r.csv_rows.push_back({name, value, ok ? "true" : "false"});
  };

  AlgebraElement sn = AlgebraElement::one(A);
  for (int i = 0; i < A.n(); ++i) sn = sn * s;
  add("s^n = t", sn.str(), sn == AlgebraElement::scalar(A, t));
  bool rel = true;
  for (Elem d : A.basis()) {
    AlgebraElement u = AlgebraElement::from_L(A, RationalFn(Poly(A.L(), {d})));
    AlgebraElement gu = AlgebraElement::from_L(A, RationalFn(Poly(A.L(), {A.g(d)})));
    rel = rel && s * u == gu * s;
  }
  add("s d_j = g(d_j) s", std::to_string(A.basis().size()) + " basis elements", rel);

  auto cp = reduced_char_poly(s);
  std::vector<RationalFn> expect(static_cast<std::size_t>(A.n()) + 1, RationalFn(Poly(f)));
  expect.front() = RationalFn(Poly(f)) - t;
  expect.back() = RationalFn(Poly(f, {1}));
  add("charpoly(s) = X^n - t", poly_str(cp), cp == expect);
  RationalFn nrd = reduced_norm(s);
  add("Nrd(s) = t", nrd.str(), nrd == t);
  add("s regular semisimple", is_regular_semisimple(s) ? "yes" : "no", is_regular_semisimple(s));
  budget.check("alg-check relations");

  check_enum(c.q, A.n() * A.n() * depth, std::uint64_t{1} << 62, "alg-check");
  std::uint64_t bad = w_additivity_violations(A, depth, c.samples, c.seed);
  budget.check("alg-check w additivity");
  add("w(xy) = w(x) + w(y)",
      std::to_string(bad) + " violations in " + std::to_string(c.samples) + " pairs at depth " + std::to_string(depth),
      bad == 0);

  r.report = Json{{"algebra", A.str()}, {"depth", depth}, {"samples", c.samples}, {"checks", checks}};
  r.ok = true;
  for (const auto& ch : checks) r.ok = r.ok && ch["ok"].get<bool>();
  return r;
}

RunResult theorem_a(const RunConfig& c, const Budget& budget) {
  const Field& f = field_for(c);
  const CyclicAlgebra& D = algebra_for(f, c.n, c.a);
  const CyclicAlgebra& Dd = algebra_for(f, c.n, c.adot);
  Window w = parse_window(c.window.empty() ? "0,2" : c.window);
  if (w.N != 0 || w.M < 1) throw UsageError("theorem-a: --window must be 0,M with M >= 1");
  Pairing pairing;
  if (c.pairing == "trace")
    pairing = Pairing::Trace;
  else if (c.pairing == "dot")
    pairing = Pairing::DotProduct;
  else
    throw UsageError("theorem-a: --pairing must be trace or dot");
  check_enum(c.q, c.n * c.n * w.M, c.max_enum, "theorem-a");

  std::vector<InvariantRecipe> recipes;
  for (const auto& rc : theorem_a_recipes(D, std::min(2, w.M))) {
    bool keep = c.recipe == "all" || (c.recipe == "constant" && rc.kind == InvariantRecipe::Kind::Constant) ||
                (c.recipe == "trace" && rc.kind == InvariantRecipe::Kind::TraceCharacter) ||
                (c.recipe == "charpoly" && rc.kind == InvariantRecipe::Kind::CharPolyCoset);
    if (keep) recipes.push_back(rc);
  }
  if (recipes.empty()) throw UsageError("theorem-a: --recipe must be all, constant, trace or charpoly");
  auto pairs = theorem_a_pairs(D, Dd);

  RunResult r;
  r.csv_header = {"recipe", "pair_id", "provenance", "charpoly", "regular", "value_D", "value_Ddot", "equal"};
  Json pair_list = Json::array();
  for (std::size_t i = 0; i < pairs.size(); ++i)
    pair_list.push_back(Json{{"pair_id", i}, {"provenance", pairs[i].provenance}, {"c", pairs[i].c.str()},
                             {"cdot", pairs[i].cdot.str()}});
  Json reports = Json::array();
  r.ok = true;
  std::size_t regular = 0;
  for (const auto& rc : recipes) {
    TheoremAReport rep = theorem_a_report(D, Dd, rc, pairs, w.M, pairing);
    budget.check("theorem-a " + rep.recipe);
    regular = rep.compared;
    r.ok = r.ok && rep.ok();
    for (const auto& row : rep.rows)
      r.csv_rows.push_back({rep.recipe, std::to_string(row.pair_id), row.provenance, row.charpoly,
                            row.regular ? "true" : "false", row.value_D.str(), row.value_Ddot.str(),
                            row.equal ? "true" : "false"});
    reports.push_back(fqm::to_json(rep));
  }
  r.ok = r.ok && regular > 0;
  r.report = Json{{"D", D.str()},
                  {"Ddot", Dd.str()},
                  {"M", w.M},
                  {"pairing", c.pairing},
                  {"pairs", pair_list},
                  {"regular_pairs", regular},
                  {"reports", reports}};
  return r;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

Json to_json(const RunConfig& c) {
  return Json{{"command", c.command}, {"q", c.q},         {"p", c.p},           {"n", c.n},
              {"a", c.a},             {"adot", c.adot},   {"m", c.m},           {"places", c.places},
              {"window", c.window},   {"nu", c.nu},       {"precision", c.precision},
              {"samples", c.samples}, {"seed", c.seed},   {"eq", c.eq},         {"neq", c.neq},
              {"h", c.h},             {"coef", c.coef},   {"mode", c.mode},     {"recipe", c.recipe},
              {"pairing", c.pairing}, {"in", c.in},       {"out", c.out},       {"format", c.format},
              {"max_enum", c.max_enum}, {"timeout", c.timeout}};
}

Place parse_place(const Field& f, const std::string& spec, int* multiplicity) {
  std::string s = spec;
  if (auto colon = s.find(':'); colon != std::string::npos) {
    std::string k = s.substr(colon + 1);
    s = s.substr(0, colon);
    try {
      std::size_t used = 0;
      int v = std::stoi(k, &used);
      if (used != k.size()) throw std::invalid_argument(k);
      if (multiplicity) *multiplicity = v;
    } catch (const std::exception&) {
      throw UsageError("place \"" + spec + "\": bad multiplicity");
    }
  }
  if (s == "inf") return Place::infinity(f);
  try {
    std::size_t used = 0;
    long c = std::stol(s, &used);
    if (used == s.size()) {
      long r = ((c % f.p()) + f.p()) % f.p();
      std::vector<int> digit{static_cast<int>(r)};
      return Place::finite(Poly(f, std::vector<Elem>{f.neg(f.from_coeffs(digit)), 1}));
    }
  } catch (const std::logic_error&) {
  }
  MPoly m = parse_flag(f, s, {"t"}, "place");
  std::vector<Elem> coeffs(static_cast<std::size_t>(std::max(m.total_degree(), 0)) + 1, 0);
  for (const auto& [e, v] : m.terms()) coeffs[static_cast<std::size_t>(e[0])] = v;
  try {
    return Place::finite(Poly(f, coeffs));
  } catch (const std::invalid_argument& e) {
    throw UsageError("place \"" + spec + "\": " + e.what());
  }
}

Window parse_window(const std::string& spec) {
  std::istringstream in(spec);
  Window w;
  char comma = 0;
  if (!(in >> w.N >> comma >> w.M) || comma != ',' || !in.eof() || w.N < 0 || w.M < 0)
    throw UsageError("window \"" + spec + "\": expected N,M with N, M >= 0");
  return w;
}

RunResult run_command(const RunConfig& config) {
  Budget budget(config.timeout);
  RunResult r;
  if (config.command == "charsum")
    r = charsum(config, budget);
  else if (config.command == "euler")
    r = euler(config, budget);
  else if (config.command == "local-fourier")
    r = local_fourier(config, budget);
  else if (config.command == "poisson")
    r = poisson(config, budget);
  else if (config.command == "alg-check")
    r = alg_check(config, budget);
  else if (config.command == "theorem-a")
    r = theorem_a(config, budget);
  else
    throw UsageError("unknown command " + config.command);
  Json result = std::move(r.report);
  r.report = Json{{"tool", "fqm"}, {"version", kLibraryVersion}, {"config", to_json(config)}, {"result", result},
                  {"ok", r.ok}};
  return r;
}

std::string render(const RunResult& r, const std::string& format) {
  if (format == "json") return r.report.dump(2) + "\n";
  if (format != "csv") throw UsageError("--format must be json or csv");
  std::string out = "# fqm " + std::string(kLibraryVersion) + "\n# config " + r.report["config"].dump() + "\n# ok " +
                    (r.ok ? "true" : "false") + "\n";
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + csv_field(cells[i]);
    out += "\n";
  };
  line(r.csv_header);
  for (const auto& row : r.csv_rows) line(row);
  return out;
}

}  // namespace fqm::cli
