// Acceptance run: one PASS/FAIL line per criterion, with wall time against
// the allowed limit. Exit status is the number of failed criteria.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "fqm/serialize.hpp"

#ifndef FQM_CLI_PATH
#define FQM_CLI_PATH ""
#endif

using namespace fqm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

CycScalar integer(const Field& f, long v) { return CycScalar(f.p(), Rational(v)); }
RationalFn tfn(const Field& f) { return RationalFn(Poly(f, {0, 1})); }
Place quad(const Field& f) { return Place::finite(monic_irreducibles(f, 2)[0]); }
Place linear(const Field& f, Elem c) { return Place::finite(Poly(f, {f.neg(c), 1})); }

Outcome characters() {
  int checked = 0;
  for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {2, 3}, {3, 2}}) {
    const Field& f = make_field(p, e);
    CycScalar s = integer(f, 0);
    for (Elem x = 0; x < f.size(); ++x) s = s + f.psi(x);
    if (!s.is_zero()) return {false, "sum psi != 0 for q = " + std::to_string(f.size())};
    for (Elem x = 0; x < f.size(); ++x)
      for (Elem y = 0; y < f.size(); ++y) {
        if (f.psi(f.add(x, y)) != f.psi(x) * f.psi(y))
          return {false, "psi not additive for q = " + std::to_string(f.size())};
        ++checked;
      }
  }
  return {true, "q in {2,3,4,8,9}, " + std::to_string(checked) + " additivity pairs"};
}

Outcome local_inversion() {
  std::uint64_t deltas = 0;
  int windows = 0;
  for (int p : {2, 3}) {
    const Field& f = make_field(p, 1);
    for (const Place& u : {Place::infinity(f), linear(f, 0), quad(f)}) {
      for (int nu : {0, 2}) {
        PlaceData pd{u, nu};
        for (int N = 0; N <= 3; ++N)
          for (int M = nu; N + M <= 3; ++M) {
            if (N + M == 0) continue;
            TestFunction d = local_function(pd, {N, M});
            for (std::uint64_t i = 0; i < d.size(); ++i) {
              d[i] = integer(f, 1);
              TestFunction FF = fourier1(fourier1(d));
              if (FF.table() != reflect(d).table())
                return {false, "F(F(delta)) != delta(-x) at " + u.str() + " nu=" + std::to_string(nu) + " window (" +
                                   std::to_string(N) + "," + std::to_string(M) + ")"};
              d[i] = integer(f, 0);
              ++deltas;
            }
            ++windows;
          }
      }
    }
  }
  return {true, std::to_string(deltas) + " deltas over " + std::to_string(windows) + " (place, nu, window) cases"};
}

Outcome poisson() {
  std::uint64_t functions = 0, case1 = 0, case2 = 0;
  for (int p : {2, 3}) {
    const Field& f = make_field(p, 1);
    std::vector<Place> S{linear(f, 0), linear(f, 1), Place::infinity(f)};
    Poly t2t1(f, {1, 1, 1});
    if (is_irreducible(t2t1)) S.push_back(Place::finite(t2t1));
    SweepResult r = poisson_sweep(f, S, 1, 1);
    if (!r.ok()) return {false, std::to_string(r.failures) + " failures at q = " + std::to_string(p)};
    functions += r.functions;
    case1 += r.case1;
    case2 += r.case2;
  }
  const Field& f2 = make_field(2, 1);
  PoissonReport fx = poisson_report(case2_fixture(f2));
  if (!fx.equal || !fx.lhs.is_zero() || !fx.rhs.is_zero()) return {false, "case-2 fixture not 0 = 0"};
  std::ostringstream d;
  d << functions << " coset indicators (" << case1 << " meet K, " << case2 << " miss K); case-2 fixture 0 = 0";
  return {true, d.str()};
}

Outcome case1_scalar() {
  int checked = 0;
  for (int p : {2, 3}) {
    const Field& f = make_field(p, 1);
    Place inf = Place::infinity(f);
    std::vector<Divisor> Ds;
    Ds.emplace_back(f);
    Ds.push_back(Divisor(f).add(inf, 1));
    Ds.push_back(Divisor(f).add(linear(f, 0), 1));
    Ds.push_back(Divisor(f).add(inf, 2));
    Ds.push_back(Divisor(f).add(inf, 1).add(linear(f, 0), 1));
    Ds.push_back(Divisor(f).add(quad(f), 1));
    for (const auto& D : Ds) {
      Case1Report r = case1_report(D);
      Rational want = Rational::power(static_cast<std::int64_t>(f.size()), D.degree() + 1);
      if (!r.transform_matches || !r.equal || r.scalar != want || r.lhs != CycScalar(p, want))
        return {false, "D = " + D.str() + " at q = " + std::to_string(p)};
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " divisors of degree 0, 1, 2"};
}

Outcome delta_of_integers() {
  for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}}) {
    const Field& f = make_field(p, e);
    GlobalTestFunction one = integral_indicator(f, {{Place::infinity(f), {0, 0}}});
    if (delta_K(one) != integer(f, static_cast<long>(f.size())))
      return {false, "delta_K(1_O) != q at q = " + std::to_string(f.size())};
  }
  return {true, "delta_K(1_O) = q for q in {2,3,4}"};
}

Outcome euler() {
  int checked = 0;
  for (int p : {2, 3}) {
    const Field& f = make_field(p, 1);
    ConstructibleSet A1 = ConstructibleSet::affine(f, 1);
    ConstructibleSet Gm = A1;
    Gm.inequations.push_back(MPoly::variable(f, 1, 0));
    MPoly x = MPoly::variable(f, 1, 0);
    std::vector<EulerRecipe> recipes{{1, MPoly(f, 1)}, {0, MPoly(f, 1)}, {1, x}, {1, x * x + x}, {2, x}};
    for (const auto* X : {&A1, &Gm})
      for (const auto& a : recipes) {
        EulerSeries s = euler_product(*X, a, 4);
        if (s.lhs.size() != 5 || !s.equal())
          return {false, "series differ at q = " + std::to_string(p) + ", h = " + a.h.str({"x"})};
        ++checked;
      }
  }
  return {true, std::to_string(checked) + " (X, a) pairs to t^4"};
}

Outcome frobenius_norm() {
  const Field& f = make_field(2, 1);
  ConstructibleSet X = ConstructibleSet::affine(f, 1);
  MPoly x = MPoly::variable(f, 1, 0);
  std::vector<MPoly> hs{x, x * x + x, x.pow(3) + MPoly::constant(f, 1, 1)};
  int points = 0;
  for (const auto& P : closed_points(X, 3)) {
    if (P.degree < 2) continue;
    const Extension& ext = extension(f, P.degree);
    for (const auto& h : hs) {
      CycScalar v = orbit_norm_value(X, P, h);
      std::vector<Elem> y = P.rep;
      for (int k = 0; k < P.degree; ++k) {
        if (v != ext.top().psi(h.eval(ext, y.data())))
          return {false, "degree " + std::to_string(P.degree) + " point, h = " + h.str({"x"})};
        y[0] = ext.frob_q(y[0], 1);
      }
    }
    ++points;
  }
  if (points != 3) return {false, "expected 1 quadratic and 2 cubic points, got " + std::to_string(points)};
  return {true, "1 quadratic and 2 cubic points, 3 phases, all conjugates"};
}

Outcome division() {
  const Field& f = make_field(2, 1);
  const CyclicAlgebra& D = cyclic_algebra(f, 3, 1);
  std::uint64_t bad = w_additivity_violations(D, 4, 1000, 20240601);
  if (bad != 0) return {false, std::to_string(bad) + " w-additivity violations"};
  AlgebraElement s = AlgebraElement::s(D);
  RationalFn t = tfn(f);
  if (reduced_norm(s) != t) return {false, "Nrd(s) = " + reduced_norm(s).str()};
  std::vector<RationalFn> want{RationalFn(Poly(f)) - t, RationalFn(Poly(f)), RationalFn(Poly(f)), RationalFn(Poly(f, {1}))};
  if (reduced_char_poly(s) != want) return {false, "char poly of s = " + poly_str(reduced_char_poly(s))};
  return {true, "0 violations in 1000 pairs at depth 4; Nrd(s) = t; char poly " + poly_str(want)};
}

Outcome theorem_a() {
  const Field& f = make_field(2, 1);
  const CyclicAlgebra& D = cyclic_algebra(f, 3, 1);
  const CyclicAlgebra& Dd = cyclic_algebra(f, 3, 2);
  auto pairs = theorem_a_pairs(D, Dd);
  auto recipes = theorem_a_recipes(D);
  bool kinds[3] = {false, false, false};
  std::size_t rows = 0, minimum = pairs.size(), bs = 0, common = 0;
  for (const auto& m : pairs) (m.provenance == "bs-form" ? bs : common) += 1;
  for (const auto& r : recipes) {
    kinds[static_cast<int>(r.kind)] = true;
    TheoremAReport rep = theorem_a_report(D, Dd, r, pairs, 2);
    for (const auto& row : rep.rows)
      if (row.regular && !row.equal)
        return {false, rep.recipe + ": pair " + std::to_string(row.pair_id) + " gives " + row.value_D.str() + " vs " +
                           row.value_Ddot.str()};
    if (!rep.ok()) return {false, rep.recipe + " not ok"};
    minimum = std::min(minimum, rep.compared);
    rows += rep.compared;
  }
  if (!kinds[0] || !kinds[1] || !kinds[2]) return {false, "recipe kinds missing"};
  if (minimum < 20) return {false, "only " + std::to_string(minimum) + " regular semisimple pairs"};
  if (bs == 0 || common == 0) return {false, "pair list lacks a provenance"};
  return {true, std::to_string(recipes.size()) + " recipes x " + std::to_string(minimum) + " regular pairs (" +
                    std::to_string(bs) + " bs-form, " + std::to_string(common) + " L-common), " +
                    std::to_string(rows) + " equalities at window (0,2)"};
}

Outcome residue_theorem() {
  int checked = 0;
  for (int p : {2, 3}) {
    const Field& f = make_field(p, 1);
    Place inf = Place::infinity(f);
    std::vector<Place> P{inf, linear(f, 0), linear(f, 1), quad(f)};
    for (int code = 0; code < 256; ++code) {
      Divisor D(f);
      for (std::size_t i = 0; i < P.size(); ++i) D.add(P[i], (code >> (2 * i) & 3) - 1);
      if (D.degree() > 4) continue;
      for (const auto& x : rr_basis(D)) {
        Elem s = 0;
        Divisor dv = divisor_of(x);
        for (const auto& [u, n] : dv.terms()) s = f.add(s, residue(x, PlaceData::standard(u)).trace);
        if (dv[inf] == 0) s = f.add(s, residue(x, PlaceData::standard(inf)).trace);
        if (s != 0) return {false, "f = " + x.str() + " in L(" + D.str() + ")"};
        ++checked;
      }
    }
  }
  return {true, std::to_string(checked) + " basis functions over divisors of degree <= 4"};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  using cli::RunConfig;
  std::vector<RunConfig> configs;
  auto add = [&](RunConfig c) { configs.push_back(std::move(c)); };
  RunConfig c;
  c.command = "charsum";
  c.q = 3;
  c.h = "x^2";
  add(c);
  c = {};
  c.command = "euler";
  c.q = 2;
  c.h = "x";
  add(c);
  c = {};
  c.command = "local-fourier";
  c.q = 3;
  c.places = {"t^2+1"};
  add(c);
  c = {};
  c.command = "poisson";
  c.q = 2;
  c.places = {"0", "inf", "t^2+t+1"};
  add(c);
  c = {};
  c.command = "alg-check";
  c.samples = 300;
  c.seed = 7;
  add(c);
  c = {};
  c.command = "theorem-a";
  c.window = "0,1";
  add(c);
  std::regex floating(R"([0-9]\.[0-9]|[0-9][eE][+-][0-9]|\bnan\b)");
  for (const auto& cfg : configs) {
    for (const char* fmt : {"json", "csv"}) {
      RunConfig k = cfg;
      k.format = fmt;
      std::string a = cli::render(cli::run_command(k), fmt), b = cli::render(cli::run_command(k), fmt);
      if (a != b) return {false, cfg.command + " " + fmt + " reports differ"};
      std::string scan = std::regex_replace(a, std::regex(kLibraryVersion), "");
      if (std::regex_search(scan, floating)) return {false, cfg.command + " report contains a floating-point value"};
    }
  }
  std::string exe = FQM_CLI_PATH;
  if (exe.empty()) return {false, "CLI path not configured"};
  std::string dir = "acceptance_cli";
  std::filesystem::create_directories(dir);
  const char* args = " theorem-a --window 0,1 --recipe charpoly";
  for (int i = 0; i < 2; ++i) {
    std::string cmd = exe + args + " > " + dir + "/run" + std::to_string(i) + ".json";
    if (std::system(cmd.c_str()) != 0) return {false, "CLI run failed: " + cmd};
  }
  std::string r0 = slurp(dir + "/run0.json"), r1 = slurp(dir + "/run1.json");
  RunConfig k;
  k.command = "theorem-a";
  k.window = "0,1";
  k.recipe = "charpoly";
  if (r0.empty() || r0 != r1) return {false, "CLI reports differ between runs"};
  if (r0 != cli::render(cli::run_command(k), "json")) return {false, "CLI report differs from in-process report"};
  return {true, std::to_string(configs.size()) + " configs x {json, csv} repeated in process; CLI runs byte-identical"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: none
    std::function<Outcome()> run;
  };
  std::vector<Criterion> all{
      {1, "character relations", 1, characters},
      {2, "local Fourier inversion", 10, local_inversion},
      {3, "Poisson summation", 60, poisson},
      {4, "Case-1 scalar", 10, case1_scalar},
      {5, "rational-point functional", 0, delta_of_integers},
      {6, "Euler product", 30, euler},
      {7, "Frobenius/norm compatibility", 0, frobenius_norm},
      {8, "division structure", 30, division},
      {9, "Theorem A desk verification", 600, theorem_a},
      {10, "global residue theorem", 0, residue_theorem},
      {11, "determinism", 0, determinism},
  };
  int failed = 0;
  for (const auto& c : all) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    bool in_time = c.limit_s == 0 || ms <= static_cast<long long>(c.limit_s * 1000);
    bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::ostringstream line;
    line << "criterion " << c.id << " [" << c.name << "]: " << (pass ? "PASS" : "FAIL") << " (" << ms << " ms";
    if (c.limit_s > 0) line << ", limit " << static_cast<long long>(c.limit_s * 1000) << " ms";
    line << ") " << o.detail;
    if (!in_time) line << "; over time limit";
    std::cout << line.str() << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed;
}
