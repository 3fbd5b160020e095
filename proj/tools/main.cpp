#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

using fqm::cli::RunConfig;

namespace {

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--q", c.q, "field size, a prime power")->capture_default_str();
  sub->add_option("--p", c.p, "characteristic, checked against --q");
  sub->add_option("--n", c.n, "degree of the cyclic algebra")->capture_default_str();
  sub->add_option("--places", c.places, "places: inf, an integer c for t - c, or a monic irreducible in t")
      ->delimiter(',');
  sub->add_option("--window", c.window, "jet window N,M");
  sub->add_option("--precision", c.precision, "series or degree bound (command default when 0)");
  sub->add_option("--samples", c.samples, "random samples")->capture_default_str();
  sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
  sub->add_option("--in", c.in, "input test function (JSON)");
  sub->add_option("--out", c.out, "report path (stdout when absent)");
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  sub->add_option("--max-enum", c.max_enum, "enumeration budget")->capture_default_str();
  sub->add_option("--timeout", c.timeout, "time budget in seconds, 0 for none")->capture_default_str();
}

void add_set(CLI::App* sub, RunConfig& c) {
  sub->add_option("--m", c.m, "number of variables")->capture_default_str();
  sub->add_option("--eq", c.eq, "equation f = 0 (repeatable)");
  sub->add_option("--neq", c.neq, "inequation g != 0 (repeatable)");
  sub->add_option("--h", c.h, "phase polynomial")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact character sums, Fourier analysis over F_q(t) and cyclic algebras"};
  app.set_help_flag("--help", "print this help and exit");
  app.set_version_flag("--version", std::string(fqm::kLibraryVersion));
  app.require_subcommand(1);
  RunConfig c;

  auto* charsum = app.add_subcommand("charsum", "sum of psi(h) over X(F_{q^d}) for d = 1..precision");
  add_common(charsum, c);
  add_set(charsum, c);

  auto* euler = app.add_subcommand("euler", "closed-point Euler product against the Frobenius series");
  add_common(euler, c);
  add_set(euler, c);
  euler->add_option("--coef", c.coef, "a(v) = coef psi(Tr h)")->capture_default_str();

  auto* local = app.add_subcommand("local-fourier", "Fourier inversion on the delta basis or on --in");
  add_common(local, c);
  local->add_option("--nu", c.nu, "conductor exponent (default: omega = dt)");

  auto* poisson = app.add_subcommand("poisson", "Poisson summation over F_q(t)");
  add_common(poisson, c);
  poisson->add_option("--mode", c.mode, "sweep, file, case1 or case2")
      ->check(CLI::IsMember({"sweep", "file", "case1", "case2"}));

  auto* alg = app.add_subcommand("alg-check", "relations, reduced norm and w-additivity of the cyclic algebra");
  add_common(alg, c);
  alg->add_option("--a", c.a, "generator exponent g = Frob^a")->capture_default_str();

  auto* tha = app.add_subcommand("theorem-a", "matched transforms on two forms of the cyclic algebra");
  add_common(tha, c);
  tha->add_option("--a", c.a, "generator exponent of D")->capture_default_str();
  tha->add_option("--adot", c.adot, "generator exponent of the second form")->capture_default_str();
  tha->add_option("--recipe", c.recipe, "all, constant, trace or charpoly")
      ->check(CLI::IsMember({"all", "constant", "trace", "charpoly"}))
      ->capture_default_str();
  tha->add_option("--pairing", c.pairing, "trace or dot")->check(CLI::IsMember({"trace", "dot"}))->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  c.command = app.get_subcommands().front()->get_name();

  try {
    auto result = fqm::cli::run_command(c);
    std::string text = fqm::cli::render(result, c.format);
    if (c.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(c.out, std::ios::binary);
      if (!out) throw fqm::cli::UsageError("cannot write " + c.out);
      out << text;
    }
    return result.ok ? 0 : 1;
  } catch (const fqm::cli::BudgetError& e) {
    std::cerr << "fqm: budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const fqm::ParseError& e) {
    std::cerr << "fqm: " << e.what() << "\n";
    return 2;
  } catch (const fqm::cli::UsageError& e) {
    std::cerr << "fqm: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fqm: error: " << e.what() << "\n";
    return 2;
  }
}
