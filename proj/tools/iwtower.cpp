// iwtower: Iwasawa invariants of branched Z_p-towers from link data.
//
// Exit codes: 0 success, 2 bad input, 3 fast path and oracle disagree,
// 4 precision cannot decide, 5 Kida check failed.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "iwtower/error.hpp"
#include "iwtower/io.hpp"

using namespace iwtower;

namespace {

enum Exit { kOk = 0, kInput = 2, kDisagree = 3, kPrecision = 4, kKida = 5 };

struct Options {
  std::string file;
  std::optional<unsigned long> p;
  std::optional<int> prec, trunc, levels;
  std::optional<long> oracle_max;
  int i = 0;
  bool json = false, quiet = false, no_oracle = false;

  Overrides overrides() const { return {p, prec, trunc, levels, oracle_max}; }
};

void emit(const Options& o, const Json& report, std::string (*text)(const Json&)) {
  if (o.quiet) return;
  if (o.json)
    std::cout << report.dump(2) << "\n";
  else
    std::cout << text(report);
}

int run_inspect(const Options& o) {
  emit(o, link_report(load_link(o.file), o.p), link_text);
  return kOk;
}

int run_tower(const Options& o) {
  TowerSpec spec = load_tower(o.file, o.overrides());
  TowerReport rep = compute_tower(spec, !o.no_oracle);
  emit(o, tower_report(rep), tower_text);
  return rep.paths_agree ? kOk : kDisagree;
}

int run_kida(const Options& o) {
  try {
    MorphismFile mf = load_morphism(o.file, o.overrides());
    auto lt = resolve_lambda(mf.morphism.target, mf.lambda_target);
    auto ls = resolve_lambda(mf.morphism.source, mf.lambda_source);
    auto v = kida_check(mf.morphism, lt, ls);
    emit(o, kida_report(mf.morphism, v), kida_text);
    return v.passed() ? kOk : kKida;
  } catch (const DomainError& e) {
    if (!o.quiet) std::cerr << "kida: " << e.what() << "\n";
    return kKida;
  }
}

int run_tate(const Options& o) {
  emit(o, tate_report(load_module(o.file), o.i), tate_text);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iwasawa invariants of branched Z_p-covers of links"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, const char* what) {
    sub->add_option("file", o.file, what)->required();
    sub->add_flag("--json", o.json, "print the JSON report");
    sub->add_flag("--quiet", o.quiet, "print nothing, exit code only");
  };
  auto tower_flags = [&](CLI::App* sub) {
    sub->add_option("--p", o.p, "prime (replaces the file's p)");
    sub->add_option("--prec", o.prec, "p-adic working precision in digits");
    sub->add_option("--trunc", o.trunc, "power series truncation degree");
    sub->add_option("--levels", o.levels, "highest level n");
    sub->add_option("--oracle-max", o.oracle_max, "largest cover degree given to the oracle");
  };

  auto* inspect = app.add_subcommand("inspect", "components, linking matrix, |H_L(1)| and Alexander polynomial");
  common(inspect, "link file");
  inspect->add_option("--p", o.p, "also report the TLN lambda shortcut at this prime");

  auto* tower = app.add_subcommand("tower", "level ladder and (lambda, mu, nu) of a tower");
  common(tower, "tower file");
  tower_flags(tower);
  tower->add_flag("--no-oracle", o.no_oracle, "skip the Reidemeister-Schreier oracle");

  auto* kida = app.add_subcommand("kida", "check Kida's formula for a morphism of towers");
  common(kida, "morphism file");
  tower_flags(kida);

  auto* tate_cmd = app.add_subcommand("tate", "Tate cohomology of a cyclic group module");
  common(tate_cmd, "module file");
  tate_cmd->add_option("-i", o.i, "degree (taken mod 2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (*inspect) return run_inspect(o);
    if (*tower) return run_tower(o);
    if (*kida) return run_kida(o);
    return run_tate(o);
  } catch (const PrecisionError& e) {
    std::cerr << "precision: " << e.what() << "\n";
    return kPrecision;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
}
