#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gerbelab/cli/commands.hpp"

namespace {

using namespace gerbelab;
using namespace gerbelab::cli;

std::string echo_of(int argc, char** argv) {
  std::string s = "gerbelab";
  for (int i = 1; i < argc; ++i) {
    s += ' ';
    s += argv[i];
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twisted Cech cohomology, lifting obstructions, Schwinger cocycles and Chern-Weil checks"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  double tolerance = 0.0;
  int grid = 0, truncation = 0;
  app.add_option("--seed", opt.seed, "Seed for every randomized step")->capture_default_str();
  auto* tol_opt = app.add_option("--tolerance", tolerance, "Override the command's tolerance")->check(CLI::PositiveNumber);
  auto* grid_opt = app.add_option("--grid", grid, "Grid points per axis (chern, verify)")->check(CLI::Range(3, 2001));
  auto* trunc_opt = app.add_option("--truncation", truncation, "Mode truncation K (schwinger)")->check(CLI::Range(1, 4096));
  app.add_flag("--machine-readable", opt.machine_readable, "Emit the report as JSON");

  std::string system_path;
  int degree = 0;
  auto* coh = app.add_subcommand("cohomology", "Twisted cohomology of a coefficient system");
  coh->add_option("system", system_path, "System file")->required();
  auto* degree_opt = coh->add_option("--degree", degree, "Only this degree");

  std::string transition_path, extension_path, lifts_path;
  auto* obs = app.add_subcommand("obstruction", "Lifting obstruction of transition data through an extension");
  obs->add_option("transition", transition_path, "Transition file")->required();
  obs->add_option("extension", extension_path, "Extension file")->required();
  auto* lifts_opt = obs->add_option("--lifts", lifts_path, "Lifts file (default: the extension's section)");

  SchwingerArgs sargs;
  std::string mode_name = "trace";
  auto* sch = app.add_subcommand("schwinger", "Schwinger cocycle and defect checks on matrix loops");
  sch->add_option("loops", sargs.loop_paths, "Loop files; missing loops are drawn from --seed");
  sch->add_option("--mode", mode_name, "trace | residue | identity | jacobi | defect | curvature")
      ->check(CLI::IsMember({"trace", "residue", "identity", "jacobi", "defect", "curvature"}))
      ->capture_default_str();
  sch->add_option("--size", sargs.size, "Matrix size of random loops")->check(CLI::Range(1, 64))->capture_default_str();
  sch->add_option("--band", sargs.band, "Band of random loops")->check(CLI::Range(0, 64))->capture_default_str();
  sch->add_flag("--skew-hermitian", sargs.skew_hermitian, "Draw skew-hermitian random loops");
  sch->add_flag("--allow-small", sargs.allow_small, "Evaluate the trace below the band");

  std::string bundle_path;
  auto* chern = app.add_subcommand("chern", "Gauge residuals and Chern number of a sphere bundle");
  chern->add_option("bundle", bundle_path, "Bundle file")->required();

  std::string module = "all";
  auto* ver = app.add_subcommand("verify", "Seeded invariant suites of every module");
  ver->add_option("--module", module, "all | nerve | cech | lifting | schwinger | connection")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }
  if (*tol_opt) opt.tolerance = tolerance;
  if (*grid_opt) opt.grid = grid;
  if (*trunc_opt) opt.truncation = truncation;

  const std::string echo = echo_of(argc, argv);
  try {
    std::optional<Report> report;
    if (*coh) {
      report = cmd_cohomology(echo, opt, system_path, *degree_opt ? std::optional<int>(degree) : std::nullopt);
    } else if (*obs) {
      report = cmd_obstruction(echo, opt, transition_path, extension_path,
                               *lifts_opt ? std::optional<std::string>(lifts_path) : std::nullopt);
    } else if (*sch) {
      sargs.mode = *parse_schwinger_mode(mode_name);
      report = cmd_schwinger(echo, opt, sargs);
    } else if (*chern) {
      report = cmd_chern(echo, opt, bundle_path);
    } else {
      report = cmd_verify(echo, opt, module);
    }
    std::cout << (opt.machine_readable ? report->json() : report->text());
    return report->passed() ? kExitOk : kExitViolation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
