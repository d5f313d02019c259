// Command-line convergence-study runner.
//
//   solve --problem ex1 --degree 5 --dual-degree 5 --levels 4 \
//         --grid 201 --k2 2 --solver direct --tol 1e-10 --format text
//
// Exit codes: 0 success, 1 configuration error, 2 a level failed to solve.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "splinepde/splinepde.hpp"

int main(int argc, char** argv) {
  CLI::App app{"discontinuous-spline solver for non-divergence-form PDEs"};
  app.require_subcommand(1);
  CLI::App* cmd = app.add_subcommand("solve", "run a convergence study");

  splinepde::StudyConfig cfg;
  int max_level = 4;
  std::string solver = "direct", format = "text", out_path;
  cmd->add_option("--problem", cfg.problem, "problem id")
      ->check(CLI::IsMember({"ex1", "ex1-2pi", "ex3", "ex51", "ex52", "ex53"}));
  cmd->add_option("--degree", cfg.degree, "spline degree k")->check(CLI::Range(2, 20));
  cmd->add_option("--dual-degree", cfg.dual_degree, "test space degree k1")
      ->check(CLI::Range(0, 20));
  cmd->add_option("--levels", max_level, "run refinement levels 1..N")
      ->check(CLI::Range(1, 10));
  cmd->add_option("--grid", cfg.grid_n, "evaluation lattice points per axis")
      ->check(CLI::Range(2, 100000));
  cmd->add_option("--k2", cfg.k2, "coefficient interpolation degree")
      ->check(CLI::Range(0, 20));
  cmd->add_option("--solver", solver, "direct or iterative")
      ->check(CLI::IsMember({"direct", "iterative"}));
  cmd->add_option("--tol", cfg.tol, "iterative solver tolerance");
  cmd->add_option("--max-it", cfg.max_it, "iterative solver iteration cap");
  cmd->add_option("--format", format, "table format")
      ->check(CLI::IsMember({"text", "csv"}));
  cmd->add_option("--out", out_path, "output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  cfg.method = (solver == "direct") ? splinepde::SolveMethod::direct
                                    : splinepde::SolveMethod::iterative;
  cfg.levels.clear();
  for (int l = 1; l <= max_level; ++l) cfg.levels.push_back(l);
  if (cfg.dual_degree > cfg.degree) {
    std::cerr << "error: dual degree must not exceed degree\n";
    return 1;
  }

  std::vector<splinepde::ConvergenceRow> rows;
  try {
    rows = splinepde::run_study(cfg);
  } catch (const splinepde::UnknownProblem& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const splinepde::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const auto table = splinepde::emit_table(
      rows, format == "csv" ? splinepde::TableFormat::csv : splinepde::TableFormat::text);
  if (out_path.empty()) {
    std::cout << table;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot open " << out_path << "\n";
      return 1;
    }
    out << table;
  }
  for (const auto& r : rows)
    if (!r.converged) return 2;
  return 0;
}
