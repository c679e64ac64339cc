#include <cstdio>
#include <fstream>
#include <iostream>
#include <utility>

#include <CLI11.hpp>

#include "hvol/commands.hpp"

int main(int argc, char** argv) {
  hvol::RunConfig cfg;
  CLI::App app{"hvol: volumes of hyperbolic and spherical polyhedra from dihedral angles"};
  app.require_subcommand(1);

  app.add_option("--input", cfg.input, "input JSON file");
  app.add_option("--output", cfg.output, "write the report here instead of stdout");
  app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  app.add_option("--samples", cfg.samples, "Monte Carlo samples")->capture_default_str();
  app.add_option("--tol", cfg.tol, "quadrature tolerance")->capture_default_str();
  app.add_option("--k", cfg.k, "drum: polygon size")->capture_default_str();
  app.add_option("--tau-min", cfg.tau_min, "drum: smallest half height")->capture_default_str();
  app.add_option("--tau-max", cfg.tau_max, "drum: largest half height")->capture_default_str();
  app.add_option("--tau-steps", cfg.tau_steps, "drum: number of rows")->capture_default_str();
  app.add_option("--r", cfg.r, "drum: cap circumradius")->capture_default_str();
  app.add_option("--direction", cfg.direction, "regularity: ray direction (6 values)")->expected(6);
  app.add_option("--points", cfg.points, "regularity: rows toward the boundary")->capture_default_str();
  app.add_option("--t-list", cfg.t_list, "lemmas: slab half widths")->capture_default_str();
  app.add_option("--eps-list", cfg.eps_list, "lemmas: spherical epsilons")->capture_default_str();
  app.add_option("--trials", cfg.trials, "lemmas: samples per parameter")->capture_default_str();

  const std::pair<const char*, const char*> subcommands[] = {
      {"simplex", "classify a simplex, its edge lengths and volume"},
      {"validate", "check Andreev or Bao-Bonahon conditions on an abstract polyhedron"},
      {"polyhedron", "validate a realized polyhedron and report angles, areas and diameter"},
      {"degenerate", "belt excess along a sweep of stretched drums"},
      {"regularity", "volume and edge growth along a ray to the ideal boundary"},
      {"lemmas", "Monte-Carlo checks of the slab lemmas"},
  };
  for (const auto& [name, help] : subcommands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();

  const hvol::CommandResult res = hvol::run_command(cfg);
  if (!res.diagnostics.empty()) std::cerr << res.diagnostics << "\n";
  if (cfg.output.empty()) {
    std::cout << res.output;
    std::cout.flush();
  } else {
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) {
      std::cerr << "IOError: cannot write " << cfg.output << "\n";
      return 1;
    }
    out << res.output;
  }
  return res.exit_code;
}
