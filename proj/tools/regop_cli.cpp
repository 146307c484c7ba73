#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "regop/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Certification pipelines for regular and semiregular operators"};
  regop::RunConfig config;
  const std::vector<std::string> commands(std::begin(regop::kCommands), std::end(regop::kCommands));

  app.add_option("command", config.command, "Pipeline to run")
      ->required()
      ->check(CLI::IsMember(commands));
  app.add_option("--config", config.input_path, "Spec file")->check(CLI::ExistingFile);
  app.add_option("--out", config.output_path, "Report destination (default: stdout)");

  long n_x = 0, n_pi = 0;
  double tol_graph = 0, modulus = 0;
  auto* nx_opt = app.add_option("--n-x", n_x, "Space steps, 32..4096");
  auto* npi_opt = app.add_option("--n-pi", n_pi, "Fiber grid points, 2..512");
  auto* tol_opt = app.add_option("--tol-graph", tol_graph, "Graph-membership tolerance");
  auto* mod_opt = app.add_option("--modulus", modulus, "Continuity modulus for gluing fibers");
  app.add_option("--timestamp", config.timestamp, "Fixed header timestamp (for reproducible diffs)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : regop::kInputError;
  }
  if (*nx_opt) config.n_x = n_x;
  if (*npi_opt) config.n_pi = n_pi;
  if (*tol_opt) config.tol_graph = tol_graph;
  if (*mod_opt) config.modulus = modulus;

  return regop::run(config, std::cout, std::cerr);
}
