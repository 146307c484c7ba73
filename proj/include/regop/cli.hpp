#pragma once

#include <optional>
#include <ostream>
#include <string>

namespace regop {

/// Exit statuses of `run`.
enum ExitCode : int {
  kVerified = 0,
  kCertifiedFailure = 1,  // a negative result was certified (e.g. nonregularity)
  kInputError = 2,
  kToleranceViolation = 3,
};

struct RunConfig {
  std::string command;
  std::string input_path;   // empty: built-in defaults where the command has them
  std::string output_path;  // empty: the report goes to `out`
  std::optional<long> n_pi;
  std::optional<long> n_x;
  std::optional<double> tol_graph;
  std::optional<double> modulus;
  std::string timestamp;    // empty: current UTC time
};

inline constexpr const char* kCommands[] = {"certify-nonregular", "zfield",       "extend",
                                            "phi-roundtrip",      "density-check", "kernel-cert"};

/// Runs one command; the report goes to config.output_path or `out`,
/// diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace regop
