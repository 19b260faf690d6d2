#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "opgraph/scalar.hpp"

namespace opgraph::cli {

// Parsed command line: one command plus the shared flag set.
struct RunConfig {
  std::string command;           // verify | sweep | fp | rep | channel
  std::string theta_spec;        // theta text, or a sweep spec for sweep
  std::string backend = "auto";  // auto | exact | float
  double tol = kDefaultTol;
  uint64_t seed = 12021;
  bool json_output = false;
  std::string out_path;
  std::string expression;    // fp: the element expression
  std::string channel_path;  // channel: JSON input file
  std::string action;        // channel: graph | graph-check | duality-test
                             //          | match-L
};

struct CommandResult {
  int exit_code = 0;  // 0 ok, 1 check failed (2 is reserved for usage errors)
  nlohmann::json report;
};

// Applies the backend policy to a theta text: "auto" prefers the exact
// backend and falls back to float when the text is not Gaussian rational.
Theta resolve_theta(const std::string& text, const std::string& backend,
                    double tol);

// Executes the configured command.  Usage-level problems (unparsable theta,
// bad expression, missing file) surface as std::invalid_argument; the
// caller maps them to exit code 2.
CommandResult run_command(const RunConfig& config);

// Human-readable rendering of a report produced by run_command.
std::string render_text(const nlohmann::json& report);

// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace opgraph::cli
