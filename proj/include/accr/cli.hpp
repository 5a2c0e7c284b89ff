#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "accr/report.hpp"

namespace accr {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int check_failed = 1;
inline constexpr int usage = 2;
}  // namespace exit_code

struct RunConfig {
  std::string command;
  std::string input;    // file path, or "builtin:NAME"
  std::string builtin;  // --builtin NAME
  std::size_t samples = 64;
  std::uint64_t seed = 42;
  std::vector<std::string> points;     // "t=2,u=0,v=0"
  std::vector<std::string> constants;  // "name=value"
  std::string metric = "g";
  std::optional<std::string> potential_k;
  std::optional<std::string> potential_field;  // comma-separated components
  bool expect_soliton = false;
  double tolerance = 1e-9;
  std::string format = "json";
  std::string output;
};

struct CommandResult {
  Report report;
  int exit = exit_code::ok;
};

// Runs one command; load and usage problems throw accr::Error.
CommandResult run_command(const RunConfig& config);

// Full front end: parses argv, runs, writes the report to -o or `out`.
// Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace accr
