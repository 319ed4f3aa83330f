#pragma once

#include <cstdint>
#include <string>

namespace inflap {

/// Resolved command-line invocation.
struct RunConfig {
  /// One of: solve-game, solve-jensen, solve-harmonic, patch, solve-plap,
  /// montecarlo, verify.
  std::string command;
  /// Path to the JSON problem description.
  std::string config_path;
  /// Directory for solution.csv and summary.json; created if missing.
  std::string out_dir = ".";
  /// Worker threads, 0 picks the hardware count.
  int threads = 0;
  /// Random seed for the montecarlo command.
  std::uint64_t seed = 1;
};

/// Executes one command. Returns 0 on success, 1 when the run completed but
/// a solve did not converge or a check failed, 2 on configuration errors.
int run(const RunConfig& config);

/// Parses argv (subcommand plus --config/--out/--threads/--seed) and runs it.
int run_cli(int argc, const char* const* argv);

}  // namespace inflap
