#pragma once

#include <string>
#include <vector>

#include "hblab/config.hpp"
#include "hblab/pair.hpp"

namespace hblab {

// Process exit codes shared by every command.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitConstructionInconsistency = 3,
  kExitAssertionFailure = 4,
  kExitPrecisionExhausted = 5,
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "construct", "verify-outer", "divergence", "sarason", "summability", "norm-crosscheck"};
  return names;
}

// Each command writes its reports under cfg.output_dir and returns an exit
// code; diagnostics and timings go to stderr.
int cmd_construct(const RunConfig& cfg);
int cmd_verify_outer(const RunConfig& cfg);
int cmd_divergence(const RunConfig& cfg);
int cmd_sarason(const RunConfig& cfg);
int cmd_summability(const RunConfig& cfg);
int cmd_norm_crosscheck(const RunConfig& cfg);

// Dispatches by verb name and maps exceptions to exit codes.
int run_command(const std::string& verb, const RunConfig& cfg);

// Reads the pair referenced by the config (ConfigError if absent, unreadable
// or built from different construction parameters).
Pair load_pair(const RunConfig& cfg);

}  // namespace hblab
