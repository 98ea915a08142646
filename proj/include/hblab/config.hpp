#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hblab/outer_engine.hpp"
#include "hblab/report.hpp"
#include "hblab/vendor_json.hpp"

namespace hblab {

// Invalid configuration (maps to exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  ConstructionParams params;
  std::string output_dir = "out";
  OutputFormats formats;
  std::uint64_t seed = 42;
  std::optional<std::string> tame_pair;  // "half-moebius"
  std::optional<std::string> pair_file;  // default: <output_dir>/pair.json
  std::optional<std::vector<double>> r_grid;
  int series_degree = 64;
  int sarason_j_max = 1024;
  int summability_max_n = 64;
  int crosscheck_polynomials = 100;
  int crosscheck_max_degree = 32;

  // Checks every field (including the construction parameters).
  void validate() const;
  std::string pair_path() const;
};

// Command-line overrides; set fields take precedence over the file.
struct ConfigOverrides {
  std::optional<std::string> output_dir;
  std::optional<int> precision_bits;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;  // csv | json | both
};

// Parses a config document strictly: unknown keys and wrong types are
// ConfigErrors. Missing keys keep their defaults.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

// Defaults <- file (if any) <- overrides, then validate().
RunConfig resolve_config(const std::optional<std::string>& path, const ConfigOverrides& overrides);

OutputFormats parse_formats(const std::string& text);

// Canonical form of the settings that determine results (output location
// and formats excluded): sorted keys, numbers as decimal strings.
nlohmann::json canonical_config(const RunConfig& cfg);
// Lowercase hex SHA-256 of canonical_config(cfg).dump().
std::string config_hash(const RunConfig& cfg);

}  // namespace hblab
