#include "hblab/config.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "hblab/decimal.hpp"
#include "hblab/pair.hpp"

namespace hblab {

namespace {

using json = nlohmann::json;

const std::set<std::string> kKeys = {
    "alpha",         "beta",          "n_terms",
    "power_m",       "precision_bits", "n_check",
    "r_samples",     "output_dir",    "formats",
    "seed",          "tame_pair",     "pair_file",
    "r_grid",        "series_degree", "sarason_j_max",
    "summability_max_n", "crosscheck_polynomials", "crosscheck_max_degree"};

double get_real(const json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return parse_decimal(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
  throw ConfigError("config key '" + key + "': expected a number");
}

long long get_integer(const json& v, const std::string& key) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9.0e15) return static_cast<long long>(d);
  }
  throw ConfigError("config key '" + key + "': expected an integer");
}

int get_int(const json& v, const std::string& key) {
  const long long x = get_integer(v, key);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    throw ConfigError("config key '" + key + "': out of range");
  }
  return static_cast<int>(x);
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("config key '" + key + "': expected a string");
  return v.get<std::string>();
}

}  // namespace

OutputFormats parse_formats(const std::string& text) {
  if (text == "csv") return {true, false};
  if (text == "json") return {false, true};
  if (text == "both") return {true, true};
  throw ConfigError("format must be csv, json or both (got '" + text + "')");
}

void RunConfig::validate() const {
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  if (!formats.csv && !formats.json) throw ConfigError("formats must name csv and/or json");
  if (tame_pair && *tame_pair != kHalfMoebiusTag) {
    throw ConfigError("tame_pair must be \"half-moebius\" (got \"" + *tame_pair + "\")");
  }
  if (r_grid) {
    if (r_grid->empty()) throw ConfigError("r_grid must not be empty");
    for (double r : *r_grid) {
      if (!(r > 0.0 && r < 1.0)) throw ConfigError("r_grid values must lie in (0, 1)");
    }
  }
  if (series_degree < 1 || series_degree > 4096) throw ConfigError("series_degree must be in [1, 4096]");
  if (sarason_j_max < 2 || sarason_j_max > 1000000) {
    throw ConfigError("sarason_j_max must be in [2, 1e6]");
  }
  if (summability_max_n < 1 || summability_max_n > 4096) {
    throw ConfigError("summability_max_n must be in [1, 4096]");
  }
  if (crosscheck_polynomials < 1 || crosscheck_polynomials > 100000) {
    throw ConfigError("crosscheck_polynomials must be in [1, 1e5]");
  }
  if (crosscheck_max_degree < 0 || crosscheck_max_degree > 1024) {
    throw ConfigError("crosscheck_max_degree must be in [0, 1024]");
  }
}

std::string RunConfig::pair_path() const {
  return pair_file ? *pair_file : output_dir + "/pair.json";
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig cfg;
  for (const auto& [key, v] : doc.items()) {
    if (!kKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
    auto& p = cfg.params;
    if (key == "alpha") {
      p.alpha = get_real(v, key);
    } else if (key == "beta") {
      p.beta = get_real(v, key);
    } else if (key == "n_terms") {
      p.n_terms = get_int(v, key);
    } else if (key == "power_m") {
      if (v.is_string() && v.get<std::string>() == "auto") {
        p.power_m.reset();
      } else {
        p.power_m = get_int(v, key);
      }
    } else if (key == "precision_bits") {
      p.precision_bits = get_int(v, key);
    } else if (key == "n_check") {
      p.n_check = get_int(v, key);
    } else if (key == "r_samples") {
      p.r_samples = get_int(v, key);
    } else if (key == "output_dir") {
      cfg.output_dir = get_string(v, key);
    } else if (key == "formats") {
      if (v.is_string()) {
        cfg.formats = parse_formats(v.get<std::string>());
      } else if (v.is_array()) {
        cfg.formats = {false, false};
        for (const auto& f : v) {
          const auto s = get_string(f, key);
          if (s == "csv") {
            cfg.formats.csv = true;
          } else if (s == "json") {
            cfg.formats.json = true;
          } else {
            throw ConfigError("formats entries must be \"csv\" or \"json\"");
          }
        }
      } else {
        throw ConfigError("config key 'formats': expected a string or an array");
      }
    } else if (key == "seed") {
      const long long s = get_integer(v, key);
      if (s < 0) throw ConfigError("seed must be nonnegative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "tame_pair") {
      if (v.is_null()) {
        cfg.tame_pair.reset();
      } else {
        cfg.tame_pair = get_string(v, key);
      }
    } else if (key == "pair_file") {
      cfg.pair_file = get_string(v, key);
    } else if (key == "r_grid") {
      if (!v.is_array()) throw ConfigError("config key 'r_grid': expected an array");
      std::vector<double> grid;
      for (const auto& x : v) grid.push_back(get_real(x, key));
      cfg.r_grid = std::move(grid);
    } else if (key == "series_degree") {
      cfg.series_degree = get_int(v, key);
    } else if (key == "sarason_j_max") {
      cfg.sarason_j_max = get_int(v, key);
    } else if (key == "summability_max_n") {
      cfg.summability_max_n = get_int(v, key);
    } else if (key == "crosscheck_polynomials") {
      cfg.crosscheck_polynomials = get_int(v, key);
    } else if (key == "crosscheck_max_degree") {
      cfg.crosscheck_max_degree = get_int(v, key);
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

RunConfig resolve_config(const std::optional<std::string>& path, const ConfigOverrides& o) {
  RunConfig cfg = path ? load_config(*path) : RunConfig{};
  if (o.output_dir) cfg.output_dir = *o.output_dir;
  if (o.precision_bits) cfg.params.precision_bits = *o.precision_bits;
  if (o.seed) cfg.seed = *o.seed;
  if (o.format) cfg.formats = parse_formats(*o.format);
  cfg.validate();
  return cfg;
}

json canonical_config(const RunConfig& cfg) {
  const auto& p = cfg.params;
  json doc;
  doc["alpha"] = to_decimal(p.alpha);
  doc["beta"] = to_decimal(p.beta);
  doc["n_terms"] = std::to_string(p.n_terms);
  doc["power_m"] = p.power_m ? std::to_string(*p.power_m) : std::string("auto");
  doc["precision_bits"] = std::to_string(p.precision_bits);
  doc["n_check"] = std::to_string(p.n_check);
  doc["r_samples"] = std::to_string(p.r_samples);
  doc["seed"] = std::to_string(cfg.seed);
  doc["tame_pair"] = cfg.tame_pair ? json(*cfg.tame_pair) : json(nullptr);
  if (cfg.r_grid) {
    json grid = json::array();
    for (double r : *cfg.r_grid) grid.push_back(to_decimal(r));
    doc["r_grid"] = grid;
  } else {
    doc["r_grid"] = "default";
  }
  doc["series_degree"] = std::to_string(cfg.series_degree);
  doc["sarason_j_max"] = std::to_string(cfg.sarason_j_max);
  doc["summability_max_n"] = std::to_string(cfg.summability_max_n);
  doc["crosscheck_polynomials"] = std::to_string(cfg.crosscheck_polynomials);
  doc["crosscheck_max_degree"] = std::to_string(cfg.crosscheck_max_degree);
  return doc;
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = canonical_config(cfg).dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return os.str();
}

}  // namespace hblab
