#include "hblab/pair_json.hpp"

#include <charconv>
#include <set>
#include <string>

#include "hblab/decimal.hpp"

namespace hblab {

namespace {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

std::string dec(double x) { return to_decimal(x); }
std::string dec(int x) { return std::to_string(x); }

void require_keys(const json& obj, const std::set<std::string>& required,
                  const std::set<std::string>& optional, const std::string& where) {
  if (!obj.is_object()) throw PairFormatError(where + ": expected an object");
  for (const auto& key : required) {
    if (!obj.contains(key)) throw PairFormatError(where + ": missing key '" + key + "'");
  }
  for (const auto& [key, value] : obj.items()) {
    if (!required.count(key) && !optional.count(key)) {
      throw PairFormatError(where + ": unknown key '" + key + "'");
    }
  }
}

double get_double(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_string()) throw PairFormatError(where + "." + key + ": expected a decimal string");
  try {
    return parse_decimal(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw PairFormatError(where + "." + key + ": " + e.what());
  }
}

int get_int(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_string()) throw PairFormatError(where + "." + key + ": expected a decimal string");
  const std::string s = v.get<std::string>();
  int out = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw PairFormatError(where + "." + key + ": not an integer: '" + s + "'");
  }
  return out;
}

bool get_bool(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_boolean()) throw PairFormatError(where + "." + key + ": expected a boolean");
  return v.get<bool>();
}

ojson modulus_to_json(const StepModulus& mod) {
  ojson cells = ojson::array();
  for (const auto& c : mod.cells()) {
    cells.push_back(ojson{{"theta_start", dec(c.theta_start)},
                          {"theta_end", dec(c.theta_end)},
                          {"log_modulus", dec(c.log_modulus)}});
  }
  return ojson{{"default_log_modulus", dec(mod.default_log_modulus())}, {"cells", cells}};
}

StepModulus modulus_from_json(const json& obj, const std::string& where) {
  require_keys(obj, {"default_log_modulus", "cells"}, {}, where);
  const auto& cells_json = obj.at("cells");
  if (!cells_json.is_array()) throw PairFormatError(where + ".cells: expected an array");
  std::vector<Cell> cells;
  cells.reserve(cells_json.size());
  for (std::size_t i = 0; i < cells_json.size(); ++i) {
    const std::string cw = where + ".cells[" + std::to_string(i) + "]";
    const auto& c = cells_json[i];
    require_keys(c, {"theta_start", "theta_end", "log_modulus"}, {}, cw);
    cells.push_back({get_double(c, "theta_start", cw), get_double(c, "theta_end", cw),
                     get_double(c, "log_modulus", cw)});
  }
  try {
    return StepModulus(std::move(cells), get_double(obj, "default_log_modulus", where));
  } catch (const std::invalid_argument& e) {
    throw PairFormatError(where + ": " + e.what());
  }
}

}  // namespace

nlohmann::ordered_json pair_to_json(const Pair& pair) {
  const auto& p = pair.params;
  ojson doc;
  doc["format"] = kPairFormat;
  doc["tag"] = pair.tag;
  doc["params"] = ojson{{"alpha", dec(p.alpha)},
                        {"beta", dec(p.beta)},
                        {"n_terms", dec(p.n_terms)},
                        {"power_m", dec(pair.power_m())},
                        {"precision_bits", dec(p.precision_bits)},
                        {"n_check", dec(p.n_check)},
                        {"r_samples", dec(p.r_samples)}};
  doc["power_search"] = ojson{{"requested_auto", pair.power_search.requested_auto},
                              {"verified", pair.power_search.verified},
                              {"note", pair.power_search.note}};
  doc["normalization"] = ojson{{"log_a0", dec(pair.log_a0)},
                               {"log_b0", dec(pair.log_b0)},
                               {"a0", dec(std::exp(pair.log_a0))},
                               {"b0", dec(std::exp(pair.log_b0))}};
  doc["phi_modulus"] = modulus_to_json(pair.phi_modulus);
  doc["a_modulus"] = modulus_to_json(pair.a_modulus);
  doc["b_modulus"] = modulus_to_json(pair.b_modulus);
  return doc;
}

Pair pair_from_json(const nlohmann::json& doc, int series_degree) {
  require_keys(doc,
               {"format", "tag", "params", "power_search", "normalization", "phi_modulus",
                "a_modulus", "b_modulus"},
               {"config_hash", "rho_condition"}, "pair");
  if (doc.at("format") != kPairFormat) {
    throw PairFormatError("pair.format: expected '" + std::string(kPairFormat) + "'");
  }
  Pair pair;
  if (!doc.at("tag").is_string()) throw PairFormatError("pair.tag: expected a string");
  pair.tag = doc.at("tag").get<std::string>();
  if (pair.tag != kConstructedTag && pair.tag != kHalfMoebiusTag) {
    throw PairFormatError("pair.tag: unknown tag '" + pair.tag + "'");
  }

  const auto& pj = doc.at("params");
  require_keys(pj, {"alpha", "beta", "n_terms", "power_m", "precision_bits", "n_check", "r_samples"},
               {}, "pair.params");
  auto& p = pair.params;
  p.alpha = get_double(pj, "alpha", "pair.params");
  p.beta = get_double(pj, "beta", "pair.params");
  p.n_terms = get_int(pj, "n_terms", "pair.params");
  p.power_m = get_int(pj, "power_m", "pair.params");
  p.precision_bits = get_int(pj, "precision_bits", "pair.params");
  p.n_check = get_int(pj, "n_check", "pair.params");
  p.r_samples = get_int(pj, "r_samples", "pair.params");
  if (!pair.is_tame()) {
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw PairFormatError(std::string("pair.params: ") + e.what());
    }
  }

  const auto& ps = doc.at("power_search");
  require_keys(ps, {"requested_auto", "verified", "note"}, {}, "pair.power_search");
  pair.power_search.requested_auto = get_bool(ps, "requested_auto", "pair.power_search");
  pair.power_search.verified = get_bool(ps, "verified", "pair.power_search");
  if (!ps.at("note").is_string()) throw PairFormatError("pair.power_search.note: expected a string");
  pair.power_search.note = ps.at("note").get<std::string>();

  const auto& nj = doc.at("normalization");
  require_keys(nj, {"log_a0", "log_b0", "a0", "b0"}, {}, "pair.normalization");

  pair.phi_modulus = modulus_from_json(doc.at("phi_modulus"), "pair.phi_modulus");
  pair.a_modulus = modulus_from_json(doc.at("a_modulus"), "pair.a_modulus");
  pair.b_modulus = modulus_from_json(doc.at("b_modulus"), "pair.b_modulus");
  finalize_pair(pair, series_degree);

  // The stored constants must agree with the moduli they were derived from.
  const double log_a0 = get_double(nj, "log_a0", "pair.normalization");
  const double log_b0 = get_double(nj, "log_b0", "pair.normalization");
  if (log_a0 != pair.log_a0 || log_b0 != pair.log_b0) {
    throw PairFormatError("pair.normalization: constants disagree with the stored moduli");
  }
  return pair;
}

}  // namespace hblab
