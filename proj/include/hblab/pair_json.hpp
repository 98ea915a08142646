#pragma once

#include <stdexcept>

#include "hblab/vendor_json.hpp"
#include "hblab/pair.hpp"

namespace hblab {

// Malformed or incomplete pair document.
class PairFormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr const char* kPairFormat = "hblab-pair/1";

// Serializes the pair: format tag, parameters, power search outcome,
// normalization constants and the three step moduli. Every number is a
// decimal string that parses back to the identical double.
nlohmann::ordered_json pair_to_json(const Pair& pair);

// Inverse of pair_to_json. Unknown keys are rejected, except for the report
// metadata keys "config_hash" and "rho_condition". Series and sequences are
// recomputed from the stored data.
Pair pair_from_json(const nlohmann::json& doc, int series_degree = kDefaultSeriesDegree);

}  // namespace hblab
