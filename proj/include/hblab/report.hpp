#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "hblab/experiments.hpp"
#include "hblab/outer_engine.hpp"
#include "hblab/vendor_json.hpp"

namespace hblab {

inline constexpr const char* kCodeVersion = "0.1.0";

// A table cell: null, a decimal string, a boolean or an integer.
using ReportCell = std::variant<std::monostate, std::string, bool, long long>;

struct ReportTable {
  std::vector<std::string> columns;
  // The first csv_columns columns go to CSV; the rest are JSON-only.
  std::size_t csv_columns = 0;
  std::vector<std::vector<ReportCell>> rows;
};

struct ExperimentReport {
  std::string experiment;
  std::string config_hash;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  int precision_bits = 53;
  ReportTable table;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  bool pass = true;
  std::vector<std::string> failures;
};

struct OutputFormats {
  bool csv = true;
  bool json = true;
};

// Full JSON document; every number is a decimal string.
nlohmann::ordered_json report_to_json(const ExperimentReport& report);
// Header line plus one line per row, CSV columns only.
std::string report_to_csv(const ReportTable& table);

// Writes <dir>/<experiment>.json and/or .csv (each via a temporary file and
// rename). Creates `dir` if needed.
void write_report(const ExperimentReport& report, const std::filesystem::path& dir,
                  OutputFormats formats);
// Writes text to path via a temporary file and rename.
void write_text_file(const std::filesystem::path& path, const std::string& text);
// Serialized JSON text used for every output file (2-space indent, newline).
std::string dump_json(const nlohmann::ordered_json& doc);

nlohmann::ordered_json params_to_json(const ConstructionParams& params);

// Typed experiment results as tables with the fixed column orders.
ReportTable growth_table(const std::vector<GrowthCheckRecord>& records);
ReportTable divergence_table(const DivergenceReport& rep);
ReportTable envelope_table(const EnvelopeReport& rep);
ReportTable sarason_table(const SarasonReport& rep);
ReportTable summability_table(const SummabilityReport& rep);
ReportTable crosscheck_table(const CrosscheckReport& rep);

// Decimal-string helpers.
ReportCell cell(double x);
ReportCell cell(const Extended& x);
ReportCell cell_log10(const LogScalar& x);

}  // namespace hblab
