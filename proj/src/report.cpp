#include "hblab/report.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hblab/decimal.hpp"

namespace hblab {

namespace {

using ojson = nlohmann::ordered_json;

ojson cell_to_json(const ReportCell& c) {
  return std::visit(
      [](const auto& v) -> ojson {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<V, long long>) {
          return std::to_string(v);
        } else {
          return v;
        }
      },
      c);
}

std::string cell_to_csv(const ReportCell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<V, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<V, long long>) {
          return std::to_string(v);
        } else {
          return v;
        }
      },
      c);
}

ReportCell int_cell(long long v) { return v; }

double ln_to_log10(double x) { return x / std::numbers::ln10; }

}  // namespace

ReportCell cell(double x) { return to_decimal(x); }
ReportCell cell(const Extended& x) { return to_decimal(x); }
ReportCell cell_log10(const LogScalar& x) { return to_decimal(x.log10_mag()); }

std::string dump_json(const nlohmann::ordered_json& doc) { return doc.dump(2) + "\n"; }

ojson report_to_json(const ExperimentReport& report) {
  ojson doc;
  doc["experiment"] = report.experiment;
  doc["code_version"] = kCodeVersion;
  doc["config_hash"] = report.config_hash;
  doc["params"] = report.params;
  doc["precision_bits"] = std::to_string(report.precision_bits);
  doc["pass"] = report.pass;
  doc["failures"] = report.failures;
  doc["summary"] = report.summary;
  doc["columns"] = report.table.columns;
  ojson rows = ojson::array();
  for (const auto& row : report.table.rows) {
    ojson obj = ojson::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[report.table.columns[i]] = cell_to_json(row[i]);
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

std::string report_to_csv(const ReportTable& table) {
  std::ostringstream os;
  const std::size_t n = std::min(table.csv_columns, table.columns.size());
  for (std::size_t i = 0; i < n; ++i) os << (i ? "," : "") << table.columns[i];
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < n; ++i) os << (i ? "," : "") << cell_to_csv(row[i]);
    os << "\n";
  }
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

void write_report(const ExperimentReport& report, const std::filesystem::path& dir,
                  OutputFormats formats) {
  std::filesystem::create_directories(dir);
  if (formats.json) {
    write_text_file(dir / (report.experiment + ".json"), dump_json(report_to_json(report)));
  }
  if (formats.csv) write_text_file(dir / (report.experiment + ".csv"), report_to_csv(report.table));
}

ojson params_to_json(const ConstructionParams& p) {
  return ojson{{"alpha", to_decimal(p.alpha)},
               {"beta", to_decimal(p.beta)},
               {"n_terms", std::to_string(p.n_terms)},
               {"power_m", p.power_m ? std::to_string(*p.power_m) : std::string("auto")},
               {"precision_bits", std::to_string(p.precision_bits)},
               {"n_check", std::to_string(p.n_check)},
               {"r_samples", std::to_string(p.r_samples)}};
}

ReportTable growth_table(const std::vector<GrowthCheckRecord>& records) {
  ReportTable t;
  t.columns = {"n", "r", "one_minus_r", "u", "v", "t", "log_ratio", "log_bound", "pass"};
  t.csv_columns = t.columns.size();
  for (const auto& r : records) {
    t.rows.push_back({int_cell(r.n), cell(r.r), cell(r.one_minus_r), cell(r.u), cell(r.v),
                      cell(r.t), cell(r.log_ratio), cell(r.bound.log_mag()), r.pass});
  }
  return t;
}

ReportTable divergence_table(const DivergenceReport& rep) {
  ReportTable t;
  t.columns = {"r", "log10_frplus0", "log10_hbnorm", "n", "log10_bound", "pass",
               "log10_plusnorm", "bound_ok", "chain_ok"};
  t.csv_columns = 6;
  for (const auto& r : rep.rows) {
    ReportCell bound;
    if (r.log_bound) bound = cell(ln_to_log10(*r.log_bound));
    t.rows.push_back({cell(r.r), cell_log10(r.fr_plus0), cell_log10(r.hb_norm), int_cell(r.n),
                      bound, r.pass, cell_log10(r.plus_norm), r.bound_ok, r.chain_ok});
  }
  return t;
}

ReportTable envelope_table(const EnvelopeReport& rep) {
  ReportTable t;
  t.columns = {"r", "E_r", "trend", "log_hbnorm"};
  t.csv_columns = 3;
  for (const auto& r : rep.rows) {
    t.rows.push_back({cell(r.r), cell(r.E), cell(r.trend), cell(r.log_norm)});
  }
  return t;
}

ReportTable sarason_table(const SarasonReport& rep) {
  ReportTable t;
  t.columns = {"J", "log10_SJ", "S_J"};
  t.csv_columns = 2;
  for (const auto& r : rep.rows) {
    t.rows.push_back({int_cell(r.J), cell_log10(to_log_scalar(r.S)), cell(r.S)});
  }
  return t;
}

ReportTable summability_table(const SummabilityReport& rep) {
  ReportTable t;
  t.columns = {"n", "log10_sn_norm", "log10_sigman_norm", "log10_sn_running_max",
               "log10_sigman_running_max", "convex_ok"};
  t.csv_columns = 3;
  for (const auto& r : rep.rows) {
    t.rows.push_back({int_cell(r.n), cell_log10(r.sn_norm), cell_log10(r.sigma_norm),
                      cell_log10(r.sn_max), cell_log10(r.sigma_max), r.convex_ok});
  }
  return t;
}

ReportTable crosscheck_table(const CrosscheckReport& rep) {
  ReportTable t;
  t.columns = {"index", "degree", "norm_sq_sarason", "norm_sq_solve", "rel_err", "pass"};
  t.csv_columns = t.columns.size();
  for (const auto& r : rep.rows) {
    t.rows.push_back({int_cell(r.index), int_cell(r.degree), cell(r.norm_sq_sarason),
                      cell(r.norm_sq_solve), cell(r.rel_err), r.pass});
  }
  return t;
}

}  // namespace hblab
