#include "hblab/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hblab/decimal.hpp"
#include "hblab/experiments.hpp"
#include "hblab/pair_json.hpp"
#include "hblab/report.hpp"
#include "hblab/simd/kernels.hpp"

namespace hblab {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

class Timer {
 public:
  explicit Timer(std::string what) : what_(std::move(what)), start_(clock::now()) {}
  ~Timer() {
    const double s = std::chrono::duration<double>(clock::now() - start_).count();
    std::cerr << "[hblab] " << what_ << " finished in " << s << " s (isa "
              << simd::isa_name(simd::active_kernels().isa) << ")\n";
  }

 private:
  using clock = std::chrono::steady_clock;
  std::string what_;
  clock::time_point start_;
};

ExperimentReport new_report(const std::string& name, const RunConfig& cfg,
                            const ConstructionParams& params) {
  ExperimentReport rep;
  rep.experiment = name;
  rep.config_hash = config_hash(cfg);
  rep.params = params_to_json(params);
  rep.precision_bits = cfg.params.precision_bits;
  return rep;
}

std::string row_text(const ReportTable& t, std::size_t i) {
  std::ostringstream os;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    os << (c ? " " : "") << t.columns[c] << "=";
    std::visit(
        [&](const auto& v) {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, std::monostate>) {
            os << "null";
          } else if constexpr (std::is_same_v<V, bool>) {
            os << (v ? "true" : "false");
          } else {
            os << v;
          }
        },
        t.rows[i][c]);
  }
  return os.str();
}

// Echoes failing rows (those whose "pass" column is false) to stderr and
// records them in the report.
void collect_failures(ExperimentReport& rep) {
  const auto& cols = rep.table.columns;
  const auto it = std::find(cols.begin(), cols.end(), "pass");
  if (it == cols.end()) return;
  const std::size_t idx = static_cast<std::size_t>(it - cols.begin());
  for (std::size_t i = 0; i < rep.table.rows.size(); ++i) {
    const auto* ok = std::get_if<bool>(&rep.table.rows[i][idx]);
    if (ok && !*ok) rep.failures.push_back(row_text(rep.table, i));
  }
}

int finish(ExperimentReport& rep, const RunConfig& cfg) {
  collect_failures(rep);
  write_report(rep, cfg.output_dir, cfg.formats);
  if (rep.pass) return kExitOk;
  std::cerr << "[hblab] " << rep.experiment << ": assertion failed\n";
  for (const auto& f : rep.failures) std::cerr << "  failing row: " << f << "\n";
  if (rep.failures.empty()) std::cerr << "  " << rep.summary.dump() << "\n";
  return kExitAssertionFailure;
}

// Runs `fn`; on precision exhaustion writes the report with the error as
// its failure before rethrowing.
template <class Fn>
auto record_exhaustion(ExperimentReport& rep, const RunConfig& cfg, Fn&& fn) {
  try {
    return fn();
  } catch (const PrecisionExhausted& e) {
    rep.pass = false;
    rep.failures.push_back(std::string("precision exhausted: ") + e.what());
    write_report(rep, cfg.output_dir, cfg.formats);
    throw;
  }
}

const Pair& require_constructed(const Pair& pair) {
  if (pair.is_tame()) throw ConfigError("this command needs a constructed pair, not the tame pair");
  return pair;
}

}  // namespace

Pair load_pair(const RunConfig& cfg) {
  const std::string path = cfg.pair_path();
  if (!fs::exists(path)) {
    throw ConfigError("pair file '" + path + "' not found (run 'construct' first)");
  }
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read pair file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("pair file '" + path + "' is not valid JSON: " + e.what());
  }
  Pair pair;
  try {
    pair = pair_from_json(doc, cfg.series_degree);
  } catch (const PairFormatError& e) {
    throw ConfigError("pair file '" + path + "': " + e.what());
  }
  if (!pair.is_tame()) {
    const auto& a = pair.params;
    const auto& b = cfg.params;
    const bool same = a.alpha == b.alpha && a.beta == b.beta && a.n_terms == b.n_terms &&
                      a.n_check == b.n_check && a.r_samples == b.r_samples &&
                      (!b.power_m || b.power_m == a.power_m);
    if (!same) {
      throw ConfigError("pair file '" + path +
                        "' was built with different construction parameters");
    }
  }
  return pair;
}

int cmd_construct(const RunConfig& cfg) {
  Timer timer("construct");
  fs::create_directories(cfg.output_dir);
  Pair pair = cfg.tame_pair ? build_tame_pair(cfg.series_degree)
                            : build_pair(cfg.params, cfg.series_degree);
  ojson doc = pair_to_json(pair);
  doc["config_hash"] = config_hash(cfg);
  ojson rho = ojson::array();
  if (!pair.is_tame()) {
    for (int n = 1; n < pair.seq.size(); ++n) {
      rho.push_back(ojson{{"n", std::to_string(n)},
                          {"ratio", to_decimal(check_rho_condition(pair.seq, n))}});
    }
  }
  doc["rho_condition"] = rho;
  write_text_file(fs::path(cfg.output_dir) / "pair.json", dump_json(doc));
  std::cerr << "[hblab] pair written with m=" << pair.power_m()
            << (pair.power_search.verified ? "" : " (growth bound NOT verified: " +
                                                      pair.power_search.note + ")")
            << "\n";
  return kExitOk;
}

int cmd_verify_outer(const RunConfig& cfg) {
  const Pair pair = load_pair(cfg);
  require_constructed(pair);
  Timer timer("verify-outer");
  std::vector<GrowthCheckRecord> records;
  for (int n = 1; n <= pair.params.n_check; ++n) {
    auto recs = verify_growth_bound(n, pair.params.r_samples, pair.power_m(), pair.seq);
    records.insert(records.end(), recs.begin(), recs.end());
  }
  auto rep = new_report("verify_outer", cfg, pair.params);
  rep.table = growth_table(records);
  rep.pass = true;
  for (const auto& r : records) rep.pass = rep.pass && r.pass;
  ojson rho = ojson::array();
  for (int n = 1; n < pair.seq.size(); ++n) {
    rho.push_back(to_decimal(check_rho_condition(pair.seq, n)));
  }
  rep.summary = ojson{{"power_m", std::to_string(pair.power_m())},
                      {"power_search_verified", pair.power_search.verified},
                      {"power_search_note", pair.power_search.note},
                      {"rho_condition", rho}};
  return finish(rep, cfg);
}

int cmd_divergence(const RunConfig& cfg) {
  const Pair pair = load_pair(cfg);
  require_constructed(pair);
  Timer timer("divergence");
  const auto f = build_paper_f(pair);
  const auto grid = cfg.r_grid ? *cfg.r_grid : default_r_grid(pair);

  const auto div = divergence_curve(grid, f, pair);
  auto rep = new_report("divergence", cfg, pair.params);
  rep.table = divergence_table(div);
  rep.pass = div.pass;
  rep.summary = ojson{{"rows", std::to_string(div.rows.size())}};
  const int code = finish(rep, cfg);

  const auto env = growth_envelope(grid, f, pair);
  auto erep = new_report("envelope", cfg, pair.params);
  erep.table = envelope_table(env);
  erep.pass = env.pass;
  erep.summary = ojson{{"c_empirical", to_decimal(env.c_empirical)},
                       {"rows", std::to_string(env.rows.size())}};
  const int ecode = finish(erep, cfg);
  return code != kExitOk ? code : ecode;
}

int cmd_sarason(const RunConfig& cfg) {
  const Pair pair = load_pair(cfg);
  require_constructed(pair);
  Timer timer("sarason");
  ScopedPrecision precision(cfg.params.precision_bits);
  const auto f = build_paper_f(pair);
  auto rep = new_report("sarason", cfg, pair.params);
  const auto res = record_exhaustion(rep, cfg, [&] {
    return sarason_series_failure(cfg.sarason_j_max, f, pair);
  });
  rep.table = sarason_table(res);
  rep.pass = res.pass;
  rep.summary = ojson{{"J_max", std::to_string(cfg.sarason_j_max)},
                      {"growth_ratio", to_decimal(res.growth_ratio)},
                      {"monotone", res.monotone},
                      {"condition", to_decimal(res.condition)}};
  return finish(rep, cfg);
}

int cmd_summability(const RunConfig& cfg) {
  const Pair pair = load_pair(cfg);
  require_constructed(pair);
  Timer timer("summability");
  ScopedPrecision precision(cfg.params.precision_bits);
  const auto f = build_paper_f(pair);
  std::vector<int> ns;
  for (int n = 0; n <= cfg.summability_max_n; ++n) ns.push_back(n);
  auto rep = new_report("summability", cfg, pair.params);
  const auto res = record_exhaustion(rep, cfg, [&] { return summability_divergence(ns, f, pair); });
  rep.table = summability_table(res);
  rep.pass = res.pass;
  rep.summary = ojson{{"sn_running_max_grows", res.sn_growth},
                      {"sigman_running_max_grows", res.sigma_growth},
                      {"convexity_holds", res.convex_ok},
                      {"condition", to_decimal(res.condition)}};
  return finish(rep, cfg);
}

int cmd_norm_crosscheck(const RunConfig& cfg) {
  const Pair pair = cfg.tame_pair ? build_tame_pair(std::max(cfg.series_degree,
                                                             cfg.crosscheck_max_degree))
                                  : load_pair(cfg);
  Timer timer("norm-crosscheck");
  const auto res =
      norm_crosscheck(pair, cfg.seed, cfg.crosscheck_polynomials, cfg.crosscheck_max_degree);
  auto rep = new_report("norm_crosscheck", cfg, pair.params);
  rep.table = crosscheck_table(res);
  rep.pass = res.pass;
  rep.summary = ojson{{"pair", pair.tag},
                      {"seed", std::to_string(cfg.seed)},
                      {"polynomials", std::to_string(cfg.crosscheck_polynomials)},
                      {"max_rel_err", to_decimal(res.max_rel_err)},
                      {"tolerance", to_decimal(kCrosscheckTolerance)},
                      {"unit_norm_sq", to_decimal(res.one_norm_sq)}};
  return finish(rep, cfg);
}

int run_command(const std::string& verb, const RunConfig& cfg) {
  try {
    if (verb == "construct") return cmd_construct(cfg);
    if (verb == "verify-outer") return cmd_verify_outer(cfg);
    if (verb == "divergence") return cmd_divergence(cfg);
    if (verb == "sarason") return cmd_sarason(cfg);
    if (verb == "summability") return cmd_summability(cfg);
    if (verb == "norm-crosscheck") return cmd_norm_crosscheck(cfg);
    std::cerr << "hblab: unknown command '" << verb << "'\n";
    return kExitConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "hblab: config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const ConstructionInconsistency& e) {
    std::cerr << "hblab: construction inconsistency: " << e.what() << "\n";
    return kExitConstructionInconsistency;
  } catch (const PrecisionExhausted& e) {
    std::cerr << "hblab: precision exhausted: " << e.what() << "\n";
    return kExitPrecisionExhausted;
  } catch (const std::invalid_argument& e) {
    std::cerr << "hblab: invalid parameters: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "hblab: assertion failure: " << e.what() << "\n";
    return kExitAssertionFailure;
  }
}

}  // namespace hblab
