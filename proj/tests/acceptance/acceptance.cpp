// Acceptance runner: `acceptance A<n>` evaluates one criterion and prints a
// single "A<n> PASS ..." or "A<n> FAIL ..." line; `acceptance all` runs every
// criterion. The exit status is 0 only if every requested criterion passed.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hblab/experiments.hpp"
#include "hblab/hb_ops.hpp"
#include "hblab/outer_engine.hpp"
#include "hblab/pair.hpp"
#include "oracles/oracles.hpp"

using namespace hblab;
using cplx = std::complex<double>;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// The construction exactly as the default configuration requests it
// (power_m "auto").
const Pair& default_pair() {
  static const Pair pair = build_pair(ConstructionParams{});
  return pair;
}

// ---------------------------------------------------------------------------
// A1: |a|^2 + |b|^2 = 1 on every cell, to 1e-12.
Outcome a1() {
  const Pair& pair = default_pair();
  double worst = 0.0;
  const auto& ac = pair.a_modulus.cells();
  const auto& bc = pair.b_modulus.cells();
  if (ac.size() != bc.size()) return {false, "a and b cell lists differ"};
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (ac[i].theta_start != bc[i].theta_start || ac[i].theta_end != bc[i].theta_end) {
      return {false, "a and b cells are not aligned"};
    }
    worst = std::max(worst, std::abs(std::exp(2 * ac[i].log_modulus) + std::exp(2 * bc[i].log_modulus) - 1.0));
  }
  worst = std::max(worst, std::abs(std::exp(2 * pair.a_modulus.default_log_modulus()) +
                                   std::exp(2 * pair.b_modulus.default_log_modulus()) - 1.0));
  return {worst <= 1e-12, "cells=" + std::to_string(ac.size()) + " max_err=" + fmt(worst) + " tol=1e-12"};
}

// A2: log a(0) = mean of log|a| (1e-12); a(0), b(0) > 0; b/a = phi at 16 real
// points (1e-8).
Outcome a2() {
  const Pair& pair = default_pair();
  const cplx la0 = pair.log_a(0.0), lb0 = pair.log_b(0.0);
  const double mean_err = std::max(std::abs(la0.real() - pair.a_modulus.mean()),
                                   std::abs(pair.log_a0 - pair.a_modulus.mean()));
  const cplx a0 = std::exp(la0), b0 = std::exp(lb0);
  const bool positive = a0.real() > 0 && b0.real() > 0 && std::abs(a0.imag()) <= 1e-15 &&
                        std::abs(b0.imag()) <= 1e-15;
  double phi_err = 0.0;
  const auto pts = phi_check_points();
  for (double x : pts) {
    const cplx z(x, 0.0);
    phi_err = std::max(phi_err, std::abs(pair.log_b(z) - pair.log_a(z) - pair.log_phi(z)));
  }
  const bool ok = mean_err <= 1e-12 && positive && phi_err <= 1e-8 && pts.size() == 16;
  return {ok, "mean_err=" + fmt(mean_err) + " a0=" + fmt(a0.real()) + " b0=" + fmt(b0.real()) +
                  " phi_err=" + fmt(phi_err) + " tol=1e-12/1e-8"};
}

// A3: Sarason vs solve norms on 100 seeded polynomials (degree <= 32), tame
// pair; ||1||^2 = 2.
Outcome a3() {
  const Pair tame = build_tame_pair(32);
  const auto rep = norm_crosscheck(tame, 42, 100, 32);
  const bool unit = std::abs(rep.one_norm_sq - 2.0) <= 1e-12;
  const bool ok = rep.max_rel_err <= 1e-9 && unit && rep.rows.size() == 101;
  return {ok, "max_rel_err=" + fmt(rep.max_rel_err) + " tol=1e-9 unit_norm_sq=" +
                  fmt(rep.one_norm_sq) + " tol=1e-12"};
}

// A4: <p, k_w^b> = p(w) for 20 seeded polynomials, tame pair.
Outcome a4() {
  const int degree = 128;  // 0.7^129 ~ 1e-20: kernel truncation is invisible
  const Pair tame = build_tame_pair(degree);
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> deg(0, 16);
  const std::vector<cplx> ws = {0.1, 0.4, 0.7, cplx(0.3, 0.2)};
  std::vector<Series> kernels;
  for (const auto& w : ws) kernels.push_back(kernel_hb(w, tame, degree));
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto p = random_polynomial(rng, deg(rng));
    for (std::size_t j = 0; j < ws.size(); ++j) {
      const cplx got = hb_inner(HbFunction(p.truncated(degree)), HbFunction(kernels[j]), tame);
      worst = std::max(worst, std::abs(got - oracle::horner(p.coeffs(), ws[j])));
    }
  }
  return {worst <= 1e-8, "polynomials=20 points=4 max_err=" + fmt(worst) + " tol=1e-8"};
}

// A5: growth bound with m from choose_power_m, plus closed form vs quadrature
// at 50 points.
Outcome a5() {
  ConstructionParams p;  // alpha 1.2, beta 1.5, n_check 5, 33 samples
  const auto seq = make_sequences(p);

  // Quadrature half.
  std::vector<double> t, h;
  for (int k = 1; k <= seq.size(); ++k) {
    t.push_back(seq.t(k));
    h.push_back(seq.step_height(k));
  }
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ly(std::log(seq.t(seq.size())), 0.0), ux(-1.0, 1.0);
  double quad_err = 0.0;
  for (int i = 0; i < 50; ++i) {
    const cplx z(ux(rng), std::exp(ly(rng)));
    const double want = oracle::poisson_re_log_Phi(z, t, h);
    quad_err = std::max(quad_err, std::abs(log_Phi_halfplane(z, seq).real() - want) / std::abs(want));
  }
  const bool quad_ok = quad_err <= 1e-8;
  std::string detail = "quadrature_max_rel_err=" + fmt(quad_err) + " tol=1e-8";

  // Growth half.
  int m = 0;
  try {
    m = choose_power_m(p, seq);
  } catch (const PowerSearchError& e) {
    // Report the best sample with m = 1: log_ratio scales linearly in m, so a
    // nonpositive value means no m can work.
    double worst = INFINITY;
    int worst_n = 0;
    for (int n = 1; n <= p.n_check; ++n) {
      for (const auto& r : verify_growth_bound(n, p.r_samples, 1, seq)) {
        if (r.log_ratio < worst) {
          worst = r.log_ratio;
          worst_n = n;
        }
      }
    }
    return {false, detail + " growth: no power m exists (" + e.what() + "); min log_ratio(m=1)=" +
                       fmt(worst) + " at n=" + std::to_string(worst_n)};
  }
  int failing = 0, total = 0;
  for (int n = 1; n <= p.n_check; ++n) {
    for (const auto& r : verify_growth_bound(n, p.r_samples, m, seq)) {
      ++total;
      if (!r.pass) ++failing;
    }
  }
  return {quad_ok && failing == 0, detail + " m=" + std::to_string(m) + " samples=" +
                                       std::to_string(total) + " failing=" + std::to_string(failing)};
}

// A6: (f_r)+(0) at the midpoints of [w_n, w_{n+1}], n = 2..6: strictly
// increasing, above the closed bound, and below ||f_r||.
Outcome a6() {
  const Pair& pair = default_pair();
  const auto f = build_paper_f(pair);
  const auto& seq = pair.seq;
  bool increasing = true, bound_ok = true, chain_ok = true;
  double prev = -INFINITY;
  std::ostringstream rows;
  for (int n = 2; n <= 6; ++n) {
    const double r = 0.5 * (seq.w(n) + seq.w(n + 1));
    const double v = fr_plus_at_zero(r, f, pair).log_mag();
    const double bound = log_divergence_bound(n, seq);
    const double norm = 0.5 * gram_norms(dilate(f, r), pair).total_sq().log_mag();
    increasing = increasing && v > prev;
    const bool b = v >= bound;
    bound_ok = bound_ok && b;
    chain_ok = chain_ok && norm >= v - kOrderSlack;
    rows << " n" << n << ":log10=" << fmt(v / std::log(10.0)) << (b ? ">=" : "<")
         << "bound=" << fmt(bound / std::log(10.0));
    prev = v;
  }
  return {increasing && bound_ok && chain_ok,
          std::string("increasing=") + (increasing ? "yes" : "no") + " bound=" +
              (bound_ok ? "ok" : "violated") + " norm_chain=" + (chain_ok ? "ok" : "violated") +
              rows.str()};
}

// A7: Gram form (f_r)+(0) vs Abel series at r in {w_1, mid(w_1, w_2), w_3}.
Outcome a7() {
  const Pair& pair = default_pair();
  const auto f = build_paper_f(pair);
  const auto& seq = pair.seq;
  const std::vector<double> rs = {seq.w(1), 0.5 * (seq.w(1) + seq.w(2)), seq.w(3)};
  int bits = pair.params.precision_bits;
  std::vector<AbelSeriesResult> abel;
  for (;;) {
    try {
      ScopedPrecision prec(bits);
      abel = abel_series(rs, f, pair);
      break;
    } catch (const PrecisionExhausted&) {
      if (bits >= 4096) return {false, "precision exhausted at 4096 bits"};
      bits *= 2;
    }
  }
  double worst = 0.0;
  std::ostringstream os;
  for (const auto& a : abel) {
    ScopedPrecision prec(bits);
    const double gram = fr_plus_at_zero(a.r, f, pair).log_mag();
    const double rel = std::abs(std::expm1(static_cast<double>(log(a.value)) - gram));
    worst = std::max(worst, rel);
    os << " r=" << fmt(a.r) << ":terms=" << a.terms << ",rel=" << fmt(rel);
  }
  return {worst <= 1e-6, "bits=" + std::to_string(bits) + " max_rel_err=" + fmt(worst) +
                             " tol=1e-6" + os.str()};
}

// A8: running maxima of ||s_n|| and ||sigma_n|| strictly increase from n = 8 to
// n = 64; ||sigma_n|| <= max_{k<=n} ||s_k|| on every row.
Outcome a8() {
  const Pair& pair = default_pair();
  const auto f = build_paper_f(pair);
  ScopedPrecision prec(pair.params.precision_bits);
  std::vector<int> ns;
  for (int n = 0; n <= 64; ++n) ns.push_back(n);
  const auto rep = summability_divergence(ns, f, pair);
  bool sn_inc = true, sigma_inc = true, convex = true;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& row = rep.rows[i];
    convex = convex && row.sigma_norm.log_mag() <= row.sn_max.log_mag() + kOrderSlack;
    if (row.n > 8) {
      const auto& prev = rep.rows[i - 1];
      sn_inc = sn_inc && row.sn_max.log_mag() > prev.sn_max.log_mag();
      sigma_inc = sigma_inc && row.sigma_max.log_mag() > prev.sigma_max.log_mag();
    }
  }
  const auto& first = rep.rows[8];
  const auto& last = rep.rows.back();
  return {sn_inc && sigma_inc && convex,
          std::string("sn_max strictly increasing=") + (sn_inc ? "yes" : "no") +
              " sigma_max strictly increasing=" + (sigma_inc ? "yes" : "no") +
              " convexity=" + (convex ? "ok" : "violated") + " log10 sn_max n8=" +
              fmt(first.sn_max.log10_mag()) + " n64=" + fmt(last.sn_max.log10_mag()) +
              " bits=" + std::to_string(pair.params.precision_bits)};
}

// A9: min_r E(r) over the default grid is strictly positive.
Outcome a9() {
  const Pair& pair = default_pair();
  const auto f = build_paper_f(pair);
  const auto env = growth_envelope(default_r_grid(pair), f, pair);
  return {!env.rows.empty() && env.c_empirical > 0.0,
          "c_empirical=" + fmt(env.c_empirical) + " rows=" + std::to_string(env.rows.size())};
}

// A10: every command, run twice with identical config and seed, writes
// byte-identical JSON.
int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + HBLAB_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome a10() {
  const fs::path root = fs::path(HBLAB_TEST_TMP) / "a10";
  fs::remove_all(root);
  fs::create_directories(root);
  {
    std::ofstream(root / "tame.json") << R"({"tame_pair": "half-moebius"})";
  }
  const std::vector<std::string> verbs = {"construct", "verify-outer", "divergence",
                                          "sarason", "summability", "norm-crosscheck"};
  for (const char* run : {"run1", "run2"}) {
    const std::string out = (root / run / "constructed").string();
    for (const auto& v : verbs) {
      const int code = run_cli(v + " --out " + out + " --seed 42 --format json");
      if (code != 0 && code != 4) return {false, v + " exited " + std::to_string(code)};
    }
    const std::string tame_out = (root / run / "tame").string();
    const int code = run_cli("norm-crosscheck --config " + (root / "tame.json").string() +
                             " --out " + tame_out + " --seed 42 --format json");
    if (code != 0) return {false, "tame norm-crosscheck exited " + std::to_string(code)};
  }
  int compared = 0;
  for (const auto& sub : {"constructed", "tame"}) {
    for (const auto& entry : fs::directory_iterator(root / "run1" / sub)) {
      if (entry.path().extension() != ".json") continue;
      const fs::path other = root / "run2" / sub / entry.path().filename();
      if (!fs::exists(other)) return {false, "missing " + other.string()};
      if (read_file(entry.path()) != read_file(other)) {
        return {false, "JSON differs: " + std::string(sub) + "/" + entry.path().filename().string()};
      }
      ++compared;
    }
  }
  return {compared >= 8, "identical JSON files=" + std::to_string(compared)};
}

struct Criterion {
  std::function<Outcome()> run;
  double max_seconds;  // runtime budget; 0 means none stated
};

const std::map<std::string, Criterion>& criteria() {
  static const std::map<std::string, Criterion> c = {
      {"A1", {a1, 1}},    {"A2", {a2, 5}},    {"A3", {a3, 10}},  {"A4", {a4, 5}},
      {"A5", {a5, 60}},   {"A6", {a6, 60}},   {"A7", {a7, 120}}, {"A8", {a8, 300}},
      {"A9", {a9, 60}},   {"A10", {a10, 0}}};
  return c;
}

bool run_one(const std::string& id) {
  const auto& c = criteria().at(id);
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = c.max_seconds <= 0 || secs < c.max_seconds;
  const bool pass = o.pass && in_time;
  std::cout << id << (pass ? " PASS " : " FAIL ") << o.detail << " runtime=" << fmt(secs) << "s";
  if (c.max_seconds > 0) std::cout << " budget=" << c.max_seconds << "s" << (in_time ? "" : " (exceeded)");
  std::cout << std::endl;
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance A1..A10 | all\n";
    return 2;
  }
  const std::string what = argv[1];
  if (what == "all") {
    bool ok = true;
    for (int i = 1; i <= 10; ++i) ok = run_one("A" + std::to_string(i)) && ok;
    return ok ? 0 : 1;
  }
  if (!criteria().count(what)) {
    std::cerr << "unknown criterion '" << what << "'\n";
    return 2;
  }
  return run_one(what) ? 0 : 1;
}
