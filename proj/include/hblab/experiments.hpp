#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hblab/extended.hpp"
#include "hblab/hb_ops.hpp"
#include "hblab/log_scalar.hpp"
#include "hblab/pair.hpp"

namespace hblab {

// x as a LogScalar (negative values get phase pi).
LogScalar to_log_scalar(const Extended& x);

// The paper's test function f = sum_{j=1..N} c_j k_{w_j} with
// c_j = (1 - w_j)^{1/2} / (j^2 phi(w_j)). Throws std::runtime_error if a
// kernel-condition term exceeds 2/j^2 beyond rounding.
KernelCombo build_paper_f(const Pair& pair);

// (f_r)+(0) = sum_j c_j phi(r w_j) (r = 0 allowed).
LogScalar fr_plus_at_zero(double r, const KernelCombo& f, const Pair& pair);

// Taylor coefficients f-hat(j) = sum_m c_m w_m^j, j = 0..degree, at the
// current Extended precision (w_m = 1 - (1 - w_m) formed exactly).
std::vector<Extended> kernel_combo_coefficients(const KernelCombo& f, int degree);

// Abel series sum_j r^j f-hat(j) phi-hat(j) for several r, sharing one
// phi-hat stream. Summation for a given r stops once `window` consecutive
// terms are each below rel_tol times the running sum.
struct AbelSeriesResult {
  double r = 0;
  Extended value;
  int terms = 0;
};
struct AbelSeriesOptions {
  double rel_tol = 1e-12;
  int window = 32;
  int max_terms = 200000;
};
// Throws PrecisionExhausted when the phi-hat recurrence loses more digits
// than the working precision carries, std::runtime_error if max_terms is hit.
std::vector<AbelSeriesResult> abel_series(const std::vector<double>& rs, const KernelCombo& f,
                                          const Pair& pair, AbelSeriesOptions opts = {});

// True if an exp_series/back-substitution cancellation ratio leaves fewer
// than `needed_digits` correct decimal digits at `bits` mantissa bits.
bool precision_exhausted(double condition, int bits, double needed_digits);

// Interval index max{k <= N-1 : w_k <= r}, or 0 when r < w_1.
int interval_index(double r, const Sequences& seq);

// ln of e^{-n^beta/2} exp(e^{n^beta - n^alpha}) / n^2.
double log_divergence_bound(int n, const Sequences& seq);

// Midpoints and endpoints of [w_n, w_{n+1}] for n = 1..n_check plus 16
// uniform points strictly inside (w_1, w_{n_check}); sorted, no duplicates.
std::vector<double> default_r_grid(const Pair& pair);

struct DivergenceRow {
  double r = 0;
  LogScalar fr_plus0;             // (f_r)+(0)
  LogScalar hb_norm;              // ||f_r||_{H(b)}
  LogScalar plus_norm;            // ||(f_r)+||_{H^2}
  int n = 0;                      // interval index
  std::optional<double> log_bound;  // ln bound, for 1 <= n <= n_check
  bool bound_ok = true;
  bool chain_ok = true;           // ||f_r|| >= ||(f_r)+|| >= |(f_r)+(0)|
  bool pass = true;
};
struct DivergenceReport {
  std::vector<DivergenceRow> rows;
  bool pass = true;
};
DivergenceReport divergence_curve(const std::vector<double>& r_grid, const KernelCombo& f,
                                  const Pair& pair);

struct EnvelopeRow {
  double r = 0;
  double log_norm = 0;  // ln ||f_r||_{H(b)}
  double E = 0;         // ln||f_r|| (1-r) exp((ln 1/(1-r))^{alpha/beta})
  double trend = 0;     // ln||f_r|| (1-r)
};
struct EnvelopeReport {
  std::vector<EnvelopeRow> rows;
  double c_empirical = 0;  // min E over the grid
  bool pass = false;       // c_empirical > 0
};
// Rows for the grid points r > w_1.
EnvelopeReport growth_envelope(const std::vector<double>& r_grid, const KernelCombo& f,
                               const Pair& pair);

struct SarasonRow {
  int J = 0;
  Extended S;  // sum_{j<=J} f-hat(j) phi-hat(j)
};
struct SarasonReport {
  std::vector<SarasonRow> rows;
  Extended growth_ratio;  // S_{J_max} / S_{J_max/2}
  bool monotone = false;  // S_J strictly increasing over the computed range
  double condition = 1;
  bool pass = false;      // growth_ratio > 1
};
inline constexpr int kDefaultSarasonJmax = 1024;
// Throws PrecisionExhausted if the working precision cannot carry J_max.
SarasonReport sarason_series_failure(int j_max, const KernelCombo& f, const Pair& pair);

struct SummabilityRow {
  int n = 0;
  LogScalar sn_norm;      // ||s_n(f)||_{H(b)}
  LogScalar sigma_norm;   // ||sigma_n(f)||_{H(b)}
  LogScalar sn_max;       // max_{k<=n} ||s_k||
  LogScalar sigma_max;    // max_{k<=n} ||sigma_k||
  bool convex_ok = true;  // ||sigma_n|| <= max_{k<=n} ||s_k||
};
struct SummabilityReport {
  std::vector<SummabilityRow> rows;
  bool sn_growth = false;     // running max strictly larger at the last n than at n = 8
  bool sigma_growth = false;
  bool convex_ok = true;
  double condition = 1;
  bool pass = false;
};
inline constexpr int kDefaultSummabilityMaxN = 64;
// n_list must be increasing and within 0..64-ish (series degree = max n).
SummabilityReport summability_divergence(const std::vector<int>& n_list, const KernelCombo& f,
                                         const Pair& pair);

// Sarason-formula norm versus triangular-solve norm on seeded random
// polynomials (coefficients uniform in the unit square, degree uniform in
// 0..max_degree), plus the exact case f = 1.
struct CrosscheckRow {
  int index = 0;         // polynomial number; -1 for the f = 1 row
  int degree = 0;
  double norm_sq_sarason = 0;
  double norm_sq_solve = 0;
  double rel_err = 0;
  bool pass = true;
};
struct CrosscheckReport {
  std::vector<CrosscheckRow> rows;
  double max_rel_err = 0;
  double one_norm_sq = 0;       // ||1||^2_{H(b)} by the solve path
  std::optional<double> one_expected;  // 2 for the tame pair
  bool pass = true;
};
inline constexpr double kCrosscheckTolerance = 1e-9;
inline constexpr double kUnitNormTolerance = 1e-12;
CrosscheckReport norm_crosscheck(const Pair& pair, std::uint64_t seed, int count, int max_degree);

// Random polynomial of the given degree with coefficients uniform in
// [-1, 1] + i[-1, 1], drawn from a 64-bit Mersenne Twister.
Series random_polynomial(std::mt19937_64& rng, int degree);

// Relative slack for comparisons whose two sides are computed by different
// rounding paths but are mathematically ordered.
inline constexpr double kOrderSlack = 1e-12;

}  // namespace hblab
