#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hblab/extended.hpp"
#include "hblab/outer_engine.hpp"
#include "hblab/step_modulus.hpp"
#include "hblab/taylor_series.hpp"

namespace hblab {

// The outer functions b and a (with |a|^2 + |b|^2 = 1 on the circle) were
// found to disagree with phi = b/a.
class ConstructionInconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kConstructedTag = "constructed";
inline constexpr const char* kHalfMoebiusTag = "half-moebius";

// Outcome of the power search for m.
struct PowerSearch {
  bool requested_auto = true;  // power_m was "auto" in the parameters
  bool verified = false;       // every growth-bound sample passed with power_m
  std::string note;            // failure reason when not verified

  friend bool operator==(const PowerSearch&, const PowerSearch&) = default;
};

// A pair (b, a) together with phi = b/a.
//
// Boundary data is kept as exact step moduli. Point values come from closed
// forms: outer_eval for a and b, the half-plane construction for phi (or the
// rational formulas for the tame pair).
struct Pair {
  std::string tag = kConstructedTag;
  ConstructionParams params;  // power_m is always resolved here
  PowerSearch power_search;
  Sequences seq;              // empty for the tame pair

  StepModulus phi_modulus;
  StepModulus a_modulus;
  StepModulus b_modulus;

  // Normalization constants log a(0), log b(0) (real).
  double log_a0 = 0;
  double log_b0 = 0;

  // Taylor data in double precision (degree series_degree).
  std::optional<Series> a_series, b_series, phi_series;

  bool is_tame() const { return tag == kHalfMoebiusTag; }
  int power_m() const { return params.power_m.value_or(1); }

  std::complex<double> log_a(std::complex<double> z) const;
  std::complex<double> log_b(std::complex<double> z) const;
  std::complex<double> log_phi(std::complex<double> z) const;
  // log phi(x) for x = 1 - one_minus_x in (-1, 1).
  double log_phi_radial(double one_minus_x) const;
};

// Boundary moduli of phi, a and b for the constructed pair: the half-plane
// steps [2t_k, 3t_k] pushed to the circle through x = tan(theta/2),
// mirrored theta -> -theta and scaled by m, then
//   log|a| = -log(1 + |phi|^2)/2,  log|b| = log|phi| + log|a|.
struct PairModuli {
  StepModulus phi, a, b;
};
PairModuli step_modulus_from_phi(const Sequences& seq, int power_m);

// log|a|, log|b| from log|phi| without overflow.
double log_abs_a_from_log_phi(double log_phi);
double log_abs_b_from_log_phi(double log_phi);

inline constexpr int kDefaultSeriesDegree = 64;

// Builds the constructed pair. power_m "auto" runs choose_power_m; if no m
// satisfies the growth bound the pair is built with m = 1 and
// power_search.verified = false. Throws ConstructionInconsistency if
// b/a = phi fails at the 16 real check points.
Pair build_pair(const ConstructionParams& params, int series_degree = kDefaultSeriesDegree);

// The tame pair b = (1+z)/2, a = (1-z)/2, phi = (1+z)/(1-z). Its moduli are
// 2^14-cell midpoint step approximations (b derived from a so that the pair
// identity holds exactly on every cell).
Pair build_tame_pair(int series_degree = kDefaultSeriesDegree);

// Rebuilds the pair evaluators and series from stored data (used after JSON
// load); recomputes the sequences from the parameters.
void finalize_pair(Pair& pair, int series_degree = kDefaultSeriesDegree);

// Largest |outer_eval(b) - outer_eval(a) - log phi| over the 16 points
// x = -15/16, -13/16, ..., 15/16.
double phi_identity_error(const Pair& pair);

inline constexpr double kPhiIdentityTolerance = 1e-8;

// The 16 real check points.
std::vector<double> phi_check_points();

// Taylor coefficients 0..degree of an analytic function from samples on the
// circle |z| = radius at `samples` equispaced points (default 2*degree):
// discrete Fourier inversion, then coefficient j divided by radius^j.
Series taylor_from_eval(const std::function<std::complex<double>(std::complex<double>)>& f,
                        int degree, double radius, int samples = 0);

// Means of log(1 - |b|^2) = 2 log|a| over the circle.
struct L1LogCheck {
  double signed_mean = 0;  // (1/2pi) int 2 log|a|
  double abs_mean = 0;     // (1/2pi) int |2 log|a||
};
L1LogCheck l1_log_check(const Pair& pair);

// Taylor coefficients of a, b and phi at the current Extended precision.
// The constructed pair uses closed-form log coefficients and exp_series; the
// tame pair uses its exact coefficients.
struct ExtendedPairSeries {
  TaylorSeries<Extended> a, b, phi;
  double condition = 1;  // worst exp_series cancellation ratio
};
ExtendedPairSeries pair_series_extended(const Pair& pair, int degree);

// Streams phi-hat(0), phi-hat(1), ... at the current Extended precision.
class PhiCoefficientStream {
 public:
  explicit PhiCoefficientStream(const Pair& pair);
  Extended next();
  double condition() const;

 private:
  bool tame_ = false;
  int k_ = 0;
  std::optional<RealLogCoefficientStream> logs_;
  std::optional<ExpSeriesGenerator<Extended>> gen_;
};

}  // namespace hblab
