#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hblab/log_scalar.hpp"

namespace hblab {

// Parameters of the radial-growth construction.
struct ConstructionParams {
  double alpha = 1.2;
  double beta = 1.5;
  int n_terms = 8;               // N: number of half-plane steps
  std::optional<int> power_m;    // nullopt means "auto" (choose_power_m)
  int precision_bits = 128;      // Extended precision for series experiments
  int n_check = 5;               // largest n for the growth-bound check
  int r_samples = 33;            // samples per interval [w_n, w_{n+1}]

  // Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

// w_n = 1 - e^{-n^beta}, rho_n = e^{-n^alpha}, t_k = (1-w_k^2)/(1+w_k^2),
// eps_k = ((1-w_k)/(1-w_{k+1})) rho_k. Indices are 1-based, k = 1..N.
// Quantities that underflow for moderate k are kept as logs; 1 - w_n is kept
// separately because forming it from w_n loses all digits once w_n ~ 1.
class Sequences {
 public:
  Sequences() = default;
  int size() const { return static_cast<int>(w_.size()); }

  double w(int n) const { return w_.at(n - 1); }
  double one_minus_w(int n) const { return one_minus_w_.at(n - 1); }
  double log_one_minus_w(int n) const { return log_one_minus_w_.at(n - 1); }
  double log_rho(int n) const { return log_rho_.at(n - 1); }
  double t(int k) const { return t_.at(k - 1); }
  double log_t(int k) const { return log_t_.at(k - 1); }
  double log_eps(int k) const { return log_eps_.at(k - 1); }
  LogScalar eps(int k) const { return LogScalar::from_log(log_eps(k)); }
  // Height eps_k / t_k of the k-th step of log|Phi| on [2t_k, 3t_k].
  double step_height(int k) const { return height_.at(k - 1); }

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  friend Sequences make_sequences(const ConstructionParams& params);

 private:
  double alpha_ = 0, beta_ = 0;
  std::vector<double> w_, one_minus_w_, log_one_minus_w_, log_rho_, t_, log_t_, log_eps_,
      height_;
};

Sequences make_sequences(const ConstructionParams& params);

// (sum_{k=n+1..N} eps_k) / rho_n.
double check_rho_condition(const Sequences& seq, int n);

// log Phi(z) for Im z > 0: the Herglotz integral of the step log-modulus,
// normalized so that log Phi(i) is real.
std::complex<double> log_Phi_halfplane(std::complex<double> z, const Sequences& seq);

// Re log Phi(i y) for y > 0, the Poisson integral in arctan form.
double re_log_Phi_imag_axis(double y, const Sequences& seq);

// i (1 - z) / (1 + z). Throws std::domain_error at z = -1.
std::complex<double> cayley(std::complex<double> z);

// m [log Phi(cayley z) + conj(log Phi(cayley conj z))] for |z| < 1.
std::complex<double> log_phi_disk(std::complex<double> z, int power_m, const Sequences& seq);
std::complex<double> log_phi_disk(std::complex<double> z, const ConstructionParams& params,
                                  const Sequences& seq);

// log phi(x) for real x = 1 - one_minus_x in (-1, 1). Taking 1 - x as the
// argument keeps full relative accuracy for x near 1.
double log_phi_radial(double one_minus_x, int power_m, const Sequences& seq);

// 1 - x y from 1 - x and 1 - y without cancellation.
inline double one_minus_product(double one_minus_x, double one_minus_y) {
  return one_minus_x + one_minus_y - one_minus_x * one_minus_y;
}

struct GrowthCheckRecord {
  int n = 0;
  double r = 0;
  double one_minus_r = 0;
  double u = 0;         // (1 - r w_n) / (1 + r w_n)
  double v = 0;         // (1 - w_n) / (1 + w_n)
  double t = 0;         // t_n
  double log_ratio = 0; // log|phi(r w_n)| - log|phi(w_n)|
  LogScalar bound;      // e^{n^beta - n^alpha}
  bool pass = false;    // log_ratio >= bound
};

// Samples r uniformly in [w_n, w_{n+1}] (r_samples >= 2 points, endpoints
// included) and checks log|phi(r w_n)/phi(w_n)| >= e^{n^beta - n^alpha}.
std::vector<GrowthCheckRecord> verify_growth_bound(int n, int r_samples, int power_m,
                                                   const Sequences& seq);

class PowerSearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxPower = 1000000;

// Smallest m >= 1 for which every sampled record for n = 1..n_check passes.
// Throws PowerSearchError if no m <= kMaxPower works.
int choose_power_m(const ConstructionParams& params, const Sequences& seq);

}  // namespace hblab
