#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "hblab/extended.hpp"
#include "hblab/taylor_series.hpp"

namespace hblab {

struct Cell {
  double theta_start = 0;
  double theta_end = 0;
  double log_modulus = 0;

  double length() const { return theta_end - theta_start; }
  friend bool operator==(const Cell&, const Cell&) = default;
};

// A boundary log-modulus on the circle that is constant on finitely many arcs
// and equal to default_log_modulus elsewhere. Cells are sorted, pairwise
// disjoint and contained in [-pi, pi].
class StepModulus {
 public:
  StepModulus() = default;
  StepModulus(std::vector<Cell> cells, double default_log_modulus);

  // Builds the refinement of possibly overlapping arcs; heights add where
  // arcs overlap.
  static StepModulus from_overlapping(const std::vector<Cell>& arcs, double default_log_modulus);

  const std::vector<Cell>& cells() const { return cells_; }
  double default_log_modulus() const { return default_; }

  double value_at(double theta) const;
  // (1/2pi) * integral of the log-modulus.
  double mean() const;
  // (1/2pi) * integral of |log-modulus|.
  double abs_mean() const;
  // Cells come in mirrored pairs theta <-> -theta with equal values.
  bool is_symmetric() const;

  // Applies f to every cell value and to the default value.
  StepModulus transformed(const std::function<double(double)>& f) const;

  friend bool operator==(const StepModulus&, const StepModulus&) = default;

 private:
  std::vector<Cell> cells_;
  double default_ = 0;
};

// log F(z), F the outer function with boundary log-modulus `mod`, normalized
// so that F(0) > 0. Closed-form Schwarz integral over each arc.
std::complex<double> outer_eval(const StepModulus& mod, std::complex<double> z);

// Taylor coefficients of log F (closed-form Fourier coefficients of the step
// log-modulus): gamma_0 = mean, gamma_k = (1/pi) int L(t) e^{-ikt} dt.
TaylorSeries<std::complex<double>> outer_log_coefficients(const StepModulus& mod, int degree);

// Same for a symmetric modulus, where every coefficient is real, computed at
// the current Extended precision.
TaylorSeries<Extended> outer_log_coefficients_real(const StepModulus& mod, int degree);

// Incremental version of outer_log_coefficients_real for long expansions.
class RealLogCoefficientStream {
 public:
  explicit RealLogCoefficientStream(const StepModulus& mod);
  // gamma_k for k = 0, 1, 2, ... in order.
  Extended next();

 private:
  // cos/sin of k*center and k*half_width advanced by one rotation per step.
  struct ArcData {
    Extended height;
    Extended cos_c1, sin_c1, cos_w1, sin_w1;  // angle k = 1
    Extended cos_ck, sin_ck, cos_wk, sin_wk;  // angle k (current)
  };
  std::vector<ArcData> arcs_;
  Extended mean_;
  Extended pi_ = extended_pi();
  int k_ = 0;
};

}  // namespace hblab
