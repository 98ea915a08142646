#pragma once

#include <complex>
#include <limits>
#include <span>

namespace hblab {

// A number stored as (natural log of magnitude, phase). Carries values such as
// exp(e^{40}) that no binary floating type can hold directly.
//
// Zero is log_mag = -inf with phase 0. Phases live in (-pi, pi].
class LogScalar {
 public:
  LogScalar() = default;

  static LogScalar zero() { return {}; }
  static LogScalar one() { return from_log(0.0); }
  static LogScalar from_log(double log_mag, double phase = 0.0);
  static LogScalar from_real(double x);
  static LogScalar from_complex(std::complex<double> z);

  double log_mag() const { return log_mag_; }
  double phase() const { return phase_; }
  double log10_mag() const;

  bool is_zero() const { return log_mag_ == -std::numeric_limits<double>::infinity(); }
  // Strictly positive real, or zero.
  bool is_nonnegative() const { return is_zero() || phase_ == 0.0; }

  // Overflows to inf / underflows to 0 like exp() would.
  double to_double() const;
  std::complex<double> to_complex() const;

  LogScalar conj() const { return from_log(log_mag_, -phase_); }
  LogScalar pow(double p) const;
  LogScalar sqrt() const { return pow(0.5); }

  friend LogScalar operator*(const LogScalar& a, const LogScalar& b);
  friend LogScalar operator/(const LogScalar& a, const LogScalar& b);
  LogScalar& operator*=(const LogScalar& b) { return *this = *this * b; }
  LogScalar& operator/=(const LogScalar& b) { return *this = *this / b; }

  friend bool operator==(const LogScalar&, const LogScalar&) = default;

 private:
  double log_mag_ = -std::numeric_limits<double>::infinity();
  double phase_ = 0.0;
};

// Wraps an angle into (-pi, pi].
double wrap_phase(double phase);

// log(sum |x_i|) for nonnegative terms, by factoring out the largest exponent.
// Throws std::domain_error if any term carries a nonzero phase.
LogScalar log_sum_exp(std::span<const LogScalar> terms);
LogScalar log_sum_exp(const LogScalar& a, const LogScalar& b);

// log(1 + e^x) without overflow.
double softplus(double x);

}  // namespace hblab
