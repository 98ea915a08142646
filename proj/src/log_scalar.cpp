#include "hblab/log_scalar.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hblab {

double wrap_phase(double phase) {
  if (!std::isfinite(phase)) throw std::domain_error("non-finite phase");
  double r = std::remainder(phase, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

LogScalar LogScalar::from_log(double log_mag, double phase) {
  if (std::isnan(log_mag)) throw std::domain_error("LogScalar: NaN log magnitude");
  LogScalar s;
  s.log_mag_ = log_mag;
  s.phase_ = s.is_zero() ? 0.0 : wrap_phase(phase);
  return s;
}

LogScalar LogScalar::from_real(double x) {
  if (x == 0.0) return zero();
  return from_log(std::log(std::abs(x)), x < 0 ? std::numbers::pi : 0.0);
}

LogScalar LogScalar::from_complex(std::complex<double> z) {
  if (z == 0.0) return zero();
  return from_log(std::log(std::abs(z)), std::arg(z));
}

double LogScalar::log10_mag() const { return log_mag_ / std::numbers::ln10; }

double LogScalar::to_double() const {
  const double mag = std::exp(log_mag_);
  if (phase_ == 0.0) return mag;
  if (phase_ == std::numbers::pi) return -mag;
  return mag * std::cos(phase_);
}

std::complex<double> LogScalar::to_complex() const {
  if (phase_ == 0.0) return {std::exp(log_mag_), 0.0};
  return std::polar(std::exp(log_mag_), phase_);
}

LogScalar LogScalar::pow(double p) const {
  if (is_zero()) {
    if (p > 0) return zero();
    if (p == 0) return one();
    throw std::domain_error("LogScalar: negative power of zero");
  }
  return from_log(p * log_mag_, p * phase_);
}

LogScalar operator*(const LogScalar& a, const LogScalar& b) {
  if (a.is_zero() || b.is_zero()) return LogScalar::zero();
  return LogScalar::from_log(a.log_mag_ + b.log_mag_, a.phase_ + b.phase_);
}

LogScalar operator/(const LogScalar& a, const LogScalar& b) {
  if (b.is_zero()) throw std::domain_error("LogScalar: division by zero");
  if (a.is_zero()) return LogScalar::zero();
  return LogScalar::from_log(a.log_mag_ - b.log_mag_, a.phase_ - b.phase_);
}

LogScalar log_sum_exp(std::span<const LogScalar> terms) {
  double max_log = -std::numeric_limits<double>::infinity();
  std::size_t arg_max = 0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!terms[i].is_nonnegative()) {
      throw std::domain_error("log_sum_exp: term " + std::to_string(i) +
                              " has nonzero phase");
    }
    if (terms[i].log_mag() > max_log) {
      max_log = terms[i].log_mag();
      arg_max = i;
    }
  }
  if (max_log == -std::numeric_limits<double>::infinity()) return LogScalar::zero();
  if (max_log == std::numeric_limits<double>::infinity()) return LogScalar::from_log(max_log);
  double rest = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i != arg_max) rest += std::exp(terms[i].log_mag() - max_log);
  }
  return LogScalar::from_log(max_log + std::log1p(rest));
}

LogScalar log_sum_exp(const LogScalar& a, const LogScalar& b) {
  const LogScalar pair[2] = {a, b};
  return log_sum_exp(std::span<const LogScalar>(pair, 2));
}

double softplus(double x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

}  // namespace hblab
