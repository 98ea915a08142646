#include "hblab/step_modulus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

#include "hblab/detail/complex_math.hpp"

namespace hblab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

StepModulus::StepModulus(std::vector<Cell> cells, double default_log_modulus)
    : cells_(std::move(cells)), default_(default_log_modulus) {
  if (!std::isfinite(default_)) throw std::invalid_argument("StepModulus: non-finite default");
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const Cell& c = cells_[i];
    if (!(std::isfinite(c.theta_start) && std::isfinite(c.theta_end) &&
          std::isfinite(c.log_modulus))) {
      throw std::invalid_argument("StepModulus: non-finite cell " + std::to_string(i));
    }
    if (!(c.theta_start < c.theta_end)) {
      throw std::invalid_argument("StepModulus: empty or reversed cell " + std::to_string(i));
    }
    if (c.theta_start < -kPi || c.theta_end > kPi) {
      throw std::invalid_argument("StepModulus: cell " + std::to_string(i) +
                                  " leaves [-pi, pi]");
    }
    if (i > 0 && cells_[i - 1].theta_end > c.theta_start) {
      throw std::invalid_argument("StepModulus: cells " + std::to_string(i - 1) + " and " +
                                  std::to_string(i) + " overlap or are unsorted");
    }
  }
}

StepModulus StepModulus::from_overlapping(const std::vector<Cell>& arcs,
                                          double default_log_modulus) {
  std::set<double> cuts;
  for (const auto& a : arcs) {
    if (!(a.theta_start < a.theta_end)) throw std::invalid_argument("from_overlapping: bad arc");
    cuts.insert(a.theta_start);
    cuts.insert(a.theta_end);
  }
  std::vector<double> pts(cuts.begin(), cuts.end());
  std::vector<Cell> cells;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double lo = pts[i], hi = pts[i + 1];
    double extra = 0.0;
    bool covered = false;
    for (const auto& a : arcs) {
      if (a.theta_start <= lo && hi <= a.theta_end) {
        extra += a.log_modulus;
        covered = true;
      }
    }
    if (covered) cells.push_back({lo, hi, default_log_modulus + extra});
  }
  return StepModulus(std::move(cells), default_log_modulus);
}

double StepModulus::value_at(double theta) const {
  for (const auto& c : cells_) {
    if (c.theta_start <= theta && theta < c.theta_end) return c.log_modulus;
  }
  return default_;
}

double StepModulus::mean() const {
  double acc = default_;
  for (const auto& c : cells_) acc += (c.log_modulus - default_) * c.length() / kTwoPi;
  return acc;
}

double StepModulus::abs_mean() const {
  double covered = 0.0, acc = 0.0;
  for (const auto& c : cells_) {
    covered += c.length();
    acc += std::abs(c.log_modulus) * c.length();
  }
  acc += std::abs(default_) * (kTwoPi - covered);
  return acc / kTwoPi;
}

bool StepModulus::is_symmetric() const {
  const std::size_t n = cells_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Cell& a = cells_[i];
    const Cell& b = cells_[n - 1 - i];
    if (a.theta_start != -b.theta_end || a.theta_end != -b.theta_start ||
        a.log_modulus != b.log_modulus) {
      return false;
    }
  }
  return true;
}

StepModulus StepModulus::transformed(const std::function<double(double)>& f) const {
  std::vector<Cell> out = cells_;
  for (auto& c : out) c.log_modulus = f(c.log_modulus);
  return StepModulus(std::move(out), f(default_));
}

std::complex<double> outer_eval(const StepModulus& mod, std::complex<double> z) {
  if (!(std::abs(z) < 1.0)) throw std::domain_error("outer_eval: need |z| < 1");
  const double base = mod.default_log_modulus();
  std::complex<double> acc = base;
  for (const auto& c : mod.cells()) {
    const double h = c.log_modulus - base;
    if (h == 0.0) continue;
    const double width = c.length();
    const std::complex<double> start = std::polar(1.0, c.theta_start);
    // e^{i theta_end} - e^{i theta_start}
    const std::complex<double> chord =
        std::complex<double>(0.0, 2.0 * std::sin(0.5 * width)) *
        std::polar(1.0, 0.5 * (c.theta_start + c.theta_end));
    const std::complex<double> L = detail::log1p_complex(chord / (start - z));
    // arg(e^{it} - z) increases strictly along the arc, by less than 2 pi.
    double sweep = L.imag();
    if (sweep <= 0.0) sweep += kTwoPi;
    acc += std::complex<double>(h / kTwoPi * (2.0 * sweep - width), -h / kPi * L.real());
  }
  return acc;
}

Series outer_log_coefficients(const StepModulus& mod, int degree) {
  if (degree < 0) throw std::invalid_argument("outer_log_coefficients: negative degree");
  auto out = Series::zero(degree);
  out[0] = mod.mean();
  const double base = mod.default_log_modulus();
  for (int k = 1; k <= degree; ++k) {
    std::complex<double> acc = 0.0;
    for (const auto& c : mod.cells()) {
      const double h = c.log_modulus - base;
      const double center = 0.5 * (c.theta_start + c.theta_end);
      acc += h * std::polar(1.0, -k * center) * (2.0 * std::sin(0.5 * k * c.length()) / k);
    }
    out[k] = acc / kPi;
  }
  return out;
}

RealLogCoefficientStream::RealLogCoefficientStream(const StepModulus& mod) {
  if (!mod.is_symmetric()) {
    throw std::invalid_argument("RealLogCoefficientStream: modulus is not symmetric");
  }
  const Extended base = mod.default_log_modulus();
  const Extended pi = extended_pi();
  mean_ = base;
  for (const auto& c : mod.cells()) {
    const Extended center = (Extended(c.theta_start) + Extended(c.theta_end)) / 2;
    const Extended half_width = (Extended(c.theta_end) - Extended(c.theta_start)) / 2;
    ArcData a;
    a.height = Extended(c.log_modulus) - base;
    mean_ += a.height * half_width / pi;
    a.cos_c1 = cos(center);
    a.sin_c1 = sin(center);
    a.cos_w1 = cos(half_width);
    a.sin_w1 = sin(half_width);
    a.cos_ck = 1;
    a.sin_ck = 0;
    a.cos_wk = 1;
    a.sin_wk = 0;
    arcs_.push_back(std::move(a));
  }
}

Extended RealLogCoefficientStream::next() {
  const int k = k_++;
  if (k == 0) return mean_;
  // gamma_k = (2/(pi k)) sum_arcs h cos(k c) sin(k w). The angles advance by
  // exact rotations; the rounding drift is O(k ulp), far below the working
  // precision for the expansion lengths used here.
  Extended acc = 0;
  Extended tmp;
  for (auto& a : arcs_) {
    tmp = a.cos_ck * a.cos_c1 - a.sin_ck * a.sin_c1;
    a.sin_ck = a.sin_ck * a.cos_c1 + a.cos_ck * a.sin_c1;
    a.cos_ck = tmp;
    tmp = a.cos_wk * a.cos_w1 - a.sin_wk * a.sin_w1;
    a.sin_wk = a.sin_wk * a.cos_w1 + a.cos_wk * a.sin_w1;
    a.cos_wk = tmp;
    acc += a.height * a.cos_ck * a.sin_wk;
  }
  return acc * 2 / (pi_ * k);
}

TaylorSeries<Extended> outer_log_coefficients_real(const StepModulus& mod, int degree) {
  RealLogCoefficientStream stream(mod);
  std::vector<Extended> c;
  c.reserve(static_cast<std::size_t>(degree) + 1);
  for (int k = 0; k <= degree; ++k) c.push_back(stream.next());
  return TaylorSeries<Extended>(std::move(c),
                                extended_bits());
}

}  // namespace hblab
