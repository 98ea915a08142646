#include "hblab/pair.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hblab/log_scalar.hpp"

namespace hblab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kTameCells = 1 << 14;

Series tame_a_series(int degree) {
  auto s = Series::zero(std::max(degree, 1));
  s[0] = 0.5;
  s[1] = -0.5;
  return s.truncated(degree);
}

Series tame_b_series(int degree) {
  auto s = Series::zero(std::max(degree, 1));
  s[0] = 0.5;
  s[1] = 0.5;
  return s.truncated(degree);
}

Series tame_phi_series(int degree) {
  auto s = Series::zero(degree);
  s[0] = 1.0;
  for (int k = 1; k <= degree; ++k) s[k] = 2.0;
  return s;
}

}  // namespace

double log_abs_a_from_log_phi(double log_phi) { return -0.5 * softplus(2.0 * log_phi); }

double log_abs_b_from_log_phi(double log_phi) {
  return log_phi + log_abs_a_from_log_phi(log_phi);
}

std::complex<double> Pair::log_a(std::complex<double> z) const {
  if (is_tame()) return std::log(0.5 * (1.0 - z));
  return outer_eval(a_modulus, z);
}

std::complex<double> Pair::log_b(std::complex<double> z) const {
  if (is_tame()) return std::log(0.5 * (1.0 + z));
  return outer_eval(b_modulus, z);
}

std::complex<double> Pair::log_phi(std::complex<double> z) const {
  if (is_tame()) {
    if (!(std::abs(z) < 1.0)) throw std::domain_error("log_phi: need |z| < 1");
    return std::log((1.0 + z) / (1.0 - z));
  }
  return log_phi_disk(z, power_m(), seq);
}

double Pair::log_phi_radial(double one_minus_x) const {
  if (is_tame()) {
    if (!(one_minus_x > 0.0 && one_minus_x < 2.0)) {
      throw std::domain_error("log_phi_radial: need -1 < x < 1");
    }
    return std::log((2.0 - one_minus_x) / one_minus_x);
  }
  return hblab::log_phi_radial(one_minus_x, power_m(), seq);
}

PairModuli step_modulus_from_phi(const Sequences& seq, int power_m) {
  std::vector<Cell> positive;
  for (int k = 1; k <= seq.size(); ++k) {
    const double t = seq.t(k);
    const double lo = 2.0 * std::atan(2.0 * t);
    const double hi = 2.0 * std::atan(3.0 * t);
    if (!(0.0 < lo && lo < hi && hi < kPi)) {
      std::ostringstream os;
      os << "step_modulus_from_phi: interval k=" << k << " does not land in (0, pi)";
      throw std::domain_error(os.str());
    }
    positive.push_back({lo, hi, power_m * seq.step_height(k)});
  }
  std::vector<Cell> arcs;
  for (auto it = positive.begin(); it != positive.end(); ++it) {
    arcs.push_back({-it->theta_end, -it->theta_start, it->log_modulus});
  }
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) arcs.push_back(*it);
  std::sort(arcs.begin(), arcs.end(),
            [](const Cell& x, const Cell& y) { return x.theta_start < y.theta_start; });

  PairModuli out;
  out.phi = StepModulus::from_overlapping(arcs, 0.0);
  out.a = out.phi.transformed(log_abs_a_from_log_phi);
  out.b = out.phi.transformed(log_abs_b_from_log_phi);
  return out;
}

std::vector<double> phi_check_points() {
  std::vector<double> xs;
  for (int i = 0; i < 16; ++i) xs.push_back(-0.9375 + 0.125 * i);
  return xs;
}

double phi_identity_error(const Pair& pair) {
  double worst = 0.0;
  for (double x : phi_check_points()) {
    const std::complex<double> z(x, 0.0);
    const auto diff = pair.log_b(z) - pair.log_a(z) - pair.log_phi(z);
    worst = std::max(worst, std::abs(diff));
  }
  return worst;
}

void finalize_pair(Pair& pair, int series_degree) {
  if (pair.is_tame()) {
    pair.log_a0 = std::log(0.5);
    pair.log_b0 = std::log(0.5);
    pair.a_series = tame_a_series(series_degree);
    pair.b_series = tame_b_series(series_degree);
    pair.phi_series = tame_phi_series(series_degree);
    return;
  }
  pair.seq = make_sequences(pair.params);
  pair.log_a0 = pair.a_modulus.mean();
  pair.log_b0 = pair.b_modulus.mean();
  pair.a_series = exp_series(outer_log_coefficients(pair.a_modulus, series_degree));
  pair.b_series = exp_series(outer_log_coefficients(pair.b_modulus, series_degree));
  pair.phi_series = exp_series(outer_log_coefficients(pair.phi_modulus, series_degree));
}

Pair build_pair(const ConstructionParams& params, int series_degree) {
  params.validate();
  Pair pair;
  pair.tag = kConstructedTag;
  pair.params = params;
  pair.seq = make_sequences(params);
  pair.power_search.requested_auto = !params.power_m.has_value();

  int m = 1;
  if (params.power_m) {
    m = *params.power_m;
  } else {
    try {
      m = choose_power_m(params, pair.seq);
    } catch (const PowerSearchError& e) {
      m = 1;
      pair.power_search.note = e.what();
    }
  }
  pair.params.power_m = m;
  // Record whether the growth bound holds with the m actually used.
  pair.power_search.verified = true;
  for (int n = 1; n <= params.n_check && pair.power_search.verified; ++n) {
    for (const auto& rec : verify_growth_bound(n, params.r_samples, m, pair.seq)) {
      if (!rec.pass) {
        pair.power_search.verified = false;
        if (pair.power_search.note.empty()) {
          std::ostringstream os;
          os.precision(17);
          os << "growth bound fails with m=" << m << " at n=" << n << ", r=" << rec.r
             << ": log ratio " << rec.log_ratio << " < bound e^{" << rec.bound.log_mag() << "}";
          pair.power_search.note = os.str();
        }
        break;
      }
    }
  }

  auto moduli = step_modulus_from_phi(pair.seq, m);
  pair.phi_modulus = std::move(moduli.phi);
  pair.a_modulus = std::move(moduli.a);
  pair.b_modulus = std::move(moduli.b);
  finalize_pair(pair, series_degree);

  const double err = phi_identity_error(pair);
  if (!(err <= kPhiIdentityTolerance)) {
    std::ostringstream os;
    os.precision(17);
    os << "b/a = phi check failed: max |log b - log a - log phi| = " << err << " > "
       << kPhiIdentityTolerance;
    throw ConstructionInconsistency(os.str());
  }
  return pair;
}

Pair build_tame_pair(int series_degree) {
  Pair pair;
  pair.tag = kHalfMoebiusTag;
  pair.params.power_m = 1;
  pair.power_search = {false, true, ""};
  std::vector<Cell> a_cells, b_cells, phi_cells;
  a_cells.reserve(kTameCells);
  const double width = 2.0 * kPi / kTameCells;
  for (int i = 0; i < kTameCells; ++i) {
    const double lo = i == 0 ? -kPi : -kPi + i * width;
    const double hi = i == kTameCells - 1 ? kPi : -kPi + (i + 1) * width;
    const double mid = -kPi + (i + 0.5) * width;
    // |a(e^{it})| = |1 - e^{it}|/2 = |sin(t/2)|
    const double log_a = std::log(std::abs(std::sin(0.5 * mid)));
    const double log_b = 0.5 * std::log1p(-std::exp(2.0 * log_a));
    a_cells.push_back({lo, hi, log_a});
    b_cells.push_back({lo, hi, log_b});
    phi_cells.push_back({lo, hi, log_b - log_a});
  }
  // Cells cover the whole circle, so the default value is never used.
  pair.a_modulus = StepModulus(std::move(a_cells), std::log(0.5));
  pair.b_modulus = StepModulus(std::move(b_cells), std::log(0.5));
  pair.phi_modulus = StepModulus(std::move(phi_cells), 0.0);
  finalize_pair(pair, series_degree);
  return pair;
}

Series taylor_from_eval(const std::function<std::complex<double>(std::complex<double>)>& f,
                        int degree, double radius, int samples) {
  if (degree < 0) throw std::invalid_argument("taylor_from_eval: negative degree");
  if (!(radius > 0.0 && radius < 1.0)) {
    throw std::invalid_argument("taylor_from_eval: radius must lie in (0, 1)");
  }
  if (samples == 0) samples = std::max(2 * degree, 1);
  if (degree >= samples) {
    throw std::invalid_argument("taylor_from_eval: degree must be below the sample count");
  }
  std::vector<std::complex<double>> values(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    values[s] = f(std::polar(radius, 2.0 * kPi * s / samples));
  }
  auto out = Series::zero(degree);
  double scale = 1.0;
  for (int j = 0; j <= degree; ++j) {
    std::complex<double> acc = 0.0;
    for (int s = 0; s < samples; ++s) {
      // e^{-2 pi i j s / samples} with the angle reduced exactly.
      const long long idx = (static_cast<long long>(j) * s) % samples;
      acc += values[s] * std::polar(1.0, -2.0 * kPi * static_cast<double>(idx) / samples);
    }
    out[j] = acc / (static_cast<double>(samples) * scale);
    scale *= radius;
  }
  return out;
}

L1LogCheck l1_log_check(const Pair& pair) {
  return {2.0 * pair.a_modulus.mean(), 2.0 * pair.a_modulus.abs_mean()};
}

PhiCoefficientStream::PhiCoefficientStream(const Pair& pair) : tame_(pair.is_tame()) {
  if (!tame_) {
    logs_.emplace(pair.phi_modulus);
    gen_.emplace(logs_->next());
  }
}

Extended PhiCoefficientStream::next() {
  const int k = k_++;
  if (tame_) return Extended(k == 0 ? 1 : 2);
  if (k == 0) return gen_->coeffs()[0];
  return gen_->push(logs_->next());
}

double PhiCoefficientStream::condition() const { return gen_ ? gen_->condition() : 1.0; }

ExtendedPairSeries pair_series_extended(const Pair& pair, int degree) {
  ExtendedPairSeries out;
  const int bits = extended_bits();
  if (pair.is_tame()) {
    std::vector<Extended> a(degree + 1, Extended(0)), b(degree + 1, Extended(0)),
        phi(degree + 1, Extended(2));
    a[0] = Extended(1) / 2;
    b[0] = Extended(1) / 2;
    if (degree >= 1) {
      a[1] = -Extended(1) / 2;
      b[1] = Extended(1) / 2;
    }
    phi[0] = 1;
    out.a = TaylorSeries<Extended>(std::move(a), bits);
    out.b = TaylorSeries<Extended>(std::move(b), bits);
    out.phi = TaylorSeries<Extended>(std::move(phi), bits);
    return out;
  }
  double ca = 1, cb = 1, cp = 1;
  out.a = exp_series(outer_log_coefficients_real(pair.a_modulus, degree), &ca);
  out.b = exp_series(outer_log_coefficients_real(pair.b_modulus, degree), &cb);
  out.phi = exp_series(outer_log_coefficients_real(pair.phi_modulus, degree), &cp);
  out.condition = std::max({ca, cb, cp});
  return out;
}

}  // namespace hblab
