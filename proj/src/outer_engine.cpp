#include "hblab/outer_engine.hpp"

#include "hblab/detail/complex_math.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace hblab {

namespace {

constexpr double kPi = std::numbers::pi;

using detail::log1p_complex;

}  // namespace

void ConstructionParams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (!(std::isfinite(alpha) && std::isfinite(beta))) fail("alpha and beta must be finite");
  if (!(1.0 < alpha && alpha < beta && beta < alpha + 1.0)) {
    std::ostringstream os;
    os << "constraint 1 < alpha < beta < alpha + 1 violated (alpha=" << alpha
       << ", beta=" << beta << ")";
    fail(os.str());
  }
  if (n_terms < 2) fail("n_terms must be >= 2");
  if (std::pow(static_cast<double>(n_terms + 1), beta) > 700.0) {
    fail("n_terms too large: e^{-(N+1)^beta} underflows double");
  }
  if (n_check < 1 || n_check > n_terms - 1) fail("n_check must satisfy 1 <= n_check <= n_terms - 1");
  if (r_samples < 2) fail("r_samples must be >= 2");
  if (power_m && (*power_m < 1 || *power_m > kMaxPower)) fail("power_m must be in [1, 1e6]");
  if (precision_bits < 24 || precision_bits > 100000) fail("precision_bits must be in [24, 100000]");
}

Sequences make_sequences(const ConstructionParams& params) {
  params.validate();
  Sequences seq;
  seq.alpha_ = params.alpha;
  seq.beta_ = params.beta;
  const int n_max = params.n_terms;
  for (int n = 1; n <= n_max; ++n) {
    const double nd = n;
    const double nb = std::pow(nd, params.beta);
    const double s = std::exp(-nb);
    seq.w_.push_back(1.0 - s);
    seq.one_minus_w_.push_back(s);
    seq.log_one_minus_w_.push_back(-nb);
    seq.log_rho_.push_back(-std::pow(nd, params.alpha));
    // t = (1 - w^2)/(1 + w^2) = s(2 - s)/(1 + (1 - s)^2)
    const double log_t = -nb + std::log(2.0 - s) - std::log1p((1.0 - s) * (1.0 - s));
    seq.t_.push_back(std::exp(log_t));
    seq.log_t_.push_back(log_t);
    // (n+1)^beta - n^beta without cancellation.
    const double gap = nb * std::expm1(params.beta * std::log1p(1.0 / nd));
    const double log_eps = gap - std::pow(nd, params.alpha);
    seq.log_eps_.push_back(log_eps);
    seq.height_.push_back(std::exp(log_eps - log_t));
  }
  return seq;
}

double check_rho_condition(const Sequences& seq, int n) {
  if (n < 1 || n >= seq.size()) throw std::out_of_range("check_rho_condition: need 1 <= n < N");
  std::vector<LogScalar> terms;
  for (int k = n + 1; k <= seq.size(); ++k) terms.push_back(seq.eps(k));
  return std::exp(log_sum_exp(terms).log_mag() - seq.log_rho(n));
}

std::complex<double> log_Phi_halfplane(std::complex<double> z, const Sequences& seq) {
  if (!(z.imag() > 0.0)) throw std::domain_error("log_Phi_halfplane: need Im z > 0");
  std::complex<double> acc = 0.0;
  for (int k = 1; k <= seq.size(); ++k) {
    const double t = seq.t(k);
    const double p = 2.0 * t;
    // log((q - z)/(p - z)) = log1p((q - p)/(p - z)); the ratio stays off the
    // negative axis for Im z > 0 so the principal branch is the right one.
    const std::complex<double> L = log1p_complex(t / (p - z));
    const double c = 0.5 * std::log1p(5.0 * t * t / (1.0 + p * p));
    const double scale = seq.step_height(k) / kPi;
    acc += std::complex<double>(scale * L.imag(), -scale * (L.real() - c));
  }
  return acc;
}

double re_log_Phi_imag_axis(double y, const Sequences& seq) {
  if (!(y > 0.0)) throw std::domain_error("re_log_Phi_imag_axis: need y > 0");
  double acc = 0.0;
  for (int k = 1; k <= seq.size(); ++k) {
    const double t = seq.t(k);
    // arctan(3t/y) - arctan(2t/y)
    acc += seq.step_height(k) / kPi * std::atan2(t * y, y * y + 6.0 * t * t);
  }
  return acc;
}

std::complex<double> cayley(std::complex<double> z) {
  if (z == std::complex<double>(-1.0, 0.0)) throw std::domain_error("cayley: pole at z = -1");
  return std::complex<double>(0.0, 1.0) * (1.0 - z) / (1.0 + z);
}

std::complex<double> log_phi_disk(std::complex<double> z, int power_m, const Sequences& seq) {
  if (!(std::abs(z) < 1.0)) throw std::domain_error("log_phi_disk: need |z| < 1");
  const std::complex<double> direct = log_Phi_halfplane(cayley(z), seq);
  const std::complex<double> mirrored = log_Phi_halfplane(cayley(std::conj(z)), seq);
  return static_cast<double>(power_m) * (direct + std::conj(mirrored));
}

std::complex<double> log_phi_disk(std::complex<double> z, const ConstructionParams& params,
                                  const Sequences& seq) {
  if (!params.power_m) throw std::logic_error("log_phi_disk: power_m not resolved");
  return log_phi_disk(z, *params.power_m, seq);
}

double log_phi_radial(double one_minus_x, int power_m, const Sequences& seq) {
  if (!(one_minus_x > 0.0 && one_minus_x < 2.0)) {
    throw std::domain_error("log_phi_radial: need -1 < x < 1");
  }
  const double y = one_minus_x / (2.0 - one_minus_x);
  return 2.0 * power_m * re_log_Phi_imag_axis(y, seq);
}

std::vector<GrowthCheckRecord> verify_growth_bound(int n, int r_samples, int power_m,
                                                   const Sequences& seq) {
  if (n < 1 || n >= seq.size()) throw std::out_of_range("verify_growth_bound: need 1 <= n < N");
  if (r_samples < 2) throw std::invalid_argument("verify_growth_bound: r_samples must be >= 2");
  const double s_n = seq.one_minus_w(n);
  const double s_next = seq.one_minus_w(n + 1);
  const double base = log_phi_radial(s_n, power_m, seq);
  const double log_bound = -seq.log_one_minus_w(n) + seq.log_rho(n);

  std::vector<GrowthCheckRecord> out;
  out.reserve(static_cast<std::size_t>(r_samples));
  for (int i = 0; i < r_samples; ++i) {
    const double frac = static_cast<double>(i) / (r_samples - 1);
    double one_minus_r = s_n + (s_next - s_n) * frac;
    if (i == r_samples - 1) one_minus_r = s_next;
    GrowthCheckRecord rec;
    rec.n = n;
    rec.one_minus_r = one_minus_r;
    rec.r = 1.0 - one_minus_r;
    const double s_rw = one_minus_product(one_minus_r, s_n);
    rec.u = s_rw / (2.0 - s_rw);
    rec.v = s_n / (2.0 - s_n);
    rec.t = seq.t(n);
    rec.log_ratio = log_phi_radial(s_rw, power_m, seq) - base;
    rec.bound = LogScalar::from_log(log_bound);
    rec.pass = rec.log_ratio > 0.0 && std::log(rec.log_ratio) >= log_bound;
    out.push_back(rec);
  }
  return out;
}

namespace {

bool all_pass(const ConstructionParams& params, const Sequences& seq, int m) {
  for (int n = 1; n <= params.n_check; ++n) {
    for (const auto& rec : verify_growth_bound(n, params.r_samples, m, seq)) {
      if (!rec.pass) return false;
    }
  }
  return true;
}

}  // namespace

int choose_power_m(const ConstructionParams& params, const Sequences& seq) {
  params.validate();
  if (params.n_check >= seq.size()) throw std::out_of_range("choose_power_m: n_check >= N");
  // log_ratio is exactly linear in m, so the minimal m is the largest
  // per-sample ratio bound / log_ratio(m = 1), confirmed directly below.
  double needed = 1.0;
  for (int n = 1; n <= params.n_check; ++n) {
    for (const auto& rec : verify_growth_bound(n, params.r_samples, 1, seq)) {
      if (!(rec.log_ratio > 0.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "no power m works: log|phi(r w_n)/phi(w_n)| = " << rec.log_ratio
           << " <= 0 at n=" << n << ", r=" << rec.r << " (bound e^{" << rec.bound.log_mag()
           << "})";
        throw PowerSearchError(os.str());
      }
      needed = std::max(needed, std::ceil(std::exp(rec.bound.log_mag()) / rec.log_ratio));
    }
  }
  if (needed > kMaxPower) {
    throw PowerSearchError("no power m <= 1e6 satisfies the growth bound (need " +
                           std::to_string(needed) + ")");
  }
  int m = static_cast<int>(needed);
  while (!all_pass(params, seq, m)) {
    if (++m > kMaxPower) throw PowerSearchError("no power m <= 1e6 satisfies the growth bound");
  }
  while (m > 1 && all_pass(params, seq, m - 1)) --m;
  return m;
}

}  // namespace hblab
