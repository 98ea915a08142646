#include "hblab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hblab/outer_engine.hpp"

namespace hblab {

namespace {

LogScalar sqrt_of(const LogScalar& x) { return x.sqrt(); }

bool log_ge(const LogScalar& a, const LogScalar& b) {
  return a.log_mag() >= b.log_mag() - kOrderSlack;
}

}  // namespace

LogScalar to_log_scalar(const Extended& x) {
  if (x == 0) return LogScalar::zero();
  if (x < 0) return LogScalar::from_log(static_cast<double>(log(-x)), std::numbers::pi);
  return LogScalar::from_log(static_cast<double>(log(x)));
}

KernelCombo build_paper_f(const Pair& pair) {
  const auto& seq = pair.seq;
  if (seq.size() == 0) throw std::invalid_argument("build_paper_f: needs the constructed pair");
  KernelCombo f;
  for (int j = 1; j <= seq.size(); ++j) {
    const double log_c = 0.5 * seq.log_one_minus_w(j) - 2.0 * std::log(static_cast<double>(j)) -
                         pair.log_phi_radial(seq.one_minus_w(j));
    f.terms.push_back({LogScalar::from_log(log_c), seq.w(j), seq.one_minus_w(j)});
  }
  const auto terms = kernel_combo_ccond_check(f, pair);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double j = static_cast<double>(i + 1);
    const double log_limit = std::log(2.0 / (j * j));
    if (terms[i].log_mag() > log_limit + 1e-12) {
      std::ostringstream os;
      os.precision(17);
      os << "build_paper_f: kernel condition term " << i + 1 << " = e^" << terms[i].log_mag()
         << " exceeds 2/j^2";
      throw std::runtime_error(os.str());
    }
  }
  return f;
}

LogScalar fr_plus_at_zero(double r, const KernelCombo& f, const Pair& pair) {
  if (!(r >= 0.0 && r < 1.0)) throw std::domain_error("fr_plus_at_zero: need 0 <= r < 1");
  std::vector<LogScalar> terms;
  for (const auto& t : f.terms) {
    if (!t.coeff.is_nonnegative()) throw std::domain_error("fr_plus_at_zero: signed coefficient");
    const double s = one_minus_product(1.0 - r, t.one_minus_w);
    terms.push_back(LogScalar::from_log(t.coeff.log_mag() + pair.log_phi_radial(s)));
  }
  return log_sum_exp(terms);
}

std::vector<Extended> kernel_combo_coefficients(const KernelCombo& f, int degree) {
  std::vector<Extended> out(static_cast<std::size_t>(degree) + 1, Extended(0));
  for (const auto& t : f.terms) {
    if (!t.coeff.is_nonnegative()) throw std::domain_error("kernel_combo_coefficients: signed");
    const Extended c = exp(Extended(t.coeff.log_mag()));
    const Extended w = Extended(1) - Extended(t.one_minus_w);
    Extended p = c;
    for (int k = 0; k <= degree; ++k) {
      out[k] += p;
      p *= w;
    }
  }
  return out;
}

bool precision_exhausted(double condition, int bits, double needed_digits) {
  const double lost = std::log10(std::max(condition, 1.0));
  const double carried = bits * 0.30102999566398120;
  return carried - lost < needed_digits;
}

std::vector<AbelSeriesResult> abel_series(const std::vector<double>& rs, const KernelCombo& f,
                                          const Pair& pair, AbelSeriesOptions opts) {
  const int bits = extended_bits();
  std::vector<AbelSeriesResult> out(rs.size());
  std::vector<Extended> r_pow(rs.size(), Extended(1)), r_ext(rs.size());
  std::vector<int> quiet(rs.size(), 0);
  std::vector<bool> done(rs.size(), false);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (!(rs[i] >= 0.0 && rs[i] < 1.0)) throw std::domain_error("abel_series: need 0 <= r < 1");
    out[i].r = rs[i];
    out[i].value = 0;
    r_ext[i] = rs[i];
  }

  std::vector<Extended> c, w, w_pow;
  for (const auto& t : f.terms) {
    c.push_back(exp(Extended(t.coeff.log_mag())));
    w.push_back(Extended(1) - Extended(t.one_minus_w));
    w_pow.push_back(Extended(1));
  }
  const Extended tol = opts.rel_tol;

  PhiCoefficientStream phi(pair);
  std::size_t remaining = rs.size();
  Extended f_hat, term;
  for (int j = 0; remaining > 0; ++j) {
    if (j >= opts.max_terms) {
      throw std::runtime_error("abel_series: no convergence within " +
                               std::to_string(opts.max_terms) + " terms");
    }
    const Extended phi_hat = phi.next();
    f_hat = 0;
    for (std::size_t m = 0; m < c.size(); ++m) {
      f_hat += c[m] * w_pow[m];
      w_pow[m] *= w[m];
    }
    const Extended prod = f_hat * phi_hat;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      if (done[i]) continue;
      term = r_pow[i] * prod;
      out[i].value += term;
      r_pow[i] *= r_ext[i];
      out[i].terms = j + 1;
      quiet[i] = abs(term) < tol * abs(out[i].value) ? quiet[i] + 1 : 0;
      if (quiet[i] >= opts.window) {
        done[i] = true;
        --remaining;
      }
    }
    // A digit budget of 9 keeps the 1e-6 cross-check meaningful.
    if (precision_exhausted(phi.condition(), bits, 9.0)) {
      std::ostringstream os;
      os << "abel_series: phi-hat recurrence cancellation " << phi.condition() << " at j=" << j
         << " exceeds the " << bits << "-bit budget";
      throw PrecisionExhausted(os.str());
    }
  }
  return out;
}

int interval_index(double r, const Sequences& seq) {
  int n = 0;
  for (int k = 1; k <= seq.size() - 1; ++k) {
    if (seq.w(k) <= r) n = k;
  }
  return n;
}

double log_divergence_bound(int n, const Sequences& seq) {
  const double nb = -seq.log_one_minus_w(n);
  return -0.5 * nb + std::exp(nb + seq.log_rho(n)) - 2.0 * std::log(static_cast<double>(n));
}

std::vector<double> default_r_grid(const Pair& pair) {
  const auto& seq = pair.seq;
  const int nc = pair.params.n_check;
  std::vector<double> grid;
  for (int n = 1; n <= nc; ++n) {
    grid.push_back(seq.w(n));
    grid.push_back(0.5 * (seq.w(n) + seq.w(n + 1)));
    grid.push_back(seq.w(n + 1));
  }
  const double lo = seq.w(1), hi = seq.w(nc);
  for (int i = 1; i <= 16; ++i) grid.push_back(lo + (hi - lo) * i / 17.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  // w_{n+1} may round to 1 for large n; the dilation needs r < 1.
  grid.erase(std::remove_if(grid.begin(), grid.end(), [](double r) { return !(r < 1.0); }),
             grid.end());
  return grid;
}

DivergenceReport divergence_curve(const std::vector<double>& r_grid, const KernelCombo& f,
                                  const Pair& pair) {
  DivergenceReport rep;
  for (double r : r_grid) {
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("divergence_curve: r outside (0, 1)");
    DivergenceRow row;
    row.r = r;
    row.fr_plus0 = fr_plus_at_zero(r, f, pair);
    const auto norms = gram_norms(dilate(f, r), pair);
    row.hb_norm = sqrt_of(norms.total_sq());
    row.plus_norm = sqrt_of(norms.plus_sq);
    row.n = interval_index(r, pair.seq);
    if (row.n >= 1 && row.n <= pair.params.n_check) {
      row.log_bound = log_divergence_bound(row.n, pair.seq);
      row.bound_ok = row.fr_plus0.log_mag() >= *row.log_bound;
    }
    row.chain_ok = log_ge(row.hb_norm, row.plus_norm) && log_ge(row.plus_norm, row.fr_plus0);
    row.pass = row.bound_ok && row.chain_ok;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

EnvelopeReport growth_envelope(const std::vector<double>& r_grid, const KernelCombo& f,
                               const Pair& pair) {
  EnvelopeReport rep;
  const double expo = pair.params.alpha / pair.params.beta;
  const double w1 = pair.seq.w(1);
  bool first = true;
  for (double r : r_grid) {
    if (!(r > w1 && r < 1.0)) continue;
    EnvelopeRow row;
    row.r = r;
    const double one_minus_r = 1.0 - r;
    row.log_norm = 0.5 * gram_norms(dilate(f, r), pair).total_sq().log_mag();
    row.trend = row.log_norm * one_minus_r;
    row.E = row.trend * std::exp(std::pow(-std::log(one_minus_r), expo));
    rep.c_empirical = first ? row.E : std::min(rep.c_empirical, row.E);
    first = false;
    rep.rows.push_back(row);
  }
  rep.pass = !first && rep.c_empirical > 0.0;
  return rep;
}

SarasonReport sarason_series_failure(int j_max, const KernelCombo& f, const Pair& pair) {
  if (j_max < 2) throw std::invalid_argument("sarason_series_failure: J_max must be >= 2");
  const int bits = extended_bits();
  SarasonReport rep;
  const auto f_hat = kernel_combo_coefficients(f, j_max);
  PhiCoefficientStream phi(pair);
  Extended S = 0;
  rep.monotone = true;
  for (int j = 0; j <= j_max; ++j) {
    const Extended term = f_hat[j] * phi.next();
    S += term;
    if (j > 0 && !(term > 0)) rep.monotone = false;
    rep.rows.push_back({j, S});
  }
  rep.condition = phi.condition();
  if (precision_exhausted(rep.condition, bits, 9.0)) {
    std::ostringstream os;
    os << "sarason_series_failure: J_max=" << j_max << " needs more than " << bits
       << " bits (cancellation ratio " << rep.condition << ")";
    throw PrecisionExhausted(os.str());
  }
  rep.growth_ratio = rep.rows[j_max].S / rep.rows[j_max / 2].S;
  rep.pass = rep.growth_ratio > 1;
  return rep;
}

SummabilityReport summability_divergence(const std::vector<int>& n_list, const KernelCombo& f,
                                         const Pair& pair) {
  if (n_list.empty()) throw std::invalid_argument("summability_divergence: empty n_list");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 0 || (i > 0 && n_list[i] <= n_list[i - 1])) {
      throw std::invalid_argument("summability_divergence: n_list must increase from n >= 0");
    }
  }
  const int bits = extended_bits();
  const int degree = n_list.back();
  SummabilityReport rep;
  const TaylorSeries<Extended> f_hat(kernel_combo_coefficients(f, degree), bits);
  const auto ps = pair_series_extended(pair, degree);
  rep.condition = ps.condition;

  auto norm_of = [&](const TaylorSeries<Extended>& g) {
    const auto fp = f_plus_solve(g, ps.a, ps.b);
    rep.condition = std::max(rep.condition, fp.condition);
    return sqrt_of(log_sum_exp(h2_norm_sq(g), h2_norm_sq(fp.f_plus)));
  };

  LogScalar sn_max, sigma_max;
  for (int n : n_list) {
    SummabilityRow row;
    row.n = n;
    row.sn_norm = norm_of(partial_sum(f_hat, n));
    row.sigma_norm = norm_of(cesaro_mean(f_hat, n));
    sn_max = rep.rows.empty() ? row.sn_norm
                              : (row.sn_norm.log_mag() > sn_max.log_mag() ? row.sn_norm : sn_max);
    sigma_max = rep.rows.empty()
                    ? row.sigma_norm
                    : (row.sigma_norm.log_mag() > sigma_max.log_mag() ? row.sigma_norm : sigma_max);
    row.sn_max = sn_max;
    row.sigma_max = sigma_max;
    // sigma_n is a convex combination of s_0..s_n.
    row.convex_ok = log_ge(sn_max, row.sigma_norm);
    rep.convex_ok = rep.convex_ok && row.convex_ok;
    rep.rows.push_back(row);
  }
  if (precision_exhausted(rep.condition, bits, 12.0)) {
    std::ostringstream os;
    os << "summability_divergence: cancellation ratio " << rep.condition << " exceeds the "
       << bits << "-bit budget";
    throw PrecisionExhausted(os.str());
  }
  // Growth is measured from n = 8 (or the first listed n above it).
  const auto start = std::find_if(rep.rows.begin(), rep.rows.end(),
                                  [](const SummabilityRow& r) { return r.n >= 8; });
  if (start != rep.rows.end() && start != rep.rows.end() - 1) {
    rep.sn_growth = rep.rows.back().sn_max.log_mag() > start->sn_max.log_mag();
    rep.sigma_growth = rep.rows.back().sigma_max.log_mag() > start->sigma_max.log_mag();
  }
  rep.pass = rep.sn_growth && rep.sigma_growth && rep.convex_ok;
  return rep;
}

Series random_polynomial(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto p = Series::zero(degree);
  for (int k = 0; k <= degree; ++k) {
    const double re = u(rng);
    const double im = u(rng);
    p[k] = {re, im};
  }
  return p;
}

CrosscheckReport norm_crosscheck(const Pair& pair, std::uint64_t seed, int count,
                                 int max_degree) {
  if (!pair.phi_series) throw std::logic_error("norm_crosscheck: pair has no Taylor series");
  if (!pair.is_tame() && max_degree > pair.phi_series->degree()) {
    throw std::out_of_range("norm_crosscheck: max_degree exceeds the pair's series degree");
  }
  CrosscheckReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> deg(0, max_degree);

  auto run = [&](const Series& f, int index) {
    CrosscheckRow row;
    row.index = index;
    row.degree = f.degree();
    const auto solve = f_plus_solve(f, pair).f_plus;
    const auto sarason = f_plus_sarason(f, pair.phi_series->truncated(f.degree()));
    const LogScalar h2 = h2_norm_sq(f);
    row.norm_sq_solve = log_sum_exp(h2, h2_norm_sq(solve)).to_double();
    row.norm_sq_sarason = log_sum_exp(h2, h2_norm_sq(sarason)).to_double();
    row.rel_err = std::abs(row.norm_sq_solve - row.norm_sq_sarason) / row.norm_sq_solve;
    row.pass = row.rel_err <= kCrosscheckTolerance;
    return row;
  };

  const auto one = Series::constant(1.0, 0);
  auto one_row = run(one, -1);
  rep.one_norm_sq = one_row.norm_sq_solve;
  if (pair.is_tame()) {
    rep.one_expected = 2.0;
    one_row.pass = one_row.pass && std::abs(rep.one_norm_sq - 2.0) <= kUnitNormTolerance;
  }
  rep.pass = one_row.pass;
  rep.rows.push_back(one_row);

  for (int i = 0; i < count; ++i) {
    const int d = deg(rng);
    const auto row = run(random_polynomial(rng, d), i);
    rep.max_rel_err = std::max(rep.max_rel_err, row.rel_err);
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace hblab
