#include "hblab/hb_ops.hpp"

#include <cmath>
#include <string>

#include "hblab/outer_engine.hpp"

namespace hblab {

namespace {

using cplx = std::complex<double>;

// The pair's a and b series to `degree`. The tame pair's series are exact
// polynomials, so padding with zeros is exact; the constructed pair's
// series are truncations and cannot be extended.
std::pair<Series, Series> pair_ab(const Pair& pair, int degree) {
  if (!pair.a_series || !pair.b_series) throw std::logic_error("pair has no Taylor series");
  if (!pair.is_tame() && degree > pair.a_series->degree()) {
    throw std::out_of_range("degree " + std::to_string(degree) +
                            " exceeds the pair's series degree " +
                            std::to_string(pair.a_series->degree()));
  }
  return {pair.a_series->truncated(degree), pair.b_series->truncated(degree)};
}

int default_expansion_degree(const Pair& pair) {
  return pair.a_series ? pair.a_series->degree() : kDefaultSeriesDegree;
}

double log_phi_real(const Pair& pair, const KernelTerm& t) {
  return pair.log_phi_radial(t.one_minus_w);
}

}  // namespace

Series cauchy_kernel(cplx w, int degree) {
  if (!(std::abs(w) < 1.0)) throw std::domain_error("cauchy_kernel: need |w| < 1");
  auto out = Series::zero(degree);
  cplx p = 1.0;
  const cplx cw = std::conj(w);
  for (int k = 0; k <= degree; ++k) {
    out[k] = p;
    p *= cw;
  }
  return out;
}

cplx h2_inner(const Series& f, const Series& g) {
  const std::size_t n = std::min(f.coeffs().size(), g.coeffs().size());
  // sum f_k conj(g_k) = conj(sum conj(f_k) g_k)
  return std::conj(simd::cdot_conj({f.coeffs().data(), n}, {g.coeffs().data(), n}));
}

FPlusResult<cplx> f_plus_solve(const Series& f, const Pair& pair, double tolerance) {
  const auto [a, b] = pair_ab(pair, f.degree());
  return f_plus_solve(f, a, b, tolerance);
}

Series f_plus_sarason(const Series& f, const Series& phi) {
  const int n = f.degree();
  auto out = Series::zero(n);
  for (int k = 0; k <= n; ++k) {
    const std::size_t len = std::min<std::size_t>(phi.coeffs().size(), n - k + 1);
    // sum_j f_{j+k} conj(phi_j)
    out[k] = simd::cdot_conj({phi.coeffs().data(), len}, {f.coeffs().data() + k, len});
  }
  return out;
}

GramNorms gram_norms(const KernelCombo& f, const Pair& pair) {
  const std::size_t n = f.terms.size();
  std::vector<double> log_c(n), log_phi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = f.terms[i];
    if (!(t.coeff.is_nonnegative())) {
      throw std::domain_error("gram_norms: coefficient with nonzero phase");
    }
    if (!(t.w > 0.0 && t.w < 1.0)) throw std::domain_error("gram_norms: need 0 < w < 1");
    log_c[i] = t.coeff.log_mag();
    log_phi[i] = log_phi_real(pair, t);
  }
  std::vector<LogScalar> h2, plus;
  h2.reserve(n * n);
  plus.reserve(n * n);
  // Row-major order is fixed, so the reduction is bit-stable.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double log_den =
          std::log(one_minus_product(f.terms[i].one_minus_w, f.terms[j].one_minus_w));
      const double base = log_c[i] + log_c[j] - log_den;
      h2.push_back(LogScalar::from_log(base));
      plus.push_back(LogScalar::from_log(base + log_phi[i] + log_phi[j]));
    }
  }
  return {log_sum_exp(h2), log_sum_exp(plus)};
}

LogScalar hb_norm_sq(const HbFunction& f, const Pair& pair) {
  if (const auto* combo = std::get_if<KernelCombo>(&f)) {
    bool positive = true;
    for (const auto& t : combo->terms) positive = positive && t.coeff.is_nonnegative();
    if (positive) return gram_norms(*combo, pair).total_sq();
    const auto s = to_series(*combo, default_expansion_degree(pair));
    const auto [a, b] = pair_ab(pair, s.degree());
    return hb_norm_parts(s, a, b).total_sq();
  }
  const auto& s = std::get<Series>(f);
  const auto [a, b] = pair_ab(pair, s.degree());
  return hb_norm_parts(s, a, b).total_sq();
}

cplx hb_inner(const HbFunction& f, const HbFunction& g, const Pair& pair) {
  const auto* fs = std::get_if<Series>(&f);
  const auto* gs = std::get_if<Series>(&g);
  const auto* fk = std::get_if<KernelCombo>(&f);
  const auto* gk = std::get_if<KernelCombo>(&g);
  auto phi_at = [&](const KernelTerm& t) { return std::exp(log_phi_real(pair, t)); };

  if (fs && gs) {
    const int n = std::max(fs->degree(), gs->degree());
    const auto fp = f_plus_solve(fs->truncated(n), pair).f_plus;
    const auto gp = f_plus_solve(gs->truncated(n), pair).f_plus;
    return h2_inner(*fs, *gs) + h2_inner(fp, gp);
  }
  if (fs && gk) {
    // <f, d k_v> = conj(d) f(v);  <f+, d phi(v) k_v> = conj(d phi(v)) f+(v).
    const auto fp = f_plus_solve(*fs, pair).f_plus;
    cplx acc = 0.0;
    for (const auto& t : gk->terms) {
      const cplx d = std::conj(t.coeff.to_complex());
      acc += d * (fs->eval(cplx(t.w)) + phi_at(t) * fp.eval(cplx(t.w)));
    }
    return acc;
  }
  if (fk && gs) return std::conj(hb_inner(g, f, pair));
  // Both kernel combinations: (1 + phi(u) phi(v)) / (1 - u v) per term pair.
  cplx acc = 0.0;
  for (const auto& s : fk->terms) {
    for (const auto& t : gk->terms) {
      const double den = one_minus_product(s.one_minus_w, t.one_minus_w);
      acc += s.coeff.to_complex() * std::conj(t.coeff.to_complex()) *
             (1.0 + phi_at(s) * phi_at(t)) / den;
    }
  }
  return acc;
}

Series kernel_hb(cplx w, const Pair& pair, int degree) {
  if (!pair.b_series) throw std::logic_error("kernel_hb: pair has no Taylor series");
  if (!pair.is_tame() && degree > pair.b_series->degree()) {
    throw std::out_of_range("kernel_hb: degree exceeds the pair's series degree");
  }
  const auto k = cauchy_kernel(w, degree);
  const cplx bw = std::exp(pair.log_b(w));
  auto bk = multiply(pair.b_series->truncated(degree), k, degree);
  return k - bk * std::conj(bw);
}

std::vector<LogScalar> kernel_combo_ccond_check(const KernelCombo& f, const Pair& pair) {
  std::vector<LogScalar> out;
  out.reserve(f.terms.size());
  for (const auto& t : f.terms) {
    const double lp = log_phi_real(pair, t);
    out.push_back(LogScalar::from_log(t.coeff.log_mag() + softplus(lp) -
                                      0.5 * std::log(t.one_minus_w)));
  }
  return out;
}

Series dilate(const Series& f, double r) {
  if (!(r > 0.0 && r < 1.0)) throw std::domain_error("dilate: need 0 < r < 1");
  Series out = f;
  double p = 1.0;
  for (auto& c : out.coeffs()) {
    c *= p;
    p *= r;
  }
  return out;
}

KernelCombo dilate(const KernelCombo& f, double r) {
  if (!(r > 0.0 && r < 1.0)) throw std::domain_error("dilate: need 0 < r < 1");
  KernelCombo out = f;
  for (auto& t : out.terms) {
    t.one_minus_w = one_minus_product(1.0 - r, t.one_minus_w);
    t.w = 1.0 - t.one_minus_w;
  }
  return out;
}

HbFunction dilate(const HbFunction& f, double r) {
  return std::visit([r](const auto& g) -> HbFunction { return dilate(g, r); }, f);
}

Series to_series(const KernelCombo& f, int degree) {
  auto out = Series::zero(degree);
  for (const auto& t : f.terms) {
    const cplx c = t.coeff.to_complex();
    double p = 1.0;
    for (int k = 0; k <= degree; ++k) {
      out[k] += c * p;
      p *= t.w;
    }
  }
  return out;
}

}  // namespace hblab
