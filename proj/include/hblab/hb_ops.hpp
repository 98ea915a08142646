#pragma once

#include <complex>
#include <stdexcept>
#include <variant>
#include <vector>

#include "hblab/extended.hpp"
#include "hblab/log_scalar.hpp"
#include "hblab/pair.hpp"
#include "hblab/taylor_series.hpp"
#include "hblab/toeplitz.hpp"

namespace hblab {

// c k_w with real w in (0, 1); 1 - w is stored separately because w may be
// within an ulp of 1.
struct KernelTerm {
  LogScalar coeff;
  double w = 0;
  double one_minus_w = 1;
};

// f = sum_j c_j k_{w_j}.
struct KernelCombo {
  std::vector<KernelTerm> terms;
};

using HbFunction = std::variant<Series, KernelCombo>;

// f-plus solve did not reach the residual tolerance.
class ResidualTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// k_w(z) = 1/(1 - conj(w) z) to the given degree: coefficients conj(w)^k.
Series cauchy_kernel(std::complex<double> w, int degree);

// <f, g>_{H^2} = sum_k f_k conj(g_k) over the common support.
std::complex<double> h2_inner(const Series& f, const Series& g);

// ||f||^2_{H^2} as a LogScalar (works for any coefficient type).
template <class T>
LogScalar h2_norm_sq(const TaylorSeries<T>& f) {
  std::vector<LogScalar> terms;
  terms.reserve(f.coeffs().size());
  for (const auto& c : f.coeffs()) {
    if constexpr (std::is_same_v<T, Extended>) {
      if (c == 0) continue;
      terms.push_back(LogScalar::from_log(2.0 * static_cast<double>(log(abs(c)))));
    } else {
      const double m = std::abs(c);
      if (m == 0.0) continue;
      terms.push_back(LogScalar::from_log(2.0 * std::log(m)));
    }
  }
  return log_sum_exp(terms);
}

template <class T>
struct FPlusResult {
  TaylorSeries<T> f_plus;
  double residual = 0;   // ||T_conj(a) f+ - T_conj(b) f|| / max(||f||, tiny)
  double condition = 1;  // back-substitution cancellation ratio
};

inline constexpr double kDefaultResidualTolerance = 1e-9;

// Solves T_conj(a) f+ = T_conj(b) f on coefficients 0..deg f. For a
// polynomial f the exact f+ is a polynomial of the same degree, so the
// truncated system is exact. The series a and b are read to deg f (missing
// coefficients count as zero). Throws ResidualTooLarge above `tolerance`.
template <class T>
FPlusResult<T> f_plus_solve(const TaylorSeries<T>& f, const TaylorSeries<T>& a,
                            const TaylorSeries<T>& b,
                            double tolerance = kDefaultResidualTolerance) {
  const int n = f.degree();
  const auto a_n = a.truncated(n);
  const auto b_n = b.truncated(n);
  const auto rhs = toeplitz_coanalytic_apply(b_n, f);
  FPlusResult<T> out;
  TriangularSolveOptions opts;
  opts.condition = &out.condition;
  auto x = triangular_solve_upper_toeplitz(a_n.coeffs(), rhs.coeffs(), opts);
  const auto back = upper_toeplitz_apply(a_n.coeffs(), x);
  long double res = 0.0L, fnorm = 0.0L;
  for (std::size_t k = 0; k < back.size(); ++k) {
    const long double d = magnitude_ld(T(back[k] - rhs[k]));
    res += d * d;
  }
  for (const auto& c : f.coeffs()) fnorm += magnitude_ld(c) * magnitude_ld(c);
  out.residual = static_cast<double>(std::sqrt(res) / std::max(std::sqrt(fnorm), 1e-300L));
  if (!(out.residual <= tolerance)) {
    throw ResidualTooLarge("f_plus_solve: relative residual " + std::to_string(out.residual) +
                           " exceeds " + std::to_string(tolerance));
  }
  out.f_plus = TaylorSeries<T>(std::move(x), std::min(f.precision_bits(), a.precision_bits()));
  return out;
}

// f+ against the pair's double-precision series. For the constructed pair
// the degree of f must not exceed the stored series degree.
FPlusResult<std::complex<double>> f_plus_solve(const Series& f, const Pair& pair,
                                               double tolerance = kDefaultResidualTolerance);

// Sarason form f+_k = sum_j f_{j+k} conj(phi_j), k = 0..deg f.
Series f_plus_sarason(const Series& f, const Series& phi);

template <class T>
struct HbNormParts {
  LogScalar h2_sq;    // ||f||^2_{H^2}
  LogScalar plus_sq;  // ||f+||^2_{H^2}
  LogScalar total_sq() const { return log_sum_exp(h2_sq, plus_sq); }
};

// ||f||^2_{H(b)} = ||f||^2 + ||f+||^2 for a polynomial f given a and b.
template <class T>
HbNormParts<T> hb_norm_parts(const TaylorSeries<T>& f, const TaylorSeries<T>& a,
                             const TaylorSeries<T>& b,
                             double tolerance = kDefaultResidualTolerance) {
  const auto fp = f_plus_solve(f, a, b, tolerance);
  return {h2_norm_sq(f), h2_norm_sq(fp.f_plus)};
}

// Gram forms for a kernel combination with positive coefficients:
//   ||f||^2 = sum c_i c_j / (1 - w_i w_j),
//   ||f+||^2 = sum c_i c_j phi(w_i) phi(w_j) / (1 - w_i w_j).
struct GramNorms {
  LogScalar h2_sq;
  LogScalar plus_sq;
  LogScalar total_sq() const { return log_sum_exp(h2_sq, plus_sq); }
};
// Throws std::domain_error when a coefficient is not positive.
GramNorms gram_norms(const KernelCombo& f, const Pair& pair);

// ||f||^2_{H(b)}. KernelCombo with positive data uses the Gram forms;
// otherwise it is expanded to the pair's series degree and solved.
LogScalar hb_norm_sq(const HbFunction& f, const Pair& pair);

// <f, g>_{H(b)} = <f, g>_{H^2} + <f+, g+>_{H^2} (double precision).
std::complex<double> hb_inner(const HbFunction& f, const HbFunction& g, const Pair& pair);

// k_w^b(z) = (1 - conj(b(w)) b(z)) / (1 - conj(w) z) to the given degree.
Series kernel_hb(std::complex<double> w, const Pair& pair, int degree);

// |c_j| (1 + |phi(w_j)|) (1 - w_j)^{-1/2} for every term.
std::vector<LogScalar> kernel_combo_ccond_check(const KernelCombo& f, const Pair& pair);

// f_r(z) = f(r z).
HbFunction dilate(const HbFunction& f, double r);
Series dilate(const Series& f, double r);
KernelCombo dilate(const KernelCombo& f, double r);

// Taylor coefficients sum_j c_j w_j^k, k = 0..degree.
Series to_series(const KernelCombo& f, int degree);

// s_n(f): coefficients 0..n.
template <class T>
TaylorSeries<T> partial_sum(const TaylorSeries<T>& f, int n) {
  if (n < 0 || n > f.degree()) throw std::out_of_range("partial_sum: n outside 0..degree");
  return f.truncated(n);
}

// sigma_n(f) = (s_0 + ... + s_n)/(n+1): coefficient j scaled by (n+1-j)/(n+1).
template <class T>
TaylorSeries<T> cesaro_mean(const TaylorSeries<T>& f, int n) {
  auto out = partial_sum(f, n);
  for (int j = 0; j <= n; ++j) {
    if constexpr (std::is_same_v<T, Extended>) {
      out[j] = out[j] * (n + 1 - j) / (n + 1);
    } else {
      out[j] *= static_cast<double>(n + 1 - j) / (n + 1);
    }
  }
  return out;
}

}  // namespace hblab
