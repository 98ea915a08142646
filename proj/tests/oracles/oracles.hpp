#pragma once

// Independent reference computations used by the tests. None of these call
// into the library's numerical routines: quadrature comes from Boost.Math,
// dense linear algebra from Eigen, and extended arithmetic from MPFR directly.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using mp = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<200>>;

// ln(sum exp(x_i)) in 200-bit arithmetic.
inline double log_sum_exp(const std::vector<double>& logs) {
  mp acc = 0;
  for (double x : logs) acc += boost::multiprecision::exp(mp(x));
  return static_cast<double>(boost::multiprecision::log(acc));
}

// The construction sequences straight from their definitions, in 200-bit
// arithmetic (1-based vectors; index 0 unused).
struct Seq {
  std::vector<mp> w, one_minus_w, t, eps, height;
};

inline Seq sequences(double alpha, double beta, int n_terms) {
  using boost::multiprecision::exp;
  using boost::multiprecision::pow;
  Seq s;
  const int n = n_terms + 1;
  s.w.resize(n + 1);
  s.one_minus_w.resize(n + 1);
  s.t.resize(n + 1);
  s.eps.resize(n + 1);
  s.height.resize(n + 1);
  for (int k = 1; k <= n; ++k) {
    s.one_minus_w[k] = exp(-pow(mp(k), mp(beta)));
    s.w[k] = 1 - s.one_minus_w[k];
    s.t[k] = (1 - s.w[k] * s.w[k]) / (1 + s.w[k] * s.w[k]);
  }
  for (int k = 1; k <= n_terms; ++k) {
    s.eps[k] = s.one_minus_w[k] / s.one_minus_w[k + 1] * exp(-pow(mp(k), mp(alpha)));
    s.height[k] = s.eps[k] / s.t[k];
  }
  return s;
}

// Re log Phi(x + iy): the Poisson integral (1/pi) sum_k h_k int_{2t_k}^{3t_k}
// y / ((s - x)^2 + y^2) ds by adaptive Gauss-Kronrod quadrature.
inline double poisson_re_log_Phi(cplx z, const std::vector<double>& t,
                                 const std::vector<double>& height) {
  double acc = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    auto f = [&](double s) {
      const double dx = s - z.real();
      return z.imag() / (dx * dx + z.imag() * z.imag());
    };
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, 2.0 * t[k], 3.0 * t[k], 15, 1e-14);
    acc += height[k] * v / std::numbers::pi;
  }
  return acc;
}

// Dense solve of sum_j conj(h_j) x_{k+j} = rhs_k (upper-triangular Toeplitz).
inline std::vector<cplx> dense_upper_toeplitz_solve(const std::vector<cplx>& h,
                                                    const std::vector<cplx>& rhs) {
  const int n = static_cast<int>(rhs.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < static_cast<int>(h.size()) && k + j < n; ++j) m(k, k + j) = std::conj(h[j]);
  }
  Eigen::VectorXcd b(n);
  for (int k = 0; k < n; ++k) b(k) = rhs[k];
  Eigen::VectorXcd x = m.partialPivLu().solve(b);
  return std::vector<cplx>(x.data(), x.data() + n);
}

// Dense matrix of the co-analytic Toeplitz operator T_conj(h) on C^n:
// (T f)_k = sum_j conj(h_j) f_{k+j}.
inline Eigen::MatrixXcd coanalytic_toeplitz_matrix(const std::vector<cplx>& h, int n) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < static_cast<int>(h.size()) && k + j < n; ++j) m(k, k + j) = std::conj(h[j]);
  }
  return m;
}

// Horner evaluation of a coefficient vector.
inline cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

inline double rel_err(cplx got, cplx want) {
  const double d = std::abs(got - want);
  const double s = std::abs(want);
  return s > 0 ? d / s : d;
}

}  // namespace oracle
