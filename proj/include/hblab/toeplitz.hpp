#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "hblab/extended.hpp"
#include "hblab/simd/kernels.hpp"
#include "hblab/taylor_series.hpp"

namespace hblab {

class SingularDiagonal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// sum_{j<n} conj(h_j) x_j
template <class T>
T conj_dot(const T* h, const T* x, std::size_t n) {
  if constexpr (std::is_same_v<T, std::complex<double>>) {
    return simd::cdot_conj({h, n}, {x, n});
  } else if constexpr (std::is_same_v<T, double>) {
    return simd::dot({h, n}, {x, n});
  } else {
    T acc(0);
    for (std::size_t j = 0; j < n; ++j) {
      if constexpr (std::is_same_v<T, Extended>) {
        fma_into(acc, h[j], x[j]);
      } else {
        acc += conj_of(h[j]) * x[j];
      }
    }
    return acc;
  }
}

template <class T>
long double abs_conj_dot(const T* h, const T* x, std::size_t n) {
  long double acc = 0.0L;
  for (std::size_t j = 0; j < n; ++j) acc += magnitude_ld(h[j]) * magnitude_ld(x[j]);
  return acc;
}

}  // namespace detail

// Output k = sum_{j>=0} conj(h_j) f_{k+j}, k = 0..deg f. This is T_{conj h}
// on truncated Taylor data (the H^2 adjoint of multiplication by h).
template <class T>
TaylorSeries<T> toeplitz_coanalytic_apply(const TaylorSeries<T>& h, const TaylorSeries<T>& f) {
  const std::size_t n = f.coeffs().size();
  const std::size_t hn = h.coeffs().size();
  std::vector<T> out(n, T(0));
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t len = std::min(hn, n - k);
    out[k] = detail::conj_dot(h.coeffs().data(), f.coeffs().data() + k, len);
  }
  return TaylorSeries<T>(std::move(out), std::min(h.precision_bits(), f.precision_bits()));
}

struct TriangularSolveOptions {
  // Minimum |h_0| accepted as a nonsingular diagonal.
  double min_diagonal = 1e-300;
  // If non-null, receives max_k (|rhs_k| + sum|h_j x_{k+j}|) / |h_0 x_k|.
  double* condition = nullptr;
};

// Solves sum_{j>=0} conj(h_j) x_{k+j} = rhs_k for k = 0..len(rhs)-1 by back
// substitution from the top index, taking x_k = 0 beyond the truncation.
template <class T>
std::vector<T> triangular_solve_upper_toeplitz(const std::vector<T>& h, const std::vector<T>& rhs,
                                               TriangularSolveOptions opts = {}) {
  if (h.empty()) throw std::invalid_argument("triangular_solve: empty diagonal data");
  if (magnitude(h[0]) < opts.min_diagonal || !finite_value(h[0])) {
    throw SingularDiagonal("triangular_solve: diagonal magnitude " +
                           std::to_string(magnitude(h[0])) + " below threshold " +
                           std::to_string(opts.min_diagonal));
  }
  const std::size_t n = rhs.size();
  std::vector<T> x(n, T(0));
  const T diag = conj_of(h[0]);
  long double worst = 1.0L;
  for (std::size_t kk = n; kk-- > 0;) {
    const std::size_t len = std::min(h.size() - 1, n - 1 - kk);
    const T tail = detail::conj_dot(h.data() + 1, x.data() + kk + 1, len);
    x[kk] = (rhs[kk] - tail) / diag;
    if (opts.condition) {
      const long double scale =
          magnitude_ld(rhs[kk]) + detail::abs_conj_dot(h.data() + 1, x.data() + kk + 1, len);
      const long double got = magnitude_ld(x[kk]) * magnitude_ld(h[0]);
      if (scale > 0) worst = std::max(worst, got > 0 ? scale / got : 1.0e300L);
    }
  }
  if (opts.condition) *opts.condition = static_cast<double>(worst);
  return x;
}

// Forward application sum_j conj(h_j) x_{k+j}: the inverse map of the solve.
template <class T>
std::vector<T> upper_toeplitz_apply(const std::vector<T>& h, const std::vector<T>& x) {
  std::vector<T> out(x.size(), T(0));
  for (std::size_t k = 0; k < x.size(); ++k) {
    out[k] = detail::conj_dot(h.data(), x.data() + k, std::min(h.size(), x.size() - k));
  }
  return out;
}

}  // namespace hblab
