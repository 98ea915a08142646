#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "hblab/extended.hpp"
#include "hblab/simd/kernels.hpp"

namespace hblab {

// Coefficients c_0..c_N of a power series known up to degree N.
template <class T>
class TaylorSeries {
 public:
  using value_type = T;

  TaylorSeries() : coeffs_(1, T(0)) {}
  explicit TaylorSeries(std::vector<T> coeffs, int precision_bits = 53)
      : coeffs_(std::move(coeffs)), precision_bits_(precision_bits) {
    if (coeffs_.empty()) throw std::invalid_argument("TaylorSeries needs at least c_0");
  }

  static TaylorSeries zero(int degree) {
    return TaylorSeries(std::vector<T>(static_cast<std::size_t>(degree) + 1, T(0)));
  }
  static TaylorSeries constant(T c, int degree = 0) {
    auto s = zero(degree);
    s.coeffs_[0] = std::move(c);
    return s;
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  int precision_bits() const { return precision_bits_; }
  void set_precision_bits(int bits) { precision_bits_ = bits; }

  const std::vector<T>& coeffs() const { return coeffs_; }
  std::vector<T>& coeffs() { return coeffs_; }
  const T& operator[](std::size_t k) const { return coeffs_[k]; }
  T& operator[](std::size_t k) { return coeffs_[k]; }
  // Zero beyond the stored degree.
  T coeff_or_zero(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : T(0); }

  const T& at_zero() const { return coeffs_[0]; }

  // Horner evaluation of the truncated polynomial.
  template <class Z>
  Z eval(const Z& z) const {
    Z acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + Z(*it);
    return acc;
  }

  TaylorSeries truncated(int degree) const {
    std::vector<T> c(static_cast<std::size_t>(degree) + 1, T(0));
    const auto n = std::min(c.size(), coeffs_.size());
    std::copy_n(coeffs_.begin(), n, c.begin());
    return TaylorSeries(std::move(c), precision_bits_);
  }

  TaylorSeries& operator+=(const TaylorSeries& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), T(0));
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    return *this;
  }
  TaylorSeries& operator-=(const TaylorSeries& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), T(0));
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    return *this;
  }
  TaylorSeries& operator*=(const T& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  friend TaylorSeries operator+(TaylorSeries a, const TaylorSeries& b) { return a += b; }
  friend TaylorSeries operator-(TaylorSeries a, const TaylorSeries& b) { return a -= b; }
  friend TaylorSeries operator*(TaylorSeries a, const T& s) { return a *= s; }
  friend TaylorSeries operator*(const T& s, TaylorSeries a) { return a *= s; }

 private:
  std::vector<T> coeffs_;
  int precision_bits_ = 53;
};

using Series = TaylorSeries<std::complex<double>>;

// Cauchy product truncated at `degree`.
template <class T>
TaylorSeries<T> multiply(const TaylorSeries<T>& a, const TaylorSeries<T>& b, int degree) {
  auto out = TaylorSeries<T>::zero(degree);
  for (int n = 0; n <= degree; ++n) {
    T acc(0);
    const int lo = std::max(0, n - b.degree());
    const int hi = std::min(n, a.degree());
    for (int k = lo; k <= hi; ++k) acc += a[k] * b[n - k];
    out[n] = acc;
  }
  out.set_precision_bits(std::min(a.precision_bits(), b.precision_bits()));
  return out;
}

template <class T>
TaylorSeries<T> multiply(const TaylorSeries<T>& a, const TaylorSeries<T>& b) {
  return multiply(a, b, std::max(a.degree(), b.degree()));
}

namespace detail {

// Growable buffer holding e_0, e_1, ... in reverse so that the window
// e_{n-1}, ..., e_0 is contiguous for the dot-product kernels.
template <class T>
class ReversedBuffer {
 public:
  std::size_t size() const { return size_; }

  void push(const T& x) {
    if (size_ == data_.size()) grow();
    data_[data_.size() - 1 - size_] = x;
    ++size_;
  }
  // Pointer to e_{size-1}; e_{size-1-i} is at offset i.
  const T* newest() const { return data_.data() + (data_.size() - size_); }

 private:
  void grow() {
    const std::size_t cap = std::max<std::size_t>(64, data_.size() * 2);
    std::vector<T> next(cap, T(0));
    std::copy(data_.end() - static_cast<std::ptrdiff_t>(size_), data_.end(),
              next.end() - static_cast<std::ptrdiff_t>(size_));
    data_ = std::move(next);
  }

  std::vector<T> data_;
  std::size_t size_ = 0;
};

inline void fma_into(Extended& acc, const Extended& x, const Extended& y) {
  mpfr_fma(acc.backend().data(), x.backend().data(), y.backend().data(),
           acc.backend().data(), MPFR_RNDN);
}

}  // namespace detail

// Coefficients of exp(g) produced one at a time from the recurrence
//   n e_n = sum_{k=1..n} k g_k e_{n-k},  e_0 = exp(g_0).
// Also tracks the cancellation ratio max_n sum|k g_k e_{n-k}| / |n e_n|,
// which bounds the relative rounding error growth.
template <class T>
class ExpSeriesGenerator {
  static constexpr bool kSimd =
      std::is_same_v<T, double> || std::is_same_v<T, std::complex<double>>;

 public:
  explicit ExpSeriesGenerator(const T& g0) { append_e(exp_of(g0)); }

  std::size_t size() const { return e_.size(); }
  const std::vector<T>& coeffs() const { return e_; }
  double condition() const { return static_cast<double>(condition_); }

  // Supplies g_n for n = size() and returns e_n.
  const T& push(const T& g_n) {
    const std::size_t n = e_.size();
    T kg = g_n * T(static_cast<double>(n));
    kg_.push_back(kg);
    kg_abs_.push_back(magnitude_ld(kg));
    if constexpr (kSimd) kg_abs_d_.push_back(static_cast<double>(kg_abs_.back()));

    T acc(0);
    long double abs_acc = 0.0L;
    if constexpr (kSimd) {
      const T* window = e_rev_.newest();
      if constexpr (std::is_same_v<T, double>) {
        acc = simd::dot({kg_.data(), n}, {window, n});
      } else {
        acc = simd::cdot({kg_.data(), n}, {window, n});
      }
      const double* abs_window = e_abs_rev_.newest();
      abs_acc = simd::abs_dot({kg_abs_d_.data(), n}, {abs_window, n});
    } else {
      for (std::size_t k = 1; k <= n; ++k) {
        if constexpr (std::is_same_v<T, Extended>) {
          detail::fma_into(acc, kg_[k - 1], e_[n - k]);
        } else {
          acc += kg_[k - 1] * e_[n - k];
        }
        abs_acc += kg_abs_[k - 1] * e_abs_[n - k];
      }
    }
    T e_n = acc / T(static_cast<double>(n));
    const long double mag = magnitude_ld(acc);
    if (abs_acc > 0 && std::isfinite(static_cast<double>(abs_acc))) {
      const long double ratio = mag > 0 ? abs_acc / mag : 1.0e300L;
      condition_ = std::max(condition_, ratio);
    }
    append_e(std::move(e_n));
    return e_.back();
  }

 private:
  void append_e(T e) {
    if constexpr (kSimd) {
      e_rev_.push(e);
      e_abs_rev_.push(static_cast<double>(magnitude_ld(e)));
    }
    e_abs_.push_back(magnitude_ld(e));
    e_.push_back(std::move(e));
  }

  std::vector<T> e_;
  std::vector<T> kg_;
  std::vector<long double> kg_abs_;
  std::vector<long double> e_abs_;
  std::vector<double> kg_abs_d_;
  detail::ReversedBuffer<T> e_rev_;
  detail::ReversedBuffer<double> e_abs_rev_;
  long double condition_ = 1.0L;
};

// Truncation of exp(g) to the degree of g. If `condition` is non-null it
// receives the cancellation ratio from ExpSeriesGenerator.
template <class T>
TaylorSeries<T> exp_series(const TaylorSeries<T>& g, double* condition = nullptr) {
  ExpSeriesGenerator<T> gen(g[0]);
  for (int n = 1; n <= g.degree(); ++n) gen.push(g[n]);
  if (condition) *condition = gen.condition();
  return TaylorSeries<T>(gen.coeffs(), g.precision_bits());
}

}  // namespace hblab
