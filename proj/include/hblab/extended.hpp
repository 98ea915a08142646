#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace hblab {

// Runtime-precision binary float (MPFR). Precision is per thread.
using Extended = boost::multiprecision::mpfr_float;

// Thrown when a computation needs more mantissa bits than configured.
class PrecisionExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sets the thread's default Extended precision for the lifetime of the guard.
class ScopedPrecision {
 public:
  explicit ScopedPrecision(int bits)
      : saved_(Extended::default_precision()) {
    if (bits < 24) throw std::invalid_argument("precision below 24 bits");
    Extended::default_precision(digits10_for_bits(bits));
  }
  ~ScopedPrecision() { Extended::default_precision(saved_); }
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

  static unsigned digits10_for_bits(int bits) {
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
  }

 private:
  unsigned saved_;
};

// pi at the current default precision.
inline Extended extended_pi() {
  Extended pi;
  mpfr_const_pi(pi.backend().data(), MPFR_RNDN);
  return pi;
}

// Mantissa bits of newly created Extended values.
inline int extended_bits() {
  Extended x;
  return static_cast<int>(mpfr_get_prec(x.backend().data()));
}

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};
template <class T>
inline constexpr bool is_complex_v = is_complex<T>::value;

// Coefficient helpers shared by the real, complex and Extended code paths.
template <class T>
T conj_of(const T& x) {
  if constexpr (is_complex_v<T>) {
    return std::conj(x);
  } else {
    return x;
  }
}

template <class T>
double magnitude(const T& x) {
  if constexpr (is_complex_v<T>) {
    return std::abs(x);
  } else if constexpr (std::is_same_v<T, Extended>) {
    return static_cast<double>(abs(x));
  } else {
    return std::abs(x);
  }
}

// |x| for condition tracking; long double keeps a wider exponent range.
template <class T>
long double magnitude_ld(const T& x) {
  if constexpr (is_complex_v<T>) {
    return std::abs(std::complex<long double>(x.real(), x.imag()));
  } else if constexpr (std::is_same_v<T, Extended>) {
    return abs(x).template convert_to<long double>();
  } else {
    return std::abs(static_cast<long double>(x));
  }
}

template <class T>
bool finite_value(const T& x) {
  if constexpr (is_complex_v<T>) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
  } else if constexpr (std::is_same_v<T, Extended>) {
    return boost::multiprecision::isfinite(x);
  } else {
    return std::isfinite(x);
  }
}

template <class T>
T exp_of(const T& x) {
  using std::exp;
  return exp(x);
}

}  // namespace hblab
