#pragma once

#include <cmath>
#include <complex>

namespace hblab::detail {

// log(1 + d), accurate when |d| is small.
inline std::complex<double> log1p_complex(std::complex<double> d) {
  if (std::abs(d) < 0.5) {
    const double x = d.real(), y = d.imag();
    return {0.5 * std::log1p(2.0 * x + x * x + y * y), std::atan2(y, 1.0 + x)};
  }
  return std::log(1.0 + d);
}

}  // namespace hblab::detail
