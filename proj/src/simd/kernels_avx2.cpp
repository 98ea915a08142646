// Built with -mavx2 -mfma; only reached through the dispatch table after a
// CPUID check.

#include <cmath>

#include "hblab/simd/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define HBLAB_HAVE_AVX2 1
#else
#define HBLAB_HAVE_AVX2 0
#endif

namespace hblab::simd::detail {

#if HBLAB_HAVE_AVX2

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

// Lane sums of even (real) and odd (imaginary) slots of a packed complex pair.
inline void hsum_even_odd(__m256d v, double& even, double& odd) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  even = _mm_cvtsd_f64(s);
  odd = _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

}  // namespace

bool avx2_compiled() { return true; }

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double abs_dot_avx2(const double* a, const double* b, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d va = _mm256_andnot_pd(sign, _mm256_loadu_pd(a + i));
    __m256d vb = _mm256_andnot_pd(sign, _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(va, vb, acc);
  }
  double sum = hsum(acc);
  for (; i < n; ++i) sum += std::abs(a[i]) * std::abs(b[i]);
  return sum;
}

// Two complex numbers per register: [r0 i0 r1 i1].
//   rr accumulates [ar*br, ai*bi, ...], ri accumulates [ar*bi, ai*br, ...].
//   a*b       = (even(rr) - odd(rr)) + i (even(ri) + odd(ri))
//   conj(a)*b = (even(rr) + odd(rr)) + i (even(ri) - odd(ri))
namespace {
inline void complex_products(const cplx* a, const cplx* b, std::size_t n,
                             __m256d& rr, __m256d& ri, std::size_t& done) {
  const auto* pa = reinterpret_cast<const double*>(a);
  const auto* pb = reinterpret_cast<const double*>(b);
  rr = _mm256_setzero_pd();
  ri = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * i);
    __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    __m256d vb_swapped = _mm256_permute_pd(vb, 0b0101);
    rr = _mm256_fmadd_pd(va, vb, rr);
    ri = _mm256_fmadd_pd(va, vb_swapped, ri);
  }
  done = i;
}
}  // namespace

cplx cdot_avx2(const cplx* a, const cplx* b, std::size_t n) {
  __m256d rr, ri;
  std::size_t i;
  complex_products(a, b, n, rr, ri, i);
  double rr_even, rr_odd, ri_even, ri_odd;
  hsum_even_odd(rr, rr_even, rr_odd);
  hsum_even_odd(ri, ri_even, ri_odd);
  double re = rr_even - rr_odd;
  double im = ri_even + ri_odd;
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
  }
  return {re, im};
}

cplx cdot_conj_avx2(const cplx* a, const cplx* b, std::size_t n) {
  __m256d rr, ri;
  std::size_t i;
  complex_products(a, b, n, rr, ri, i);
  double rr_even, rr_odd, ri_even, ri_odd;
  hsum_even_odd(rr, rr_even, rr_odd);
  hsum_even_odd(ri, ri_even, ri_odd);
  double re = rr_even + rr_odd;
  double im = ri_even - ri_odd;
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

#else

bool avx2_compiled() { return false; }
double dot_avx2(const double* a, const double* b, std::size_t n) { return dot_scalar(a, b, n); }
double abs_dot_avx2(const double* a, const double* b, std::size_t n) {
  return abs_dot_scalar(a, b, n);
}
cplx cdot_avx2(const cplx* a, const cplx* b, std::size_t n) { return cdot_scalar(a, b, n); }
cplx cdot_conj_avx2(const cplx* a, const cplx* b, std::size_t n) {
  return cdot_conj_scalar(a, b, n);
}

#endif

}  // namespace hblab::simd::detail
