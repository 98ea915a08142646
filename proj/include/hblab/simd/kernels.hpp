#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

// Inner-product kernels behind the truncated-series and Toeplitz routines.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The variant is picked once per process from CPUID; set
// HBLAB_ISA=scalar in the environment to force the reference path.
//
// The two paths differ only in summation order, so results agree to a few
// ulps of sum |a_i b_i| but are not bit-identical across ISAs. On one
// machine the choice is fixed, which keeps every report reproducible.

namespace hblab::simd {

enum class Isa { scalar, avx2 };

using cplx = std::complex<double>;

struct KernelTable {
  Isa isa;
  // sum a_i b_i
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum |a_i| |b_i|
  double (*abs_dot)(const double* a, const double* b, std::size_t n);
  // sum a_i b_i
  cplx (*cdot)(const cplx* a, const cplx* b, std::size_t n);
  // sum conj(a_i) b_i
  cplx (*cdot_conj)(const cplx* a, const cplx* b, std::size_t n);
};

const KernelTable& scalar_kernels();
// nullptr when the build or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();
const KernelTable& active_kernels();

std::string_view isa_name(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active_kernels().dot(a.data(), b.data(), a.size());
}
inline double abs_dot(std::span<const double> a, std::span<const double> b) {
  return active_kernels().abs_dot(a.data(), b.data(), a.size());
}
inline cplx cdot(std::span<const cplx> a, std::span<const cplx> b) {
  return active_kernels().cdot(a.data(), b.data(), a.size());
}
inline cplx cdot_conj(std::span<const cplx> a, std::span<const cplx> b) {
  return active_kernels().cdot_conj(a.data(), b.data(), a.size());
}

namespace detail {
double dot_scalar(const double* a, const double* b, std::size_t n);
double abs_dot_scalar(const double* a, const double* b, std::size_t n);
cplx cdot_scalar(const cplx* a, const cplx* b, std::size_t n);
cplx cdot_conj_scalar(const cplx* a, const cplx* b, std::size_t n);

bool avx2_compiled();
double dot_avx2(const double* a, const double* b, std::size_t n);
double abs_dot_avx2(const double* a, const double* b, std::size_t n);
cplx cdot_avx2(const cplx* a, const cplx* b, std::size_t n);
cplx cdot_conj_avx2(const cplx* a, const cplx* b, std::size_t n);
}  // namespace detail

}  // namespace hblab::simd
