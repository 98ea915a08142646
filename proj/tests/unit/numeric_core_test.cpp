#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "hblab/decimal.hpp"
#include "hblab/extended.hpp"
#include "hblab/log_scalar.hpp"
#include "hblab/simd/kernels.hpp"
#include "hblab/taylor_series.hpp"
#include "hblab/toeplitz.hpp"
#include "oracles/oracles.hpp"

using namespace hblab;
using cplx = std::complex<double>;

namespace {

std::vector<cplx> random_cvec(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<cplx> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = {u(rng), u(rng)};
  return v;
}

double max_rel_coeff_err(const std::vector<cplx>& got, const std::vector<cplx>& want) {
  double scale = 0.0, err = 0.0;
  for (std::size_t k = 0; k < want.size(); ++k) {
    scale = std::max(scale, std::abs(want[k]));
    err = std::max(err, std::abs(got[k] - want[k]));
  }
  return scale > 0 ? err / scale : err;
}

}  // namespace

TEST_SUITE("LogScalar") {
  TEST_CASE("zero is canonical") {
    const auto z = LogScalar::from_log(-std::numeric_limits<double>::infinity(), 1.3);
    CHECK(z.is_zero());
    CHECK(z.phase() == 0.0);
    CHECK(LogScalar::from_real(0.0) == LogScalar::zero());
    CHECK((z * LogScalar::from_log(5.0, 2.0)).is_zero());
  }

  TEST_CASE("multiplication adds logs and wraps phases into (-pi, pi]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lg(-50, 50), ph(-std::numbers::pi, std::numbers::pi);
    for (int i = 0; i < 500; ++i) {
      const auto a = LogScalar::from_log(lg(rng), ph(rng));
      const auto b = LogScalar::from_log(lg(rng), ph(rng));
      const auto c = a * b;
      CHECK(c.log_mag() == doctest::Approx(a.log_mag() + b.log_mag()).epsilon(1e-15));
      CHECK(c.phase() > -std::numbers::pi);
      CHECK(c.phase() <= std::numbers::pi);
      const double d = std::remainder(c.phase() - a.phase() - b.phase(), 2 * std::numbers::pi);
      CHECK(std::abs(d) < 1e-12);
    }
    CHECK(wrap_phase(-std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(LogScalar::from_real(-2.0).phase() == std::numbers::pi);
  }

  TEST_CASE("round trip through complex") {
    const cplx z(-0.3, 0.7);
    const auto s = LogScalar::from_complex(z);
    CHECK(std::abs(s.to_complex() - z) < 1e-15);
    CHECK(LogScalar::from_real(-4.0).to_double() == doctest::Approx(-4.0));
  }
}

TEST_SUITE("log_sum_exp") {
  TEST_CASE("examples") {
    const std::vector<LogScalar> ones = {LogScalar::one(), LogScalar::one()};
    CHECK(log_sum_exp(ones).log_mag() == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(log_sum_exp(std::span<const LogScalar>{}).is_zero());
    const std::vector<LogScalar> big = {LogScalar::from_log(1000), LogScalar::from_log(1000)};
    const double got = log_sum_exp(big).log_mag();
    CHECK(got == doctest::Approx(oracle::log_sum_exp({1000.0, 1000.0})).epsilon(1e-15));
    CHECK(got == doctest::Approx(1000.0 + std::numbers::ln2).epsilon(1e-15));
  }

  TEST_CASE("rejects signed terms") {
    const std::vector<LogScalar> t = {LogScalar::one(), LogScalar::from_real(-1.0)};
    CHECK_THROWS_AS(log_sum_exp(t), std::domain_error);
  }

  TEST_CASE("zeros are ignored") {
    const std::vector<LogScalar> t = {LogScalar::zero(), LogScalar::from_log(3.0), LogScalar::zero()};
    CHECK(log_sum_exp(t).log_mag() == 3.0);
  }

  TEST_CASE("property: max <= lse(x, y) <= max + ln 2, and matches MPFR within a few ulp") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> lg(-700, 700);
    for (int i = 0; i < 2000; ++i) {
      const double x = lg(rng), y = (i % 3 == 0) ? x + 1e-3 * lg(rng) : lg(rng);
      const double got = log_sum_exp(LogScalar::from_log(x), LogScalar::from_log(y)).log_mag();
      const double mx = std::max(x, y);
      CHECK(got >= mx);
      CHECK(got <= mx + std::numbers::ln2 * (1 + 1e-15));
      const double want = oracle::log_sum_exp({x, y});
      CHECK(std::abs(got - want) <= 4 * std::numeric_limits<double>::epsilon() * std::abs(want) + 1e-300);
    }
  }
}

TEST_SUITE("TaylorSeries") {
  TEST_CASE("evaluation at zero, linear operations and truncated product") {
    std::mt19937_64 rng(3);
    const Series a(random_cvec(rng, 9)), b(random_cvec(rng, 9));
    CHECK(a.eval(cplx(0.0)) == a[0]);
    const auto s = a + b;
    const auto p = multiply(a, b, 8);
    CHECK(p.degree() == 8);
    for (int k = 0; k <= 8; ++k) {
      CHECK(s[k] == a[k] + b[k]);
      cplx want = 0;
      for (int j = 0; j <= k; ++j) want += a[j] * b[k - j];
      CHECK(std::abs(p[k] - want) < 1e-14);
    }
    const auto sc = cplx(2.0, -1.0) * a;
    CHECK(sc[3] == cplx(2.0, -1.0) * a[3]);
  }
}

TEST_SUITE("exp_series") {
  TEST_CASE("zero series gives the constant 1") {
    const auto e = exp_series(Series::zero(12));
    CHECK(e[0] == cplx(1.0));
    for (int k = 1; k <= 12; ++k) CHECK(e[k] == cplx(0.0));
  }

  TEST_CASE("g = c z gives c^k / k!") {
    const cplx c(0.7, -1.3);
    auto g = Series::zero(20);
    g[1] = c;
    const auto e = exp_series(g);
    cplx want = 1.0;
    for (int k = 0; k <= 20; ++k) {
      if (k > 0) want *= c / static_cast<double>(k);
      CHECK(oracle::rel_err(e[k], want) < 1e-13);
    }
  }

  TEST_CASE("random degree-16 g: pointwise exp(g(z)) on 64 circle samples") {
    std::mt19937_64 rng(5);
    // Coefficients decay so the degree-16 truncation of exp(g) is accurate on
    // the sampling circle (tail ~ 0.125^17); the oracle is exp of g(z).
    auto c = random_cvec(rng, 17);
    for (std::size_t k = 1; k < c.size(); ++k) c[k] *= std::pow(0.5, static_cast<double>(k));
    const Series g(c);
    const auto e = exp_series(g);
    const double radius = 0.25;
    for (int i = 0; i < 64; ++i) {
      const cplx z = std::polar(radius, 2 * std::numbers::pi * i / 64);
      const cplx want = std::exp(oracle::horner(c, z));
      CHECK(oracle::rel_err(e.eval(z), want) <= 1e-10);
    }
  }

  TEST_CASE("property: exp(g1 + g2) = exp(g1) exp(g2) truncated") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
      const int deg = 1 + trial * 3;  // up to 58
      const Series g1(random_cvec(rng, deg + 1, 0.5)), g2(random_cvec(rng, deg + 1, 0.5));
      const auto lhs = exp_series(g1 + g2);
      const auto rhs = multiply(exp_series(g1), exp_series(g2), deg);
      CHECK(max_rel_coeff_err(lhs.coeffs(), rhs.coeffs()) <= 1e-10);
    }
  }

  TEST_CASE("extended-precision recurrence agrees with double") {
    ScopedPrecision prec(160);
    std::mt19937_64 rng(13);
    const auto c = random_cvec(rng, 33, 0.4);
    std::vector<Extended> ce;
    std::vector<double> cd;
    for (const auto& x : c) {
      ce.emplace_back(x.real());
      cd.push_back(x.real());
    }
    const auto e_ext = exp_series(TaylorSeries<Extended>(ce));
    const auto e_dbl = exp_series(TaylorSeries<double>(cd));
    for (int k = 0; k <= 32; ++k) {
      const double a = static_cast<double>(e_ext[k]);
      CHECK(std::abs(a - e_dbl[k]) <= 1e-13 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_SUITE("triangular_solve_upper_toeplitz") {
  TEST_CASE("identity diagonal returns rhs") {
    std::mt19937_64 rng(1);
    const auto rhs = random_cvec(rng, 10);
    const auto x = triangular_solve_upper_toeplitz(std::vector<cplx>{1.0}, rhs);
    CHECK(x == rhs);
  }

  TEST_CASE("tame pair f+ = 1 case") {
    const std::vector<cplx> h = {0.5, -0.5};
    std::vector<cplx> rhs(8, 0.0);
    rhs[0] = 0.5;
    const auto x = triangular_solve_upper_toeplitz(h, rhs);
    const auto dense = oracle::dense_upper_toeplitz_solve(h, rhs);
    for (std::size_t k = 0; k < x.size(); ++k) {
      CHECK(std::abs(x[k] - (k == 0 ? 1.0 : 0.0)) < 1e-15);
      CHECK(std::abs(x[k] - dense[k]) < 1e-15);
    }
  }

  TEST_CASE("random size-32 system matches the dense solve") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
      auto h = random_cvec(rng, 32, 0.3);
      h[0] = cplx(2.0, 0.5);  // well conditioned
      const auto rhs = random_cvec(rng, 32);
      const auto x = triangular_solve_upper_toeplitz(h, rhs);
      const auto dense = oracle::dense_upper_toeplitz_solve(h, rhs);
      CHECK(max_rel_coeff_err(x, dense) <= 1e-12);
    }
  }

  TEST_CASE("property: forward application reproduces rhs (size <= 128)") {
    std::mt19937_64 rng(19);
    for (int n : {1, 2, 7, 32, 64, 128}) {
      auto h = random_cvec(rng, n, 0.2);
      h[0] = cplx(1.5, -0.4);
      const auto rhs = random_cvec(rng, n);
      const auto x = triangular_solve_upper_toeplitz(h, rhs);
      CHECK(max_rel_coeff_err(upper_toeplitz_apply(h, x), rhs) <= 1e-12);
    }
  }

  TEST_CASE("tiny diagonal is rejected") {
    const std::vector<cplx> h = {1e-310, 1.0};
    CHECK_THROWS_AS(triangular_solve_upper_toeplitz(h, std::vector<cplx>(4, 1.0)), SingularDiagonal);
    TriangularSolveOptions opts;
    opts.min_diagonal = 1e-3;
    CHECK_THROWS_AS(
        triangular_solve_upper_toeplitz(std::vector<cplx>{1e-4}, std::vector<cplx>(2, 1.0), opts),
        SingularDiagonal);
  }
}

TEST_SUITE("simd kernels") {
  TEST_CASE("AVX2 kernels agree with the scalar reference") {
    const auto* avx = simd::avx2_kernels();
    if (!avx) {
      MESSAGE("AVX2 not available; scalar-only build");
      return;
    }
    const auto& sc = simd::scalar_kernels();
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1, 1);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 8u, 17u, 64u, 1001u}) {
      std::vector<double> a(n), b(n), aa(n), ab(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = u(rng);
        b[i] = u(rng);
        aa[i] = std::abs(a[i]);
        ab[i] = std::abs(b[i]);
      }
      const auto ca = random_cvec(rng, static_cast<int>(n)), cb = random_cvec(rng, static_cast<int>(n));
      const double tol = 1e-14 * (1.0 + static_cast<double>(n));
      CHECK(std::abs(avx->dot(a.data(), b.data(), n) - sc.dot(a.data(), b.data(), n)) <= tol);
      CHECK(std::abs(avx->abs_dot(aa.data(), ab.data(), n) - sc.abs_dot(aa.data(), ab.data(), n)) <= tol);
      CHECK(std::abs(avx->cdot(ca.data(), cb.data(), n) - sc.cdot(ca.data(), cb.data(), n)) <= tol);
      CHECK(std::abs(avx->cdot_conj(ca.data(), cb.data(), n) - sc.cdot_conj(ca.data(), cb.data(), n)) <= tol);
    }
  }

  TEST_CASE("scalar kernels match a naive loop") {
    std::mt19937_64 rng(29);
    const auto ca = random_cvec(rng, 37), cb = random_cvec(rng, 37);
    cplx want = 0, want_conj = 0;
    for (int i = 0; i < 37; ++i) {
      want += ca[i] * cb[i];
      want_conj += std::conj(ca[i]) * cb[i];
    }
    const auto& sc = simd::scalar_kernels();
    CHECK(std::abs(sc.cdot(ca.data(), cb.data(), 37) - want) < 1e-13);
    CHECK(std::abs(sc.cdot_conj(ca.data(), cb.data(), 37) - want_conj) < 1e-13);
  }
}

TEST_SUITE("decimal") {
  TEST_CASE("double round trip is exact") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1e5, 1e5);
    for (int i = 0; i < 1000; ++i) {
      const double x = u(rng) * std::pow(10.0, (i % 40) - 20);
      CHECK(parse_decimal(to_decimal(x)) == x);
    }
    CHECK_THROWS_AS(parse_decimal("1.5x"), std::invalid_argument);
  }

  TEST_CASE("extended values print at full precision") {
    ScopedPrecision prec(128);
    const Extended third = Extended(1) / 3;
    const Extended back(to_decimal(third));
    CHECK(back == third);
  }
}
