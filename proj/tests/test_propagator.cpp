#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "uvlab/errors.hpp"
#include "uvlab/propagator.hpp"

using namespace uvlab;

namespace {
ModelParams base(double Lambda) {
  ModelParams p;
  p.Lambda = Lambda;
  return p;
}
}  // namespace

TEST_CASE("C_Lambda(0) in d = 2 is E1(m^2/Lambda^2)/(4 pi)") {
  for (double Lam : {std::exp(1.0), 10.0, 100.0, 1e4}) {
    const double expected = oracle::e1_series(1.0 / (Lam * Lam)) / (4 * std::numbers::pi);
    CHECK(covariance_zero(base(Lam)) == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(covariance_zero(base(10.0)) == doctest::Approx(0.32134).epsilon(1e-4));
}

TEST_CASE("C_Lambda(0) in d = 3 follows Gamma(-1/2, x)") {
  ModelParams p = base(20.0);
  p.d = 3;
  p.m = 1.5;
  const double x = p.m * p.m / (p.Lambda * p.Lambda);
  const double g = 2 * std::exp(-x) / std::sqrt(x) - 2 * std::sqrt(std::numbers::pi) * std::erfc(std::sqrt(x));
  CHECK(covariance_zero(p) == doctest::Approx(p.m * g / (8 * std::pow(std::numbers::pi, 1.5))).epsilon(1e-12));
  const std::vector<double> origin(3, 0.0);
  CHECK(covariance_at(origin, p) == doctest::Approx(covariance_zero(p)).epsilon(1e-8));
}

TEST_CASE("quadrature at the origin agrees with the closed form") {
  const std::array<double, 2> origin{0.0, 0.0};
  for (double Lam : {std::exp(1.0), 10.0, 1e3}) {
    CHECK(covariance_at(origin, base(Lam)) == doctest::Approx(covariance_zero(base(Lam))).epsilon(1e-8));
  }
}

TEST_CASE("reflection and rotation symmetry") {
  const auto p = base(10.0);
  const std::array<double, 2> a{1, 0}, b{-1, 0}, c{0, 1};
  CHECK(covariance_at(a, p) == doctest::Approx(covariance_at(b, p)).epsilon(1e-14));
  CHECK(covariance_at(a, p) == doctest::Approx(covariance_at(c, p)).epsilon(1e-14));
}

TEST_CASE("large cutoff approaches K0(r)/(2 pi)") {
  const std::array<double, 2> x{1, 0};
  const double k0 = oracle::green_2d(1.0);
  CHECK(std::abs(covariance_at(x, base(1e3)) / k0 - 1) < 1e-4);
  CHECK(covariance_uv_limit(x, base(10.0)) == doctest::Approx(k0).epsilon(1e-10));
  const std::array<double, 2> far{3, 4};
  CHECK(covariance_uv_limit(far, base(10.0)) == doctest::Approx(oracle::green_2d(5.0)).epsilon(1e-9));
}

TEST_CASE("the UV limit is rejected at the origin") {
  const std::array<double, 2> origin{0, 0};
  CHECK_THROWS_AS(covariance_uv_limit(origin, base(10.0)), PreconditionError);
}

TEST_CASE("positivity, strict maximum at the origin and bounded decay ratio") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double max_ratio = 0.0, min_ratio = 1e300;
  for (double Lam : {std::exp(1.0), 10.0, 100.0}) {
    const auto p = base(Lam);
    const double c0 = covariance_zero(p);
    for (int i = 0; i < 300; ++i) {
      const double r = 0.1 * std::pow(100.0, unit(rng));
      const double th = 2 * std::numbers::pi * unit(rng);
      const std::array<double, 2> x{r * std::cos(th), r * std::sin(th)};
      const double c = covariance_at(x, p);
      CHECK(c > 0);
      CHECK(c < c0);
      const double ratio = c * std::pow(r, p.d - 1.5);
      max_ratio = std::max(max_ratio, ratio);
      min_ratio = std::min(min_ratio, ratio);
    }
  }
  MESSAGE("decay ratio range [" << min_ratio << ", " << max_ratio << "]");
  CHECK(max_ratio < 1.0);
}

TEST_CASE("C_Lambda(0) increases with Lambda and grows like log Lambda") {
  double prev = 0.0, min_ratio = 1e300;
  for (double Lam : {std::exp(1.0), std::exp(2.0), std::exp(4.0), std::exp(8.0)}) {
    const double c0 = covariance_zero(base(Lam));
    CHECK(c0 > prev);
    prev = c0;
    min_ratio = std::min(min_ratio, c0 / std::log(Lam));
  }
  CHECK(min_ratio > 0.05);
}

TEST_CASE("renormalization scales") {
  auto p = base(10.0);
  p.eta = 0.0;
  CHECK(renorm_factor(p).Z == 1.0);
  p.eta = 1.0;
  CHECK(renorm_factor(p).s_minus == 1.0);
  p.eta = -1.0;
  CHECK(renorm_factor(p).s_plus == 1.0);
  p.eta = 0.4;
  const auto r = renorm_factor(p);
  CHECK(r.s_plus == doctest::Approx(std::sqrt(r.Z * r.c0)).epsilon(1e-14));
  CHECK(r.s_minus == doctest::Approx(std::sqrt(r.Z / r.c0)).epsilon(1e-14));
}

TEST_CASE("parameter validation") {
  auto p = base(10.0);
  p.d = 1;
  CHECK_THROWS_AS(p.validate(), PreconditionError);
  p = base(2.0);
  CHECK_THROWS_AS(p.validate(), PreconditionError);
  p = base(10.0);
  p.m = 0.0;
  CHECK_THROWS_AS(covariance_zero(p), PreconditionError);
  CHECK_NOTHROW(base(std::exp(1.0)).validate());
}
