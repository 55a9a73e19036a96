#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "uvlab/special.hpp"

using namespace uvlab::special;

TEST_CASE("E1 matches the power series and the standard library") {
  for (double x : {1e-6, 1e-4, 0.01, 0.1, 0.5, 1.0, 1.5, 2.0}) {
    CHECK(expint_e1(x) == doctest::Approx(oracle::e1_series(x)).epsilon(1e-13));
  }
  for (double x : {0.01, 0.9, 1.1, 3.0, 10.0, 40.0}) {
    CHECK(expint_e1(x) == doctest::Approx(oracle::e1_std(x)).epsilon(1e-13));
  }
}

TEST_CASE("E1 rejects nonpositive arguments") {
  CHECK_THROWS(expint_e1(0.0));
  CHECK_THROWS(expint_e1(-1.0));
}

TEST_CASE("upper incomplete gamma at the propagator exponents") {
  const double x = 0.3;
  CHECK(upper_gamma_half_integer(0.5, x) ==
        doctest::Approx(std::sqrt(std::numbers::pi) * std::erfc(std::sqrt(x))).epsilon(1e-14));
  CHECK(upper_gamma_half_integer(1.0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-14));
  CHECK(upper_gamma_half_integer(0.0, x) == doctest::Approx(oracle::e1_std(x)).epsilon(1e-13));
  // Gamma(-1/2, x) = 2 e^{-x}/sqrt(x) - 2 sqrt(pi) erfc(sqrt(x))
  CHECK(upper_gamma_half_integer(-0.5, x) ==
        doctest::Approx(2 * std::exp(-x) / std::sqrt(x) -
                        2 * std::sqrt(std::numbers::pi) * std::erfc(std::sqrt(x)))
            .epsilon(1e-12));
  // Gamma(-1, x) = e^{-x}/x - E1(x)
  CHECK(upper_gamma_half_integer(-1.0, x) ==
        doctest::Approx(std::exp(-x) / x - oracle::e1_std(x)).epsilon(1e-12));
  CHECK_THROWS(upper_gamma_half_integer(0.25, x));
}

TEST_CASE("Hermite polynomials follow the explicit forms") {
  const double x = 0.7;
  CHECK(hermite_he(0, x) == 1.0);
  CHECK(hermite_he(1, x) == doctest::Approx(x));
  CHECK(hermite_he(3, x) == doctest::Approx(x * x * x - 3 * x));
  CHECK(hermite_he(4, x) == doctest::Approx(std::pow(x, 4) - 6 * x * x + 3));
  CHECK(hermite_he(5, x) == doctest::Approx(std::pow(x, 5) - 10 * std::pow(x, 3) + 15 * x));
  for (int n = 0; n <= 12; ++n) CHECK(hermite_he_at_zero(n) == doctest::Approx(hermite_he(n, 0.0)));
  CHECK(hermite_he_at_zero(4) == 3.0);
  CHECK(hermite_he_at_zero(6) == -15.0);
  CHECK(hermite_he_at_zero(7) == 0.0);
}
