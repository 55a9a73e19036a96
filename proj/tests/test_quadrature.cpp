#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "uvlab/errors.hpp"
#include "uvlab/quadrature.hpp"

using namespace uvlab;

TEST_CASE("smooth integrands reach the relative tolerance") {
  QuadratureSpec spec;
  const auto r = quad::integrate([](double x) { return std::exp(-x * x); }, -10, 10, {}, spec);
  CHECK(r.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
  CHECK(r.error <= 1e-10);
}

TEST_CASE("a jump placed at a breakpoint integrates exactly") {
  QuadratureSpec spec;
  const std::vector<double> bp{0.3};
  auto step = [](double x) { return x < 0.3 ? -1.0 : 2.0; };
  CHECK(quad::integral(step, -1, 1, bp, spec) == doctest::Approx(-1.3 + 1.4).epsilon(1e-14));
  // Without the breakpoint the driver still converges by bisection, one level per split.
  spec.max_refinements = 60;
  CHECK(quad::integral(step, -1, 1, {}, spec) == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("integrals near zero terminate through the absolute tolerance") {
  QuadratureSpec spec;
  const auto r = quad::integrate([](double x) { return std::sin(x); }, -3, 3, {}, spec);
  CHECK(std::abs(r.value) < 1e-13);
}

TEST_CASE("refinement exhaustion raises QuadratureError with a partial result") {
  QuadratureSpec spec;
  spec.max_refinements = 2;
  spec.rel_tol = 1e-15;
  spec.abs_tol = 1e-300;
  auto f = [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.123456)); };
  try {
    quad::integrate(f, 0, 1, {}, spec);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(std::isfinite(e.partial()));
    CHECK(e.error_estimate() > 0);
  }
}

TEST_CASE("invalid specs are rejected") {
  QuadratureSpec spec;
  spec.rel_tol = 0;
  CHECK_THROWS_AS(spec.validate(), PreconditionError);
  spec = {};
  spec.max_refinements = 0;
  CHECK_THROWS_AS(spec.validate(), PreconditionError);
}
