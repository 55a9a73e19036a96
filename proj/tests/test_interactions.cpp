#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "uvlab/errors.hpp"
#include "uvlab/interactions.hpp"

using namespace uvlab;

TEST_CASE("catalog entries evaluate and carry their limits") {
  const auto sgn = catalog_interaction("sgn");
  CHECK(sgn(2.0) == 1.0);
  CHECK(sgn(-0.1) == -1.0);
  CHECK(sgn(0.0) == 0.0);
  const auto th = catalog_interaction("heaviside");
  CHECK(th(0.0) == 0.5);
  CHECK(th(1e-300) == 1.0);
  const auto at = catalog_interaction("arctan");
  CHECK(at.sup_norm == doctest::Approx(std::numbers::pi / 2));
  CHECK(*at.v_plusinf == doctest::Approx(std::numbers::pi / 2));
  const auto bump = catalog_interaction("gauss_bump", {{"width", 2.0}});
  CHECK(bump(2.0) == doctest::Approx(std::exp(-0.5)));
  const auto step = catalog_interaction("step_at", {{"w0", 0.5}});
  CHECK(step(0.4) == 0.0);
  CHECK(step(0.6) == 1.0);
  CHECK(*step.v_plus0 == 0.0);
  CHECK(*step.v_minus0 == 0.0);
  const auto erfs = catalog_interaction("erf_scaled");
  CHECK(erfs(1.0) == doctest::Approx(std::erf(1.0 / std::sqrt(2.0))));
  for (const auto& name : catalog_names()) {
    const auto v = catalog_interaction(name);
    for (double w : {-50.0, -1.0, 0.0, 0.3, 7.0}) CHECK(std::abs(v(w)) <= v.sup_norm);
  }
}

TEST_CASE("unknown names list the catalog") {
  try {
    catalog_interaction("cosh");
    FAIL("expected PreconditionError");
  } catch (const PreconditionError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("cosh") != std::string::npos);
    for (const auto& name : catalog_names()) CHECK(msg.find(name) != std::string::npos);
  }
}

TEST_CASE("asymptotic means and jumps") {
  const auto a = asymptotics(catalog_interaction("heaviside"));
  CHECK(a.mean0 == 0.5);
  CHECK(a.jump0 == 0.5);
  CHECK(a.meaninf == 0.5);
  CHECK(a.jumpinf == 0.5);
  const auto t = asymptotics(catalog_interaction("tanh"));
  CHECK(t.jump0 == 0.0);
  CHECK(t.jumpinf == 1.0);
  const auto c = asymptotics(constant_interaction(-2.5));
  CHECK(c.mean0 == -2.5);
  CHECK(c.jumpinf == 0.0);
}

TEST_CASE("missing limits name the violated assumption") {
  BoundedInteraction v = catalog_interaction("sgn");
  v.v_plus0.reset();
  try {
    zero_asymptotics(v);
    FAIL("expected PreconditionError");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("(A1)") != std::string::npos);
  }
  v = catalog_interaction("sgn");
  v.v_minusinf.reset();
  try {
    infinity_asymptotics(v);
    FAIL("expected PreconditionError");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("(A2)") != std::string::npos);
  }
}

TEST_CASE("scaled interactions rescale the argument and keep their limits") {
  ScaledInteraction s{catalog_interaction("step_at", {{"w0", 1.0}}), -1.0};
  const double c0 = 4.0;
  CHECK(s.z(c0) == 0.25);
  const auto v = s.at(c0);
  CHECK(v(3.9) == 0.0);
  CHECK(v(4.1) == 1.0);
  CHECK(v.discontinuities.front() == 4.0);
  CHECK(*v.v_plusinf == 1.0);
  CHECK_THROWS_AS(s.z(0.0), PreconditionError);
}
