#include "uvlab/interactions.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "uvlab/errors.hpp"

namespace uvlab {

double sign(double w) { return w > 0.0 ? 1.0 : (w < 0.0 ? -1.0 : 0.0); }

double heaviside(double w) { return 0.5 * (sign(w) + 1.0); }

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"sgn",        "heaviside", "arctan",    "tanh",
                                              "gauss_bump", "step_at",   "erf_scaled"};
  return names;
}

namespace {

double shape_value(const std::map<std::string, double>& shape, const std::string& key,
                   double fallback) {
  auto it = shape.find(key);
  return it == shape.end() ? fallback : it->second;
}

}  // namespace

BoundedInteraction catalog_interaction(const std::string& name,
                                       const std::map<std::string, double>& shape) {
  BoundedInteraction v;
  v.name = name;
  if (name == "sgn") {
    v.eval = sign;
    v.sup_norm = 1.0;
    v.v_plus0 = 1.0;
    v.v_minus0 = -1.0;
    v.v_plusinf = 1.0;
    v.v_minusinf = -1.0;
    v.discontinuities = {0.0};
  } else if (name == "heaviside") {
    v.eval = heaviside;
    v.sup_norm = 1.0;
    v.v_plus0 = 1.0;
    v.v_minus0 = 0.0;
    v.v_plusinf = 1.0;
    v.v_minusinf = 0.0;
    v.discontinuities = {0.0};
  } else if (name == "arctan") {
    v.eval = [](double w) { return std::atan(w); };
    v.sup_norm = 0.5 * std::numbers::pi;
    v.v_plus0 = 0.0;
    v.v_minus0 = 0.0;
    v.v_plusinf = 0.5 * std::numbers::pi;
    v.v_minusinf = -0.5 * std::numbers::pi;
    v.features = {0.0};
  } else if (name == "tanh") {
    v.eval = [](double w) { return std::tanh(w); };
    v.sup_norm = 1.0;
    v.v_plus0 = 0.0;
    v.v_minus0 = 0.0;
    v.v_plusinf = 1.0;
    v.v_minusinf = -1.0;
    v.features = {0.0};
  } else if (name == "gauss_bump") {
    const double width = shape_value(shape, "width", 1.0);
    if (!(width > 0.0)) throw PreconditionError("gauss_bump: width must be positive");
    v.eval = [width](double w) { return std::exp(-0.5 * w * w / (width * width)); };
    v.sup_norm = 1.0;
    v.v_plus0 = 1.0;
    v.v_minus0 = 1.0;
    v.v_plusinf = 0.0;
    v.v_minusinf = 0.0;
    v.features = {0.0};
    v.feature_scale = width;
  } else if (name == "step_at") {
    const double w0 = shape_value(shape, "w0", 0.0);
    v.eval = [w0](double w) { return heaviside(w - w0); };
    v.sup_norm = 1.0;
    v.v_plus0 = w0 > 0.0 ? 0.0 : 1.0;
    v.v_minus0 = w0 < 0.0 ? 1.0 : 0.0;
    v.v_plusinf = 1.0;
    v.v_minusinf = 0.0;
    v.discontinuities = {w0};
  } else if (name == "erf_scaled") {
    const double scale = shape_value(shape, "scale", 1.0 / std::numbers::sqrt2);
    if (!(scale > 0.0)) throw PreconditionError("erf_scaled: scale must be positive");
    v.eval = [scale](double w) { return std::erf(scale * w); };
    v.sup_norm = 1.0;
    v.v_plus0 = 0.0;
    v.v_minus0 = 0.0;
    v.v_plusinf = 1.0;
    v.v_minusinf = -1.0;
    v.features = {0.0};
    v.feature_scale = 1.0 / scale;
  } else {
    std::ostringstream msg;
    msg << "unknown interaction '" << name << "'; catalog:";
    for (const auto& n : catalog_names()) msg << ' ' << n;
    throw PreconditionError(msg.str());
  }
  return v;
}

BoundedInteraction constant_interaction(double c) {
  BoundedInteraction v;
  v.name = "constant";
  v.eval = [c](double) { return c; };
  v.sup_norm = std::abs(c);
  v.v_plus0 = v.v_minus0 = v.v_plusinf = v.v_minusinf = c;
  return v;
}

ZeroAsymptotics zero_asymptotics(const BoundedInteraction& v) {
  if (!v.has_zero_limits()) {
    throw PreconditionError("interaction '" + v.name +
                            "' violates assumption (A1): one-sided limits V_+- at w -> 0 are not declared");
  }
  return {0.5 * (*v.v_plus0 + *v.v_minus0), 0.5 * (*v.v_plus0 - *v.v_minus0)};
}

InfinityAsymptotics infinity_asymptotics(const BoundedInteraction& v) {
  if (!v.has_infinity_limits()) {
    throw PreconditionError("interaction '" + v.name +
                            "' violates assumption (A2): limits V^+- at w -> +-inf are not declared");
  }
  return {0.5 * (*v.v_plusinf + *v.v_minusinf), 0.5 * (*v.v_plusinf - *v.v_minusinf)};
}

Asymptotics asymptotics(const BoundedInteraction& v) {
  const auto zero = zero_asymptotics(v);
  const auto inf = infinity_asymptotics(v);
  return {zero.mean, zero.jump, inf.mean, inf.jump};
}

double ScaledInteraction::z(double c0) const {
  if (!(c0 > 0.0)) throw PreconditionError("ScaledInteraction: C(0) must be positive");
  return std::pow(c0, kappa);
}

BoundedInteraction ScaledInteraction::at(double c0) const {
  const double zl = z(c0);
  BoundedInteraction v = base;
  v.name = base.name + "_scaled";
  v.eval = [f = base.eval, zl](double w) { return f(zl * w); };
  for (double& x : v.discontinuities) x /= zl;
  for (double& x : v.features) x /= zl;
  v.feature_scale = base.feature_scale / zl;
  return v;
}

}  // namespace uvlab
