#include "uvlab/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "uvlab/errors.hpp"
#include "uvlab/quadrature.hpp"
#include "uvlab/special.hpp"

namespace uvlab {

double ModelParams::volume() const { return std::pow(L, d); }

void ModelParams::validate() const {
  std::ostringstream msg;
  if (d < 2) msg << "dimension d must be >= 2 (got " << d << "); ";
  if (!(m > 0.0) || !std::isfinite(m)) msg << "mass m must be positive; ";
  if (!(L > 0.0) || !std::isfinite(L)) msg << "box side L must be positive; ";
  if (!std::isfinite(lambda)) msg << "coupling lambda must be finite; ";
  if (!std::isfinite(Lambda) || !(std::log(Lambda) >= 1.0)) {
    msg << "cutoff must satisfy log(Lambda) >= 1 (got Lambda = " << Lambda << "); ";
  }
  if (!std::isfinite(eta)) msg << "eta must be finite; ";
  if (kappa && !std::isfinite(*kappa)) msg << "kappa must be finite; ";
  if (!msg.str().empty()) throw PreconditionError("invalid ModelParams: " + msg.str());
}

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_refinements < 1) {
    throw PreconditionError("invalid QuadratureSpec: tolerances must be > 0 and max_refinements >= 1");
  }
}

namespace {

// exp(-800) underflows every contribution we care about.
constexpr double kExpCut = 800.0;

double prefactor(int d) {
  return 1.0 / (std::pow(2.0, d) * std::pow(std::numbers::pi, 0.5 * d));
}

// Proper-time integral from alpha_lo to infinity, in the variable t = log(alpha).
double proper_time_integral(double r, double alpha_lo, const ModelParams& p,
                            const QuadratureSpec& spec) {
  const double m2 = p.m * p.m;
  const double r2 = r * r;
  const double expo = 1.0 - 0.5 * p.d;
  auto integrand = [&](double t) {
    const double alpha = std::exp(t);
    return std::exp(expo * t - alpha * m2 - r2 / (4.0 * alpha));
  };
  const double alpha_hi = std::max(kExpCut / m2, 2.0 * alpha_lo);
  const double t_lo = std::log(alpha_lo);
  const double t_hi = std::log(alpha_hi);

  std::vector<double> cuts;
  for (double a : {r2 / (2.0 * p.d), r2 / 4.0, 1.0 / m2}) {
    if (a > 0.0) cuts.push_back(std::log(a));
  }
  // Stationary point of the log-integrand: -(d/2 - 1)/a - m^2 + r^2/(4a^2) = 0.
  const double b = 0.5 * p.d - 1.0;
  const double disc = b * b + m2 * r2;
  if (r > 0.0) cuts.push_back(std::log((-b + std::sqrt(disc)) / (2.0 * m2)));
  return prefactor(p.d) * quad::integral(integrand, t_lo, t_hi, cuts, spec);
}

}  // namespace

double covariance_radial(double r, const ModelParams& params, const QuadratureSpec& spec) {
  params.validate();
  if (!(r >= 0.0) || !std::isfinite(r)) throw PreconditionError("covariance_radial: r must be >= 0");
  return proper_time_integral(r, 1.0 / (params.Lambda * params.Lambda), params, spec);
}

double covariance_at(std::span<const double> x, const ModelParams& params,
                     const QuadratureSpec& spec) {
  if (static_cast<int>(x.size()) != params.d) {
    throw PreconditionError("covariance_at: point dimension does not match d");
  }
  double r2 = 0.0;
  for (double xi : x) r2 += xi * xi;
  return covariance_radial(std::sqrt(r2), params, spec);
}

double covariance_uv_limit(std::span<const double> x, const ModelParams& params,
                           const QuadratureSpec& spec) {
  params.validate();
  if (static_cast<int>(x.size()) != params.d) {
    throw PreconditionError("covariance_uv_limit: point dimension does not match d");
  }
  double r2 = 0.0;
  for (double xi : x) r2 += xi * xi;
  if (r2 == 0.0) {
    throw PreconditionError("covariance_uv_limit: C(0) diverges for d >= 2; the UV-limit covariance is undefined at x = 0");
  }
  // Below alpha = r^2 / (4 * 800) the factor exp(-r^2/(4 alpha)) is negligible.
  return proper_time_integral(std::sqrt(r2), r2 / (4.0 * kExpCut), params, spec);
}

double covariance_zero(const ModelParams& params) {
  params.validate();
  const double m2 = params.m * params.m;
  const double x = m2 / (params.Lambda * params.Lambda);
  const double s = 1.0 - 0.5 * params.d;
  return prefactor(params.d) * std::pow(params.m, params.d - 2) *
         special::upper_gamma_half_integer(s, x);
}

RenormScales renorm_scales_from_c0(double c0, double eta) {
  if (!(c0 > 0.0)) throw PreconditionError("renorm_scales_from_c0: C(0) must be positive");
  RenormScales s{};
  s.c0 = c0;
  s.Z = std::pow(c0, eta);
  s.t = std::sqrt(c0);
  s.s_plus = std::pow(s.t, eta + 1.0);
  s.s_minus = std::pow(s.t, eta - 1.0);
  return s;
}

RenormScales renorm_factor(const ModelParams& params) {
  return renorm_scales_from_c0(covariance_zero(params), params.eta);
}

}  // namespace uvlab
