#include "uvlab/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "uvlab/errors.hpp"
#include "uvlab/propagator.hpp"

namespace uvlab {

EtaRegime classify_eta(double eta) {
  if (!std::isfinite(eta)) throw PreconditionError("classify_eta: eta must be finite");
  if (eta < -1.0) return EtaRegime::A;
  if (eta == -1.0) return EtaRegime::B;
  if (eta < 1.0) return EtaRegime::C;
  if (eta == 1.0) return EtaRegime::D;
  return EtaRegime::E;
}

KappaRegime classify_kappa(double kappa) {
  if (!std::isfinite(kappa)) throw PreconditionError("classify_kappa: kappa must be finite");
  if (kappa < -1.0) return KappaRegime::D1;
  if (kappa == -1.0) return KappaRegime::D2;
  return KappaRegime::D3;
}

std::string to_string(EtaRegime r) {
  switch (r) {
    case EtaRegime::A: return "A";
    case EtaRegime::B: return "B";
    case EtaRegime::C: return "C";
    case EtaRegime::D: return "D";
    case EtaRegime::E: return "E";
  }
  return "?";
}

std::string to_string(KappaRegime r) {
  switch (r) {
    case KappaRegime::D1: return "d.1";
    case KappaRegime::D2: return "d.2";
    case KappaRegime::D3: return "d.3";
  }
  return "?";
}

std::string to_string(TwoPointKind k) {
  switch (k) {
    case TwoPointKind::AllZero: return "AllZero";
    case TwoPointKind::FreeField: return "FreeField";
    case TwoPointKind::Divergent: return "Divergent";
  }
  return "?";
}

namespace {

void check_field(const SourceField& cj, const ModelParams& params) {
  params.validate();
  if (cj.lattice.d != params.d || cj.lattice.L != params.L) {
    throw PreconditionError("limit functional: source lattice does not match ModelParams (d, L)");
  }
}

// a^d sum_x [g(a(x)) - g(0)] with g(mu) = E[V(mu + Z)]; exactly 0 when a == 0.
double shifted_gaussian_excess(const BoundedInteraction& v, const SourceField& cj,
                               const QuadratureSpec& spec) {
  const double g0 = one_point_density(v, 0.0, 1.0, spec);
  std::unordered_map<double, double> cache;
  double sum = 0.0;
  for (double a : cj.values) {
    if (a == 0.0) continue;
    auto it = cache.find(a);
    if (it == cache.end()) it = cache.emplace(a, one_point_density(v, a, 1.0, spec) - g0).first;
    sum += it->second;
  }
  return cj.lattice.cell_volume() * sum;
}

// int_B dx (2 pi)^{-1/2} int dw sgn(w) e^{-(w - a(x))^2/2}
double sign_smeared(const SourceField& cj, const QuadratureSpec& spec) {
  return shifted_gaussian_excess(catalog_interaction("sgn"), cj, spec);
}

LimitResult make(double constant, double j, std::string tag) {
  return LimitResult{constant + j, constant, j, std::move(tag)};
}

}  // namespace

LimitResult limit_functional(EtaRegime regime, const BoundedInteraction& v,
                             const SourceField& cj_field, const ModelParams& params,
                             const QuadratureSpec& spec) {
  check_field(cj_field, params);
  const double lam = params.lambda;
  const double vol = params.volume();
  const auto tag = to_string(regime);
  switch (regime) {
    case EtaRegime::A: {
      const auto z = zero_asymptotics(v);
      return make(-lam * (vol * z.mean), 0.0, tag);
    }
    case EtaRegime::B:
      return make(-lam * (vol * one_point_density(v, 0.0, 1.0, spec)), 0.0, tag);
    case EtaRegime::C: {
      const auto inf = infinity_asymptotics(v);
      return make(-lam * (vol * inf.mean), 0.0, tag);
    }
    case EtaRegime::D: {
      const auto inf = infinity_asymptotics(v);
      return make(-lam * (vol * inf.mean), -lam * (inf.jump * sign_smeared(cj_field, spec)), tag);
    }
    case EtaRegime::E: {
      const auto inf = infinity_asymptotics(v);
      if (!cj_field.band_limited) {
        throw PreconditionError(
            "regime E (eta > 1) requires J compactly supported in Fourier space; supply a "
            "band-limited source");
      }
      double signs = 0.0;
      if (!cj_field.is_zero_source()) {
        double scale = 0.0;
        for (double a : cj_field.values) scale = std::max(scale, std::abs(a));
        // Values at round-off level of the field are zeros of a(x): sgn(0) = 0.
        const double zero = 1e-12 * scale;
        for (double a : cj_field.values) signs += std::abs(a) <= zero ? 0.0 : sign(a);
        signs *= cj_field.lattice.cell_volume();
      }
      return make(-lam * (vol * inf.mean), -lam * (inf.jump * signs), tag);
    }
  }
  throw PreconditionError("limit_functional: unknown regime");
}

LimitResult limit_functional_scaled(KappaRegime regime, const BoundedInteraction& v,
                                    const SourceField& cj_field, const ModelParams& params,
                                    const QuadratureSpec& spec) {
  check_field(cj_field, params);
  const double lam = params.lambda;
  const double vol = params.volume();
  const auto tag = to_string(regime);
  switch (regime) {
    case KappaRegime::D1: {
      const auto z = zero_asymptotics(v);
      return make(-lam * (vol * z.mean), -lam * (z.jump * sign_smeared(cj_field, spec)), tag);
    }
    case KappaRegime::D2: {
      const double constant = vol * one_point_density(v, 0.0, 1.0, spec);
      return make(-lam * constant, -lam * shifted_gaussian_excess(v, cj_field, spec), tag);
    }
    case KappaRegime::D3: {
      const auto inf = infinity_asymptotics(v);
      return make(-lam * (vol * inf.mean), -lam * (inf.jump * sign_smeared(cj_field, spec)), tag);
    }
  }
  throw PreconditionError("limit_functional_scaled: unknown regime");
}

double schwinger_coefficient(int n, const BoundedInteraction& v, SchwingerFamily family,
                             const QuadratureSpec& spec) {
  if (n < 1) throw PreconditionError("schwinger_connected: n must be >= 1");
  if (n == 2) {
    throw PreconditionError(
        "schwinger_connected: n = 2 is not determined by the limiting functional; the two-point "
        "function is finite only for eta <= 0 and infinite at eta = 1 (see two_point_classify)");
  }
  if (family == SchwingerFamily::ErfLimit) {
    return infinity_asymptotics(v).jump * erf_derivative_coefficient(n);
  }
  return gaussian_hermite_moment(v, n, spec);
}

double schwinger_connected(int n, const std::vector<SourceField>& test_functions,
                           const BoundedInteraction& v, const ModelParams& params,
                           SchwingerFamily family, const QuadratureSpec& spec) {
  const double coef = schwinger_coefficient(n, v, family, spec);
  if (static_cast<int>(test_functions.size()) != n) {
    throw PreconditionError("schwinger_connected: need exactly n test functions");
  }
  params.validate();
  const auto& lat = test_functions.front().lattice;
  std::vector<SourceField> convolved;
  for (const auto& f : test_functions) {
    if (!(f.lattice == lat)) throw PreconditionError("schwinger_connected: test functions on different lattices");
    convolved.push_back(uv_limit_convolve(f, params.m));
  }
  double sum = 0.0;
  for (std::size_t s = 0; s < lat.sites(); ++s) {
    double prod = 1.0;
    for (const auto& c : convolved) prod *= c.values[s];
    sum += prod;
  }
  return -params.lambda * (coef * (lat.cell_volume() * sum));
}

TwoPointVerdict two_point_classify(double eta, const ModelParams& params, const Point& x1,
                                   const Point& x2, const std::vector<double>& Lambda_grid,
                                   const QuadratureSpec& spec) {
  if (!std::isfinite(eta)) throw PreconditionError("two_point_classify: eta must be finite");
  Point diff(x1.size());
  if (x1.size() != x2.size()) throw PreconditionError("two_point_classify: point rank mismatch");
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = x1[i] - x2[i];

  TwoPointVerdict out{TwoPointKind::AllZero, 0.0, {}};
  if (eta < 0.0) return out;
  if (eta == 0.0) {
    out.kind = TwoPointKind::FreeField;
    out.two_point = covariance_uv_limit(diff, params, spec);
    return out;
  }
  out.kind = TwoPointKind::Divergent;
  std::vector<double> grid = Lambda_grid;
  if (grid.empty()) grid = {std::exp(1.0), std::exp(2.0), std::exp(4.0)};
  for (double Lam : grid) {
    ModelParams p = params;
    p.Lambda = Lam;
    p.eta = eta;
    const auto scales = renorm_factor(p);
    out.diagnostic.emplace_back(Lam, scales.Z * covariance_at(diff, p, spec));
  }
  return out;
}

}  // namespace uvlab
