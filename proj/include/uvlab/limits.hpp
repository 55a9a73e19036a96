#pragma once

#include <string>
#include <utility>
#include <vector>

#include "uvlab/gaussian_formulas.hpp"
#include "uvlab/interactions.hpp"
#include "uvlab/lattice.hpp"
#include "uvlab/params.hpp"

namespace uvlab {

/// Field-renormalization regimes Z = C(0)^eta:
/// A: eta < -1, B: eta = -1, C: -1 < eta < 1, D: eta = 1, E: eta > 1.
enum class EtaRegime { A, B, C, D, E };

/// Interaction-scaling regimes z = C(0)^kappa at eta = 1:
/// D1: kappa < -1, D2: kappa = -1, D3: kappa > -1.
enum class KappaRegime { D1, D2, D3 };

/// Exact comparison against the boundaries -1 and 1; no tolerance band.
EtaRegime classify_eta(double eta);
KappaRegime classify_kappa(double kappa);
std::string to_string(EtaRegime r);
std::string to_string(KappaRegime r);

struct LimitResult {
  double value = 0.0;
  double constant_part = 0.0;  ///< J-independent term
  double j_part = 0.0;         ///< J-dependent term; 0 where the limit has none
  std::string regime;
};

/// UV limit of the connected generating functional for Z = C(0)^eta.
/// `cj_field` holds a(x) = <delta_x, C J> (see uv_limit_convolve).
LimitResult limit_functional(EtaRegime regime, const BoundedInteraction& v,
                             const SourceField& cj_field, const ModelParams& params,
                             const QuadratureSpec& spec = {});

/// UV limit for the scaled interaction V(C(0)^kappa w) at Z = C(0).
LimitResult limit_functional_scaled(KappaRegime regime, const BoundedInteraction& v,
                                    const SourceField& cj_field, const ModelParams& params,
                                    const QuadratureSpec& spec = {});

enum class SchwingerFamily {
  ErfLimit,     ///< coefficient jumpinf * d^n erf(w/sqrt2) at 0
  Convolution,  ///< coefficient (2 pi)^{-1/2} int V He_n e^{-w^2/2}
};

/// Connected n-point function smeared with test functions f_1..f_n:
///   -lambda * coefficient * int_B dx prod_i (C f_i)(x).
/// n = 2 is rejected: the limiting functional carries no two-point information.
double schwinger_connected(int n, const std::vector<SourceField>& test_functions,
                           const BoundedInteraction& v, const ModelParams& params,
                           SchwingerFamily family, const QuadratureSpec& spec = {});

/// The family coefficient multiplying the smeared convolution product.
double schwinger_coefficient(int n, const BoundedInteraction& v, SchwingerFamily family,
                             const QuadratureSpec& spec = {});

enum class TwoPointKind { AllZero, FreeField, Divergent };

struct TwoPointVerdict {
  TwoPointKind kind;
  /// C(x1 - x2) for FreeField; 0 for AllZero; unused for Divergent.
  double two_point = 0.0;
  /// (Lambda, Z_Lambda C_Lambda(x1 - x2)) along the diagnostic grid.
  std::vector<std::pair<double, double>> diagnostic;
};

std::string to_string(TwoPointKind k);

/// Two-point classification: eta < 0 all zero, eta = 0 free field, eta > 0 divergent.
TwoPointVerdict two_point_classify(double eta, const ModelParams& params, const Point& x1,
                                   const Point& x2, const std::vector<double>& Lambda_grid = {},
                                   const QuadratureSpec& spec = {});

}  // namespace uvlab
