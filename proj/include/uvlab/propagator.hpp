#pragma once

#include <span>

#include "uvlab/params.hpp"

namespace uvlab {

/// C_Lambda(x): the regularized free covariance, evaluated through the
/// proper-time representation
///   (2^d pi^{d/2})^{-1} int_{1/Lambda^2}^inf a^{-d/2} e^{-a m^2} e^{-|x|^2/(4a)} da.
/// `x` must have params.d components.
double covariance_at(std::span<const double> x, const ModelParams& params,
                     const QuadratureSpec& spec = {});

/// Same integral as a function of |x|.
double covariance_radial(double r, const ModelParams& params, const QuadratureSpec& spec = {});

/// C(x) = lim C_Lambda(x), i.e. the proper-time integral from 0. Rejects x = 0,
/// where it diverges for every d >= 2.
double covariance_uv_limit(std::span<const double> x, const ModelParams& params,
                           const QuadratureSpec& spec = {});

/// C_Lambda(0) = m^{d-2} Gamma(1 - d/2, m^2/Lambda^2) / (2^d pi^{d/2}).
double covariance_zero(const ModelParams& params);

/// Z_Lambda = C_Lambda(0)^eta and the derived scales.
struct RenormScales {
  double c0;       ///< C_Lambda(0)
  double Z;        ///< C_Lambda(0)^eta
  double t;        ///< C_Lambda(0)^{1/2}
  double s_plus;   ///< t^{eta+1} = (Z C0)^{1/2}
  double s_minus;  ///< t^{eta-1} = (Z / C0)^{1/2}
};

RenormScales renorm_factor(const ModelParams& params);

/// Scales for an explicit C_Lambda(0), e.g. one measured on a lattice.
RenormScales renorm_scales_from_c0(double c0, double eta);

}  // namespace uvlab
