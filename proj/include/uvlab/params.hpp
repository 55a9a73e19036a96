#pragma once

#include <optional>

namespace uvlab {

/// Physical and regularization parameters of one model instance.
///
/// `Lambda` is the momentum cutoff of the Gaussian regulator
/// exp(-(p^2 + m^2)/Lambda^2); it must satisfy log(Lambda) >= 1.
struct ModelParams {
  int d = 2;
  double m = 1.0;
  double L = 8.0;
  double lambda = 1.0;
  double Lambda = 10.0;
  double eta = 1.0;
  std::optional<double> kappa;

  double volume() const;
  /// Throws PreconditionError when any invariant is violated.
  void validate() const;
};

struct QuadratureSpec {
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  int max_refinements = 30;

  void validate() const;
};

}  // namespace uvlab
