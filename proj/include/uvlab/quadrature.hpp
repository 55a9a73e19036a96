#pragma once

#include <functional>
#include <span>

#include "uvlab/params.hpp"

namespace uvlab::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

/// Globally adaptive Gauss-Kronrod (21-point) integration of f over [a, b].
///
/// Interior `breakpoints` seed the initial panel partition; points outside
/// (a, b) are ignored. Panels are bisected worst-first until the summed error
/// estimate drops below max(abs_tol, rel_tol * |I|) (with a round-off floor
/// relative to the L1 norm). A panel bisected `max_refinements` times that is
/// still the worst contributor raises QuadratureError carrying the partial sum.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breakpoints, const QuadratureSpec& spec);

inline double integral(const std::function<double(double)>& f, double a, double b,
                       std::span<const double> breakpoints, const QuadratureSpec& spec) {
  return integrate(f, a, b, breakpoints, spec).value;
}

}  // namespace uvlab::quad
