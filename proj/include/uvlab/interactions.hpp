#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace uvlab {

/// A bounded measurable interaction function V together with its declared
/// boundary data. Limits are declared by the constructor, never inferred.
struct BoundedInteraction {
  std::string name;
  std::function<double(double)> eval;
  double sup_norm = 0.0;
  std::optional<double> v_plus0;     // lim_{w -> 0+}
  std::optional<double> v_minus0;    // lim_{w -> 0-}
  std::optional<double> v_plusinf;   // lim_{w -> +inf}
  std::optional<double> v_minusinf;  // lim_{w -> -inf}
  /// Jump locations in the argument of V.
  std::vector<double> discontinuities;
  /// Centres of smooth transitions and their width; used to seed quadrature breakpoints.
  std::vector<double> features;
  double feature_scale = 1.0;

  double operator()(double w) const { return eval(w); }
  bool has_zero_limits() const { return v_plus0 && v_minus0; }
  bool has_infinity_limits() const { return v_plusinf && v_minusinf; }
};

/// Names accepted by catalog_interaction.
const std::vector<std::string>& catalog_names();

/// Builds a catalog entry. Recognized shape parameters:
///   step_at: "w0" (jump location, default 0)
///   erf_scaled: "scale" (V(w) = erf(scale * w), default 1/sqrt(2))
///   gauss_bump: "width" (V(w) = exp(-w^2 / (2 width^2)), default 1)
/// Unknown names raise PreconditionError listing the catalog.
BoundedInteraction catalog_interaction(const std::string& name,
                                       const std::map<std::string, double>& shape = {});

/// The constant function V = c, with every limit equal to c.
BoundedInteraction constant_interaction(double c);

/// theta(w) = (sgn(w) + 1) / 2, with theta(0) = 1/2.
double heaviside(double w);
double sign(double w);

struct ZeroAsymptotics {
  double mean;  ///< (V_+ + V_-) / 2
  double jump;  ///< (V_+ - V_-) / 2
};

struct InfinityAsymptotics {
  double mean;  ///< (V^+ + V^-) / 2
  double jump;  ///< (V^+ - V^-) / 2
};

struct Asymptotics {
  double mean0;
  double jump0;
  double meaninf;
  double jumpinf;
};

/// Throws PreconditionError naming assumption (A1) when limits at 0 are absent.
ZeroAsymptotics zero_asymptotics(const BoundedInteraction& v);
/// Throws PreconditionError naming assumption (A2) when limits at +-inf are absent.
InfinityAsymptotics infinity_asymptotics(const BoundedInteraction& v);
/// Requires both (A1) and (A2).
Asymptotics asymptotics(const BoundedInteraction& v);

/// The cutoff-dependent family V_Lambda(w) = V(z w) with z = C_Lambda(0)^kappa.
struct ScaledInteraction {
  BoundedInteraction base;
  double kappa = 0.0;

  double z(double c0) const;
  /// V(z w) as a stand-alone interaction; sup norm and limits carry over.
  BoundedInteraction at(double c0) const;
};

}  // namespace uvlab
