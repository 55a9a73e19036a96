#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "uvlab/interactions.hpp"
#include "uvlab/params.hpp"

namespace uvlab {

class RealFft;

/// Periodic N^d lattice of side L. Sites sit at x = n a, n in [0, N)^d, and
/// are stored row-major. Momenta are p = 2 pi k / L with k in the centred
/// cube [-N/2, N/2)^d.
struct TorusLattice {
  int d = 2;
  int N = 32;
  double L = 8.0;

  double spacing() const { return L / N; }
  double cell_volume() const;
  std::size_t sites() const;
  /// Size of the half-complex (r2c) layout: N^{d-1} (N/2 + 1).
  std::size_t half_size() const;
  /// Largest cutoff the lattice admits: pi / (2 a).
  double max_cutoff() const;

  std::vector<int> coords(std::size_t site) const;
  /// Periodic wrap is applied to every coordinate.
  std::size_t index(std::span<const int> coords) const;
  /// Centred integer mode for a grid index in [0, N).
  int centred(int k) const { return k < N / 2 ? k : k - N; }
  /// |p|^2 for the half-layout entry `h`.
  double momentum_sq_half(std::size_t h) const;
  /// Minimal-image distance between two sites.
  double torus_distance(std::size_t a, std::size_t b) const;

  void validate() const;
  bool operator==(const TorusLattice&) const = default;
};

/// Smallest even N >= 4 with Lambda <= pi / (2 a).
TorusLattice lattice_for_cutoff(int d, double L, double Lambda);

/// Throws PreconditionError when Lambda > pi / (2 a).
void check_resolution(const TorusLattice& lat, double Lambda);

/// Weights Z exp(-(p^2 + m^2)/Lambda^2) / (p^2 + m^2) on the lattice momenta.
class SpectralDensity {
 public:
  SpectralDensity(const TorusLattice& lat, double m, double Lambda, double Z);
  static SpectralDensity from_params(const TorusLattice& lat, const ModelParams& params, double Z);

  const TorusLattice& lattice() const { return lattice_; }
  double m() const { return m_; }
  double cutoff() const { return Lambda_; }
  double Z() const { return Z_; }
  /// Weight in r2c layout order.
  std::span<const double> half_weights() const { return weights_; }
  /// Weight as a function of |p|^2.
  double weight(double p2) const;

  /// Lattice covariance G(x) = L^{-d} sum_k S(p_k) e^{i p_k x} at every site.
  std::vector<double> covariance_kernel() const;
  /// G(0).
  double covariance_zero() const;
  /// Same density with Z replaced.
  SpectralDensity with_Z(double Z) const;

 private:
  TorusLattice lattice_;
  double m_;
  double Lambda_;
  double Z_;
  std::vector<double> weights_;
};

struct FieldSample {
  TorusLattice lattice;
  std::vector<double> values;
  std::uint64_t seed = 0;
};

/// One Fourier mode of a band-limited source: amplitude cos(p_k . x + phase).
struct SourceMode {
  std::vector<int> k;
  double amplitude = 1.0;
  double phase = 0.0;
};

struct SourceField {
  TorusLattice lattice;
  std::vector<double> values;
  /// True when the momentum support is the explicit (proper) mode set below.
  bool band_limited = false;
  std::vector<SourceMode> modes;

  bool is_zero_source() const;
};

/// J = 0 on the lattice (declared band-limited with empty support).
SourceField zero_source(const TorusLattice& lat);

/// J(x) = sum_i A_i cos(p_{k_i} . x + theta_i). Each |k_i| component must be
/// below N/2 so the mode and its mirror are distinct lattice momenta.
SourceField band_limited_source(const TorusLattice& lat, const std::vector<SourceMode>& modes);

/// Arbitrary site values; not band-limited.
SourceField source_from_values(const TorusLattice& lat, std::vector<double> values);

/// Spectral sampler realizing the Gaussian measure with covariance G on the lattice:
/// white noise -> FFT -> multiply by sqrt(S/a^d) -> inverse FFT / N^d.
class FieldSampler {
 public:
  explicit FieldSampler(const SpectralDensity& spec);

  /// Scratch buffers for one thread.
  struct Workspace {
    std::vector<double> noise;
    std::vector<std::complex<double>> modes;
  };
  Workspace make_workspace() const;

  void sample_into(std::uint64_t seed, Workspace& ws, std::span<double> out) const;
  FieldSample sample(std::uint64_t seed) const;
  const TorusLattice& lattice() const { return lattice_; }

 private:
  TorusLattice lattice_;
  std::vector<double> amplitude_;
  std::shared_ptr<const RealFft> fft_;
};

FieldSample sample_field(const TorusLattice& lat, const SpectralDensity& spec, std::uint64_t seed);

/// phi(J) = a^d sum_x phi(x) J(x).
double pairing(const FieldSample& phi, const SourceField& j);
/// a^d sum_x f(x) g(x) for two sources.
double inner(const SourceField& f, const SourceField& g);
/// a^d sum_x V(phi(x)).
double interaction_integral(const FieldSample& phi, const BoundedInteraction& v);
double interaction_integral(std::span<const double> phi, const TorusLattice& lat,
                            const BoundedInteraction& v);

/// x -> (G * J)(x) = a^d sum_y G(x - y) J(y), computed spectrally.
SourceField covariance_convolve(const SourceField& j, const SpectralDensity& spec);

/// <delta_x, C J> with the Lambda -> infinity covariance approximated on the
/// lattice at its largest admissible cutoff and Z = 1.
SourceField uv_limit_convolve(const SourceField& j, double m);

/// Flat little-endian layout: int64 d, int64 N, float64 L, then N^d float64 site values.
void write_field(const std::filesystem::path& path, const TorusLattice& lat,
                 std::span<const double> values);
struct StoredField {
  TorusLattice lattice;
  std::vector<double> values;
};
StoredField read_field(const std::filesystem::path& path);

}  // namespace uvlab
