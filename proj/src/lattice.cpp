#include "uvlab/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "uvlab/errors.hpp"
#include "uvlab/fft.hpp"

namespace uvlab {

// ---------------------------------------------------------------------------
// TorusLattice

double TorusLattice::cell_volume() const { return std::pow(spacing(), d); }

std::size_t TorusLattice::sites() const {
  std::size_t n = 1;
  for (int i = 0; i < d; ++i) n *= static_cast<std::size_t>(N);
  return n;
}

std::size_t TorusLattice::half_size() const { return sites() / N * (N / 2 + 1); }

double TorusLattice::max_cutoff() const { return std::numbers::pi / (2.0 * spacing()); }

std::vector<int> TorusLattice::coords(std::size_t site) const {
  std::vector<int> c(d);
  for (int i = d - 1; i >= 0; --i) {
    c[i] = static_cast<int>(site % N);
    site /= N;
  }
  return c;
}

std::size_t TorusLattice::index(std::span<const int> c) const {
  if (static_cast<int>(c.size()) != d) throw PreconditionError("TorusLattice::index: wrong rank");
  std::size_t idx = 0;
  for (int ci : c) idx = idx * N + static_cast<std::size_t>(((ci % N) + N) % N);
  return idx;
}

double TorusLattice::momentum_sq_half(std::size_t h) const {
  const int last = N / 2 + 1;
  const int k_last = static_cast<int>(h % last);
  h /= last;
  double k2 = static_cast<double>(k_last) * k_last;
  for (int i = 0; i < d - 1; ++i) {
    const int k = centred(static_cast<int>(h % N));
    h /= N;
    k2 += static_cast<double>(k) * k;
  }
  const double unit = 2.0 * std::numbers::pi / L;
  return unit * unit * k2;
}

double TorusLattice::torus_distance(std::size_t a, std::size_t b) const {
  const auto ca = coords(a);
  const auto cb = coords(b);
  double r2 = 0.0;
  for (int i = 0; i < d; ++i) {
    int delta = std::abs(ca[i] - cb[i]);
    delta = std::min(delta, N - delta);
    r2 += static_cast<double>(delta) * delta;
  }
  return std::sqrt(r2) * spacing();
}

void TorusLattice::validate() const {
  if (d < 1) throw PreconditionError("TorusLattice: d must be positive");
  if (N < 4 || N % 2 != 0) throw PreconditionError("TorusLattice: N must be even and >= 4");
  if (!(L > 0.0) || !std::isfinite(L)) throw PreconditionError("TorusLattice: L must be positive");
}

TorusLattice lattice_for_cutoff(int d, double L, double Lambda) {
  if (!(Lambda > 0.0) || !(L > 0.0)) throw PreconditionError("lattice_for_cutoff: need L, Lambda > 0");
  // Lambda <= pi N / (2 L)  <=>  N >= 2 L Lambda / pi
  int n = static_cast<int>(std::ceil(2.0 * L * Lambda / std::numbers::pi - 1e-12));
  n = std::max(n, 4);
  if (n % 2) ++n;
  TorusLattice lat{d, n, L};
  check_resolution(lat, Lambda);
  return lat;
}

void check_resolution(const TorusLattice& lat, double Lambda) {
  lat.validate();
  if (Lambda > lat.max_cutoff() * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "lattice N=" << lat.N << ", L=" << lat.L << " cannot resolve cutoff Lambda=" << Lambda
        << " (requires Lambda <= pi/(2a) = " << lat.max_cutoff() << ")";
    throw PreconditionError(msg.str());
  }
}

// ---------------------------------------------------------------------------
// SpectralDensity

SpectralDensity::SpectralDensity(const TorusLattice& lat, double m, double Lambda, double Z)
    : lattice_(lat), m_(m), Lambda_(Lambda), Z_(Z) {
  lat.validate();
  if (!(m > 0.0) || !(Lambda > 0.0) || !(Z > 0.0)) {
    throw PreconditionError("SpectralDensity: m, Lambda and Z must be positive");
  }
  weights_.resize(lat.half_size());
  for (std::size_t h = 0; h < weights_.size(); ++h) weights_[h] = weight(lat.momentum_sq_half(h));
}

SpectralDensity SpectralDensity::from_params(const TorusLattice& lat, const ModelParams& params,
                                             double Z) {
  params.validate();
  if (lat.d != params.d || lat.L != params.L) {
    throw PreconditionError("SpectralDensity: lattice does not match ModelParams (d, L)");
  }
  check_resolution(lat, params.Lambda);
  return SpectralDensity(lat, params.m, params.Lambda, Z);
}

double SpectralDensity::weight(double p2) const {
  const double e = p2 + m_ * m_;
  return Z_ * std::exp(-e / (Lambda_ * Lambda_)) / e;
}

std::vector<double> SpectralDensity::covariance_kernel() const {
  auto fft = RealFft::get(lattice_.d, lattice_.N);
  std::vector<std::complex<double>> modes(weights_.begin(), weights_.end());
  std::vector<double> out(lattice_.sites());
  fft->inverse(modes, out);
  const double norm = 1.0 / std::pow(lattice_.L, lattice_.d);
  for (double& g : out) g *= norm;
  return out;
}

double SpectralDensity::covariance_zero() const {
  // Every k in the full grid: half-layout entries with 0 < k_last < N/2 stand
  // for themselves and their mirror.
  const int last = lattice_.N / 2 + 1;
  double sum = 0.0;
  for (std::size_t h = 0; h < weights_.size(); ++h) {
    const int k_last = static_cast<int>(h % last);
    const double mult = (k_last == 0 || k_last == lattice_.N / 2) ? 1.0 : 2.0;
    sum += mult * weights_[h];
  }
  return sum / std::pow(lattice_.L, lattice_.d);
}

SpectralDensity SpectralDensity::with_Z(double Z) const {
  return SpectralDensity(lattice_, m_, Lambda_, Z);
}

// ---------------------------------------------------------------------------
// Sources

bool SourceField::is_zero_source() const {
  if (band_limited) {
    return std::all_of(modes.begin(), modes.end(),
                       [](const SourceMode& md) { return md.amplitude == 0.0; });
  }
  return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
}

SourceField zero_source(const TorusLattice& lat) {
  lat.validate();
  return SourceField{lat, std::vector<double>(lat.sites(), 0.0), true, {}};
}

SourceField band_limited_source(const TorusLattice& lat, const std::vector<SourceMode>& modes) {
  lat.validate();
  SourceField j{lat, std::vector<double>(lat.sites(), 0.0), true, modes};
  for (const auto& md : modes) {
    if (static_cast<int>(md.k.size()) != lat.d) {
      throw PreconditionError("band_limited_source: mode rank does not match lattice dimension");
    }
    for (int k : md.k) {
      if (std::abs(k) >= lat.N / 2) {
        throw PreconditionError("band_limited_source: mode component must satisfy |k| < N/2");
      }
    }
  }
  for (std::size_t s = 0; s < j.values.size(); ++s) {
    const auto c = lat.coords(s);
    double v = 0.0;
    for (const auto& md : modes) {
      double phase = md.phase;
      for (int i = 0; i < lat.d; ++i) phase += 2.0 * std::numbers::pi * md.k[i] * c[i] / lat.N;
      v += md.amplitude * std::cos(phase);
    }
    j.values[s] = v;
  }
  return j;
}

SourceField source_from_values(const TorusLattice& lat, std::vector<double> values) {
  lat.validate();
  if (values.size() != lat.sites()) throw PreconditionError("source_from_values: wrong size");
  return SourceField{lat, std::move(values), false, {}};
}

// ---------------------------------------------------------------------------
// Sampling

FieldSampler::FieldSampler(const SpectralDensity& spec)
    : lattice_(spec.lattice()), fft_(RealFft::get(spec.lattice().d, spec.lattice().N)) {
  const double cell = lattice_.cell_volume();
  const double norm = 1.0 / static_cast<double>(lattice_.sites());
  amplitude_.resize(spec.half_weights().size());
  for (std::size_t h = 0; h < amplitude_.size(); ++h) {
    amplitude_[h] = std::sqrt(spec.half_weights()[h] / cell) * norm;
  }
}

FieldSampler::Workspace FieldSampler::make_workspace() const {
  return Workspace{std::vector<double>(lattice_.sites()),
                   std::vector<std::complex<double>>(lattice_.half_size())};
}

void FieldSampler::sample_into(std::uint64_t seed, Workspace& ws, std::span<double> out) const {
  if (out.size() != lattice_.sites()) throw PreconditionError("sample_into: wrong output size");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (double& x : ws.noise) x = gauss(rng);
  fft_->forward(ws.noise, ws.modes);
  for (std::size_t h = 0; h < ws.modes.size(); ++h) ws.modes[h] *= amplitude_[h];
  fft_->inverse(ws.modes, out);
}

FieldSample FieldSampler::sample(std::uint64_t seed) const {
  FieldSample phi{lattice_, std::vector<double>(lattice_.sites()), seed};
  auto ws = make_workspace();
  sample_into(seed, ws, phi.values);
  return phi;
}

FieldSample sample_field(const TorusLattice& lat, const SpectralDensity& spec, std::uint64_t seed) {
  if (!(lat == spec.lattice())) throw PreconditionError("sample_field: spectrum built on another lattice");
  return FieldSampler(spec).sample(seed);
}

// ---------------------------------------------------------------------------
// Pairings

namespace {

void require_same(const TorusLattice& a, const TorusLattice& b, const char* what) {
  if (!(a == b)) throw PreconditionError(std::string(what) + ": lattice mismatch");
}

}  // namespace

double pairing(const FieldSample& phi, const SourceField& j) {
  require_same(phi.lattice, j.lattice, "pairing");
  double sum = 0.0;
  for (std::size_t s = 0; s < phi.values.size(); ++s) sum += phi.values[s] * j.values[s];
  return phi.lattice.cell_volume() * sum;
}

double inner(const SourceField& f, const SourceField& g) {
  require_same(f.lattice, g.lattice, "inner");
  double sum = 0.0;
  for (std::size_t s = 0; s < f.values.size(); ++s) sum += f.values[s] * g.values[s];
  return f.lattice.cell_volume() * sum;
}

double interaction_integral(std::span<const double> phi, const TorusLattice& lat,
                            const BoundedInteraction& v) {
  double sum = 0.0;
  for (double x : phi) sum += v(x);
  return lat.cell_volume() * sum;
}

double interaction_integral(const FieldSample& phi, const BoundedInteraction& v) {
  return interaction_integral(phi.values, phi.lattice, v);
}

SourceField covariance_convolve(const SourceField& j, const SpectralDensity& spec) {
  require_same(j.lattice, spec.lattice(), "covariance_convolve");
  const auto& lat = j.lattice;
  auto fft = RealFft::get(lat.d, lat.N);
  std::vector<std::complex<double>> modes(lat.half_size());
  fft->forward(j.values, modes);
  const double norm = 1.0 / static_cast<double>(lat.sites());
  const auto w = spec.half_weights();
  for (std::size_t h = 0; h < modes.size(); ++h) modes[h] *= w[h] * norm;
  SourceField out{lat, std::vector<double>(lat.sites()), j.band_limited, j.modes};
  fft->inverse(modes, out.values);
  return out;
}

SourceField uv_limit_convolve(const SourceField& j, double m) {
  const SpectralDensity spec(j.lattice, m, j.lattice.max_cutoff(), 1.0);
  return covariance_convolve(j, spec);
}

// ---------------------------------------------------------------------------
// Binary layout

namespace {

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("read_field: truncated file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void write_field(const std::filesystem::path& path, const TorusLattice& lat,
                 std::span<const double> values) {
  lat.validate();
  if (values.size() != lat.sites()) throw PreconditionError("write_field: wrong number of sites");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_field: cannot open " + path.string());
  put_u64(os, static_cast<std::uint64_t>(lat.d));
  put_u64(os, static_cast<std::uint64_t>(lat.N));
  put_u64(os, std::bit_cast<std::uint64_t>(lat.L));
  for (double v : values) put_u64(os, std::bit_cast<std::uint64_t>(v));
}

StoredField read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_field: cannot open " + path.string());
  StoredField f;
  f.lattice.d = static_cast<int>(get_u64(is));
  f.lattice.N = static_cast<int>(get_u64(is));
  f.lattice.L = std::bit_cast<double>(get_u64(is));
  f.lattice.validate();
  f.values.resize(f.lattice.sites());
  for (double& v : f.values) v = std::bit_cast<double>(get_u64(is));
  return f;
}

}  // namespace uvlab
