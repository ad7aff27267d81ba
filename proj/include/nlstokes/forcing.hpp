#ifndef NLSTOKES_FORCING_HPP
#define NLSTOKES_FORCING_HPP

#include "nlstokes/spectral.hpp"

#include <complex>
#include <cstdint>
#include <variant>
#include <vector>

namespace nlstokes {

/// Manufactured Taylor-Green flow. d=2:
///   u = A (sin x cos y, -cos x sin y),            p = A sin x sin y
/// d=3:
///   u = A (sin x cos y cos z, -cos x sin y cos z, 0), p = A sin x sin y sin z
/// with f = -nu Delta u + grad p.
struct TaylorGreen {
  double nu = 1.0;
  double amplitude = 1.0;
};

struct ModeAmplitude {
  std::vector<int> xi;
  std::vector<std::complex<double>> amplitude;  ///< one entry per component
};

/// Explicit coefficients. With `real` set, the conjugate partner -xi receives
/// conj(amplitude) so the represented field is real.
struct ModeList {
  std::vector<ModeAmplitude> modes;
  bool real = true;
};

/// Seeded random coefficients on |xi_k| <= band, scaled by exp(-decay |xi|).
/// Values are a pure function of (seed, xi, component), so the same forcing
/// is obtained on every lattice that contains the band.
struct RandomBandLimited {
  std::uint64_t seed = 0;
  int band = 8;
  double decay = 0.0;
  double amplitude = 1.0;
  bool divergence_free = false;
};

using ForcingSpec = std::variant<TaylorGreen, ModeList, RandomBandLimited>;

/// Vector forcing on the lattice. Modes outside the lattice are dropped.
SpectralFieldd make_forcing(const ForcingSpec& spec, const PeriodicGrid& grid);

/// Random field with `components` components (1 or d) and zero mean.
SpectralFieldd random_field(const PeriodicGrid& grid, int components, const RandomBandLimited& spec);

struct ExactSolution {
  SpectralFieldd velocity;
  SpectralFieldd pressure;
};

/// The manufactured Taylor-Green pair (u, p), independent of nu.
ExactSolution taylor_green_solution(const PeriodicGrid& grid, double amplitude = 1.0);

/// SplitMix64 finalizer; the only source of pseudo-randomness in the library.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Uniform double in [0, 1) from the top 53 bits of `bits`.
double unit_double(std::uint64_t bits) noexcept;

}  // namespace nlstokes

#endif  // NLSTOKES_FORCING_HPP
