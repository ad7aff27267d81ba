#include "nlstokes/forcing.hpp"

#include "nlstokes/error.hpp"

#include <cmath>
#include <numbers>

namespace nlstokes {

namespace {

using cd = std::complex<double>;

/// Adds A * prod_a trig_a(x_a) to one component, where trig_a is sin when
/// bit a of `sin_mask` is set and cos otherwise. Only |xi_a| = 1 modes appear.
void add_trig_product(SpectralFieldd& field, int component, double amplitude, unsigned sin_mask) {
  const PeriodicGrid& grid = field.grid();
  const int d = grid.dim();
  const double volume = std::pow(2.0 * std::numbers::pi, double(d));
  std::vector<int> xi(d);
  for (unsigned signs = 0; signs < (1u << d); ++signs) {
    cd factor = 1.0;
    for (int a = 0; a < d; ++a) {
      const int s = (signs >> a) & 1u ? -1 : 1;
      xi[a] = s;
      // sin t = (e^{it} - e^{-it}) / 2i, cos t = (e^{it} + e^{-it}) / 2
      factor *= (sin_mask >> a) & 1u ? cd(0.0, -0.5 * s) : cd(0.5, 0.0);
    }
    const auto m = grid.index_of(xi);
    if (m) field(component, *m) += amplitude * (volume * factor);
  }
}

constexpr unsigned bit(int a) { return 1u << a; }

void check_grid(const PeriodicGrid& grid) {
  if (grid.dim() != 2 && grid.dim() != 3) {
    throw Error(ErrorCode::invalid_argument, "Taylor-Green flow is defined for d = 2 and 3");
  }
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_double(std::uint64_t bits) noexcept { return double(bits >> 11) * 0x1.0p-53; }

ExactSolution taylor_green_solution(const PeriodicGrid& grid, double amplitude) {
  check_grid(grid);
  const int d = grid.dim();
  ExactSolution out{SpectralFieldd(grid, d), SpectralFieldd(grid, 1)};
  if (d == 2) {
    add_trig_product(out.velocity, 0, amplitude, bit(0));
    add_trig_product(out.velocity, 1, -amplitude, bit(1));
    add_trig_product(out.pressure, 0, amplitude, bit(0) | bit(1));
  } else {
    add_trig_product(out.velocity, 0, amplitude, bit(0));
    add_trig_product(out.velocity, 1, -amplitude, bit(1));
    add_trig_product(out.pressure, 0, amplitude, bit(0) | bit(1) | bit(2));
  }
  return out;
}

namespace {

SpectralFieldd taylor_green_forcing(const PeriodicGrid& grid, const TaylorGreen& tg) {
  check_grid(grid);
  if (!(tg.nu > 0.0)) throw Error(ErrorCode::invalid_argument, "viscosity nu must be positive");
  const int d = grid.dim();
  const double A = tg.amplitude;
  SpectralFieldd f(grid, d);
  // -Delta of a product of unit-frequency trig factors is d times itself
  const double visc = double(d) * tg.nu * A;
  if (d == 2) {
    add_trig_product(f, 0, visc, bit(0));
    add_trig_product(f, 1, -visc, bit(1));
    add_trig_product(f, 0, A, bit(1));  // d/dx sin x sin y
    add_trig_product(f, 1, A, bit(0));
  } else {
    add_trig_product(f, 0, visc, bit(0));
    add_trig_product(f, 1, -visc, bit(1));
    add_trig_product(f, 0, A, bit(1) | bit(2));
    add_trig_product(f, 1, A, bit(0) | bit(2));
    add_trig_product(f, 2, A, bit(0) | bit(1));
  }
  return f;
}

SpectralFieldd mode_list_forcing(const PeriodicGrid& grid, const ModeList& list) {
  const int d = grid.dim();
  SpectralFieldd f(grid, d);
  for (const auto& mode : list.modes) {
    if (int(mode.xi.size()) != d || int(mode.amplitude.size()) != d) {
      throw Error(ErrorCode::shape_mismatch, "mode list entries need d wavevector components and d amplitudes");
    }
    const auto m = grid.index_of(mode.xi);
    if (!m) continue;
    for (int c = 0; c < d; ++c) {
      f(c, *m) += mode.amplitude[c];
      if (list.real) f(c, grid.negated(*m)) += std::conj(mode.amplitude[c]);
    }
  }
  return f;
}

}  // namespace

SpectralFieldd random_field(const PeriodicGrid& grid, int components, const RandomBandLimited& spec) {
  const int d = grid.dim();
  if (components != 1 && components != d) {
    throw Error(ErrorCode::shape_mismatch, "random field needs 1 or d components");
  }
  if (spec.band < 0) throw Error(ErrorCode::invalid_argument, "band must be nonnegative");
  if (!(spec.decay >= 0.0)) throw Error(ErrorCode::invalid_argument, "decay rate must be nonnegative");
  SpectralFieldd f(grid, components);
  const Eigen::MatrixXi& wv = grid.wavevectors();
  const double volume = std::pow(2.0 * std::numbers::pi, double(d));
  // fill the half lattice after the zero mode, mirror the rest
  for (Eigen::Index m = grid.zero_index() + 1; m < grid.mode_count(); ++m) {
    bool inside = true;
    std::uint64_t h = splitmix64(spec.seed);
    for (int a = 0; a < d; ++a) {
      inside = inside && std::abs(wv(a, m)) <= spec.band;
      h = splitmix64(h ^ std::uint64_t(std::int64_t(wv(a, m))));
    }
    if (!inside) continue;
    const double weight = spec.amplitude * volume * std::exp(-spec.decay * std::sqrt(double(grid.norm2(m))));
    Eigen::VectorXcd c(components);
    for (int k = 0; k < components; ++k) {
      const std::uint64_t r1 = splitmix64(h ^ (2 * std::uint64_t(k) + 1));
      const std::uint64_t r2 = splitmix64(r1);
      c[k] = weight * cd(2.0 * unit_double(r1) - 1.0, 2.0 * unit_double(r2) - 1.0);
    }
    if (spec.divergence_free && components == d) {
      Eigen::VectorXd n(d);
      for (int a = 0; a < d; ++a) n[a] = wv(a, m);
      n /= n.norm();
      const cd proj = n.cast<cd>().dot(c);
      c -= n.cast<cd>() * proj;
    }
    f.mode(m) = c;
    f.mode(grid.negated(m)) = c.conjugate();
  }
  return f;
}

SpectralFieldd make_forcing(const ForcingSpec& spec, const PeriodicGrid& grid) {
  return std::visit(
      [&](const auto& s) -> SpectralFieldd {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TaylorGreen>) {
          return taylor_green_forcing(grid, s);
        } else if constexpr (std::is_same_v<T, ModeList>) {
          return mode_list_forcing(grid, s);
        } else {
          return random_field(grid, grid.dim(), s);
        }
      },
      spec);
}

}  // namespace nlstokes
