#ifndef NLSTOKES_CONVERGENCE_HPP
#define NLSTOKES_CONVERGENCE_HPP

#include "nlstokes/forcing.hpp"
#include "nlstokes/kernel.hpp"
#include "nlstokes/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nlstokes {

/// order_k = log(e_k / e_{k+1}) / log(ratio). Entries where either error is
/// <= floor (or not finite), or whose ratio is 1, are missing.
std::vector<std::optional<double>> observed_order(std::span<const double> errors, double ratio,
                                                  double floor = 0.0);

/// Same with one refinement ratio per consecutive pair.
std::vector<std::optional<double>> observed_order(std::span<const double> errors,
                                                  std::span<const double> ratios,
                                                  double floor = 0.0);

struct RateStudy {
  int dim = 2;
  double nu = 1.0;
  ForcingSpec forcing = TaylorGreen{};
  RadialProfile diffusion = RadialProfile::constant(KernelRole::diffusion);
  RadialProfile gradient = RadialProfile::fractional(0.5, KernelRole::gradient);
  bool normalize = true;  ///< rescale both profiles to unit moments for `dim`
  StokesVariant variant = StokesVariant::nonlocal;

  /// delta study: deltas, Ns[0]; spectral study: deltas[0], Ns;
  /// compatibility study: (deltas[k], Ns[k]) pairs.
  std::vector<double> deltas;
  std::vector<int> Ns;
  int reference_N = 0;  ///< 0 selects 2 * max(Ns)

  bool triangle_terms = true;  ///< compatibility study: also solve at reference_N per rung
  SymbolQuadrature quadrature{};
  int threads = 1;
};

struct RateRung {
  double delta = 0.0;
  int N = 0;
  double err_u = 0.0;
  double err_p = 0.0;
  std::optional<double> energy_err_u;  ///< recorded, never thresholded
  std::optional<double> delta_gap_u;   ///< ||u_delta - u|| at the reference resolution
  std::optional<double> truncation_u;  ///< ||u_delta^N - u_delta|| at the reference resolution
  std::optional<bool> triangle_holds;
};

struct RateReport {
  std::string study;
  std::string reference;
  std::vector<RateRung> rungs;
  std::vector<std::optional<double>> order_u;
  std::vector<std::optional<double>> order_p;
  std::vector<std::string> flags;
};

/// Errors of nonlocal solves against the local solve on the same grid, one rung per delta.
RateReport delta_refinement_study(const RateStudy& study);

/// Errors of truncated nonlocal solves against a nonlocal solve at reference_N.
RateReport spectral_refinement_study(const RateStudy& study);

/// Errors along a joint (delta, N) path against the local solve at reference_N.
RateReport asymptotic_compatibility_study(const RateStudy& study);

}  // namespace nlstokes

#endif  // NLSTOKES_CONVERGENCE_HPP
