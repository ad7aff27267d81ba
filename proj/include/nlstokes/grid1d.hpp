#ifndef NLSTOKES_GRID1D_HPP
#define NLSTOKES_GRID1D_HPP

#include "nlstokes/kernel.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace nlstokes {

enum class Layout { regular, staggered };

std::string_view to_string(Layout layout) noexcept;
std::optional<Layout> parse_layout(std::string_view text) noexcept;

/// Difference stencil for the 1D nonlocal gradient,
///   (G p)_j = sum_k d_k (p_{j+k} - p_{j-k})             regular
///   (G p)_j = sum_k d_k (p_{j+k+1/2} - p_{j-k-1/2})     staggered
/// Regular weights are d_k = w_delta(k h) h for k = 1..floor(delta/h). Staggered
/// weights are w_delta((k+1/2) h) times the length of [k h, (k+1) h] inside
/// [0, delta], for every cell that meets the support.
struct Discretization1D {
  int N = 0;  ///< 0 when built from a bare spacing
  double h = 0.0;
  double delta = 0.0;
  Layout layout = Layout::regular;
  std::vector<double> offsets;  ///< in units of h: k or k + 1/2
  std::vector<double> weights;

  [[nodiscard]] int horizon_cells() const noexcept;  ///< floor(delta / h)
};

/// Weights on the lattice h = 2 pi / N.
Discretization1D build_weights(const RadialProfile& gradient, double delta, int N, Layout layout);

/// Weights for an arbitrary spacing; symbols then use floating-point angles.
Discretization1D build_weights(const RadialProfile& gradient, double delta, double h, Layout layout);

/// 2 sum_k d_k offset_k h; equals 1 up to O(h) for a normalized kernel.
double first_moment(const Discretization1D& disc);

/// 2 sum_k d_k sin(n offset_k h). On a lattice the angle is reduced exactly, so
/// sines of multiples of pi are exact zeros.
double discrete_gradient_symbol(const Discretization1D& disc, int n);

enum class GridVerdict { stable, rank_deficient };
std::string_view to_string(GridVerdict v) noexcept;

struct NyquistReport {
  double min_abs = 0.0;
  int argmin = 0;
  double max_abs = 0.0;
  GridVerdict verdict = GridVerdict::stable;
};

/// Scans |b(n)| for n = 1..N/2; rank-deficient when min < 1e-12 max.
NyquistReport nyquist_audit(const Discretization1D& disc);

}  // namespace nlstokes

#endif  // NLSTOKES_GRID1D_HPP
