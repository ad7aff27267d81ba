#ifndef NLSTOKES_SYMBOLS_HPP
#define NLSTOKES_SYMBOLS_HPP

#include "nlstokes/kernel.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace nlstokes {

/// Quadrature controls for the polar-coordinate symbol integrals.
///
/// The radial integral runs over (0, delta] with
/// ceil(max(min_panels, 2 delta xi / pi)) Gauss-Legendre panels; the angular
/// integral over (0, pi/2) uses `angular_nodes` per panel with one panel per
/// 60 units of delta*xi. Each evaluation is repeated with doubled panel
/// counts until two successive estimates agree to the requested tolerance.
struct SymbolQuadrature {
  int radial_nodes = 32;
  int angular_nodes = 64;
  int min_panels = 8;
  int geometric_levels = 16;
  int max_refinements = 4;
  double rel_tolerance = 1e-9;

  bool operator==(const SymbolQuadrature&) const = default;
};

/// Fourier symbol of the nonlocal diffusion operator, L e^{i xi.x} = -lambda e^{i xi.x}.
/// Exactly 0 at xi = 0. Accuracy 1e-9 * max(1, xi^2).
double lambda_symbol(const ScaledKernel& diffusion, double xi, const SymbolQuadrature& quad = {});

/// Scalar Fourier symbol b with G e^{i xi.x} = i b(|xi|) xi/|xi| e^{i xi.x}.
/// Exactly 0 at xi = 0. Accuracy 1e-9 * max(1, xi).
double b_symbol(const ScaledKernel& gradient, double xi, const SymbolQuadrature& quad = {});

/// Grading exponent used for the radial substitution r = delta t^q.
int radial_grading(const ScaledKernel& kernel);

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double b_lo = 0.0;
  double b_hi = 0.0;
};

struct NearZeroMinimum {
  double xi = 0.0;
  double b = 0.0;
};

struct ScanReport {
  std::vector<Bracket> crossings;           ///< sign changes, refined to bracket width <= tolerance
  std::vector<NearZeroMinimum> near_zeros;  ///< local minima with b < 1e-8 and no sign change
  double min_b = 0.0;
  double argmin_xi = 0.0;
  int samples = 0;

  [[nodiscard]] bool positive() const { return crossings.empty() && near_zeros.empty(); }
};

/// Samples b on `resolution` uniform points of (0, xi_max] and brackets sign changes.
ScanReport scan_b_zero_crossings(const ScaledKernel& gradient, double xi_max, int resolution,
                                 double bracket_tolerance = 1e-6,
                                 const SymbolQuadrature& quad = {}, int threads = 1);

struct SymbolTable {
  int dim = 0;
  double delta = 0.0;
  Eigen::VectorXd xi;
  Eigen::VectorXd lambda;
  Eigen::VectorXd b;
  SymbolQuadrature quadrature;
  int diffusion_grading = 1;
  int gradient_grading = 1;

  [[nodiscard]] Eigen::Index rows() const { return xi.size(); }
};

/// Batch evaluation of both symbols on a strictly increasing positive grid.
/// The result does not depend on `threads`.
SymbolTable symbol_table(const ScaledKernel& diffusion, const ScaledKernel& gradient,
                         std::span<const double> xi_grid, const SymbolQuadrature& quad = {},
                         int threads = 1);

/// Uniform grid xi_min + (xi_max - xi_min) k / (samples - 1).
std::vector<double> uniform_grid(double xi_min, double xi_max, int samples);

}  // namespace nlstokes

#endif  // NLSTOKES_SYMBOLS_HPP
