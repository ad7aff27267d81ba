#ifndef NLSTOKES_REALSPACE_HPP
#define NLSTOKES_REALSPACE_HPP

#include "nlstokes/spectral.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace nlstokes {

/// Point values on the N^d collocation lattice of a PeriodicGrid.
struct LatticeField {
  PeriodicGrid grid;
  Eigen::MatrixXd values;  ///< components x N^d

  LatticeField(PeriodicGrid g, int components)
      : grid(std::move(g)), values(Eigen::MatrixXd::Zero(components, grid.point_count())) {}
  LatticeField(PeriodicGrid g, Eigen::MatrixXd v);

  [[nodiscard]] int components() const noexcept { return int(values.rows()); }

  /// values(:, j) = fn(x_j).
  static LatticeField sample(const PeriodicGrid& grid, int components,
                             const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& fn);
};

/// Lattice offsets m != 0 whose cell meets the ball |z| <= delta. Each weight is
/// the kernel at |m h| times the measure of (cell of m) cut by the ball.
struct Stencil {
  struct Entry {
    std::array<int, 3> offset{};
    double distance = 0.0;
    double weight = 0.0;
  };
  int dim = 0;
  double h = 0.0;
  std::vector<Entry> entries;
};

Stencil build_stencil(const ScaledKernel& kernel, const PeriodicGrid& grid);

/// Measure of [lo_0, hi_0] x ... x [lo_{d-1}, hi_{d-1}] inside the ball of radius R.
double box_ball_measure(std::span<const double> lo, std::span<const double> hi, double R);

enum class DivergenceForm { plus, minus };

struct RealspaceResult {
  LatticeField field;
  std::vector<std::string> warnings;
};

/// L u(x) = sum_m w_m (u(x+mh) - u(x))
/// G p(x) = sum_m w_m m/|m| (p(x+mh) - p(x))
/// D u(x) = sum_m w_m m/|m| . (u(x+mh) +- u(x))
RealspaceResult apply_operator_realspace(NonlocalOp op, const LatticeField& field,
                                         const ScaledKernel& kernel,
                                         DivergenceForm form = DivergenceForm::plus,
                                         int threads = 1);

/// |<u, G p>_h + <D u, p>_h| / (||u||_h ||p||_h + 1e-300).
double adjointness_residual(const LatticeField& u, const LatticeField& p, const ScaledKernel& gradient,
                            int threads = 1);

/// Applies the lattice operator to cos(xi.x) (L), sin(xi.x) (G) or
/// xi/|xi| sin(xi.x) (D) and returns max_x |lattice - symbol action| / |symbol|.
double planewave_symbol_check(NonlocalOp op, const ScaledKernel& kernel, std::span<const int> xi, int N,
                              const SymbolQuadrature& quad = {}, int threads = 1);

}  // namespace nlstokes

#endif  // NLSTOKES_REALSPACE_HPP
