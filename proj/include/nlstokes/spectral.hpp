#ifndef NLSTOKES_SPECTRAL_HPP
#define NLSTOKES_SPECTRAL_HPP

#include "nlstokes/kernel.hpp"
#include "nlstokes/symbols.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace nlstokes {

/// Truncated integer lattice {xi in Z^d : |xi_k| <= N/2 - 1} on the cell
/// (-pi, pi)^d. Nyquist rows are not represented. Modes are stored in
/// lexicographic order (last axis fastest) so that the mode -xi sits at
/// index mode_count() - 1 - i.
class PeriodicGrid {
 public:
  PeriodicGrid(int dim, int N);

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] int N() const noexcept { return n_; }
  [[nodiscard]] int kmax() const noexcept { return n_ / 2 - 1; }
  [[nodiscard]] int axis_modes() const noexcept { return n_ - 1; }
  [[nodiscard]] Eigen::Index mode_count() const noexcept { return modes_.cols(); }
  [[nodiscard]] Eigen::Index point_count() const noexcept;
  [[nodiscard]] double spacing() const noexcept;

  /// d x mode_count() integer wavevectors.
  [[nodiscard]] const Eigen::MatrixXi& wavevectors() const noexcept { return modes_; }
  [[nodiscard]] int norm2(Eigen::Index mode) const { return norm2_[mode]; }
  [[nodiscard]] int max_norm2() const noexcept { return dim_ * kmax() * kmax(); }
  [[nodiscard]] Eigen::Index zero_index() const noexcept { return (mode_count() - 1) / 2; }
  [[nodiscard]] Eigen::Index negated(Eigen::Index mode) const noexcept { return mode_count() - 1 - mode; }
  [[nodiscard]] std::optional<Eigen::Index> index_of(std::span<const int> xi) const;

  /// Collocation point x_j = -pi + j h, lexicographic with last axis fastest.
  [[nodiscard]] Eigen::VectorXd point(Eigen::Index index) const;

  bool operator==(const PeriodicGrid& o) const noexcept { return dim_ == o.dim_ && n_ == o.n_; }

 private:
  int dim_;
  int n_;
  Eigen::MatrixXi modes_;
  Eigen::VectorXi norm2_;
};

/// Fourier coefficients of a periodic scalar (1 component) or vector (d
/// components) field in the convention u(x) = (2 pi)^-d sum_xi u^(xi) e^{i xi.x},
/// u^(xi) = int u(x) e^{-i xi.x} dx. Coefficients are a components x modes matrix.
template <typename Scalar>
class SpectralField {
 public:
  using Complex = std::complex<Scalar>;
  using Coefficients = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

  SpectralField(PeriodicGrid grid, int components)
      : grid_(std::move(grid)), coeffs_(Coefficients::Zero(components, grid_.mode_count())) {}

  SpectralField(PeriodicGrid grid, Coefficients coeffs)
      : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
    if (coeffs_.cols() != grid_.mode_count()) {
      throw std::invalid_argument("SpectralField: coefficient count does not match the grid");
    }
  }

  [[nodiscard]] const PeriodicGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] int components() const noexcept { return int(coeffs_.rows()); }
  [[nodiscard]] const Coefficients& coefficients() const noexcept { return coeffs_; }
  [[nodiscard]] Coefficients& coefficients() noexcept { return coeffs_; }

  Complex& operator()(int component, Eigen::Index mode) { return coeffs_(component, mode); }
  const Complex& operator()(int component, Eigen::Index mode) const { return coeffs_(component, mode); }

  [[nodiscard]] auto mode(Eigen::Index m) const { return coeffs_.col(m); }
  [[nodiscard]] auto mode(Eigen::Index m) { return coeffs_.col(m); }

  [[nodiscard]] Scalar mean_magnitude() const { return coeffs_.col(grid_.zero_index()).norm(); }

  /// Largest Euclidean norm of a single mode's coefficient vector.
  [[nodiscard]] Scalar max_mode_norm() const {
    return coeffs_.size() == 0 ? Scalar(0) : coeffs_.colwise().norm().maxCoeff();
  }

  [[nodiscard]] bool is_conjugate_symmetric(Scalar tol) const {
    for (Eigen::Index m = 0; m < coeffs_.cols(); ++m) {
      const auto diff = (coeffs_.col(m) - coeffs_.col(grid_.negated(m)).conjugate()).norm();
      if (diff > tol) return false;
    }
    return true;
  }

  /// Copy onto another lattice of the same dimension: shared modes are kept,
  /// modes missing from the target are dropped, new modes are zero.
  [[nodiscard]] SpectralField resampled(const PeriodicGrid& target) const {
    if (target.dim() != grid_.dim()) throw std::invalid_argument("resampled: dimension mismatch");
    SpectralField out(target, components());
    const auto& wv = target.wavevectors();
    std::vector<int> xi(target.dim());
    for (Eigen::Index m = 0; m < target.mode_count(); ++m) {
      for (int a = 0; a < target.dim(); ++a) xi[a] = wv(a, m);
      if (auto src = grid_.index_of(xi)) out.coeffs_.col(m) = coeffs_.col(*src);
    }
    return out;
  }

  SpectralField& operator+=(const SpectralField& o) {
    check_compatible(o);
    coeffs_ += o.coeffs_;
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    check_compatible(o);
    coeffs_ -= o.coeffs_;
    return *this;
  }
  SpectralField& operator*=(Scalar s) {
    coeffs_ *= s;
    return *this;
  }
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(SpectralField a, Scalar s) { return a *= s; }
  friend SpectralField operator*(Scalar s, SpectralField a) { return a *= s; }

 private:
  void check_compatible(const SpectralField& o) const {
    if (!(grid_ == o.grid_) || components() != o.components()) {
      throw std::invalid_argument("SpectralField: incompatible operands");
    }
  }

  PeriodicGrid grid_;
  Coefficients coeffs_;
};

using SpectralFieldd = SpectralField<double>;

/// Point values (components x N^d) of a spectral field; the real part of the series.
Eigen::MatrixXd to_real_space(const SpectralFieldd& field);

/// Discrete Fourier coefficients h^d sum_x u(x) e^{-i xi.x} on the retained lattice.
SpectralFieldd from_real_space(const PeriodicGrid& grid, const Eigen::MatrixXd& values);

/// Symbols lambda(|xi|) and b(|xi|) on every distinct |xi|^2 of a lattice.
class RadialSymbols {
 public:
  /// lambda from the diffusion kernel, b from the gradient kernel.
  static RadialSymbols nonlocal(const PeriodicGrid& grid, const ScaledKernel& diffusion,
                                const ScaledKernel& gradient, const SymbolQuadrature& quad = {},
                                int threads = 1);
  /// b only; lambda() throws.
  static RadialSymbols gradient_only(const PeriodicGrid& grid, const ScaledKernel& gradient,
                                     const SymbolQuadrature& quad = {}, int threads = 1);
  /// lambda only; b() throws.
  static RadialSymbols diffusion_only(const PeriodicGrid& grid, const ScaledKernel& diffusion,
                                      const SymbolQuadrature& quad = {}, int threads = 1);
  /// lambda = |xi|^2, b = |xi|.
  static RadialSymbols local(const PeriodicGrid& grid);

  /// Arbitrary radial symbols, fn(|xi|) -> {lambda, b}.
  template <typename Fn>
  static RadialSymbols from_function(const PeriodicGrid& grid, Fn&& fn) {
    RadialSymbols s(grid.max_norm2());
    for (int n2 : distinct_norm2(grid)) {
      const auto [l, b] = fn(std::sqrt(double(n2)));
      s.set(n2, l, b);
    }
    return s;
  }

  /// The same b with lambda replaced by b^2 (symbol of -D G).
  [[nodiscard]] RadialSymbols modified() const;

  [[nodiscard]] double lambda(int norm2) const;
  [[nodiscard]] double b(int norm2) const;
  [[nodiscard]] bool has_lambda() const noexcept { return has_lambda_; }
  [[nodiscard]] bool has_b() const noexcept { return has_b_; }
  [[nodiscard]] bool covers(const PeriodicGrid& grid) const;

  static std::vector<int> distinct_norm2(const PeriodicGrid& grid);

 private:
  explicit RadialSymbols(int max_norm2)
      : lambda_(std::size_t(max_norm2) + 1, 0.0),
        b_(std::size_t(max_norm2) + 1, 0.0),
        present_(std::size_t(max_norm2) + 1, 0) {}

  void set(int n2, double l, double b) {
    lambda_[n2] = l;
    b_[n2] = b;
    present_[n2] = 1;
  }
  void check(int n2) const;
  static RadialSymbols build(const PeriodicGrid& grid, const ScaledKernel* diffusion,
                             const ScaledKernel* gradient, const SymbolQuadrature& quad,
                             int threads);

  std::vector<double> lambda_;
  std::vector<double> b_;
  std::vector<char> present_;
  bool has_lambda_ = true;
  bool has_b_ = true;
};

enum class StokesVariant { nonlocal, modified, local };

std::string_view to_string(StokesVariant v) noexcept;
std::optional<StokesVariant> parse_variant(std::string_view text) noexcept;

struct StokesProblem {
  SpectralFieldd forcing;
  double nu = 1.0;
  StokesVariant variant = StokesVariant::nonlocal;
  std::optional<ScaledKernel> diffusion;  ///< needed by the nonlocal variant
  std::optional<ScaledKernel> gradient;   ///< needed by nonlocal and modified
  SymbolQuadrature quadrature{};
  int threads = 1;
};

struct StokesDiagnostics {
  double momentum_residual = 0.0;        ///< max_xi |nu lambda u^ + i b p^ - f^|
  double max_local_divergence = 0.0;     ///< max_xi |xi . u^|
  double max_nonlocal_divergence = 0.0;  ///< max_xi |b(|xi|) xi/|xi| . u^|
};

struct StokesSolution {
  SpectralFieldd velocity;
  SpectralFieldd pressure;
  StokesDiagnostics diagnostics;
};

/// Momentum and gradient symbols appropriate for the problem's variant.
RadialSymbols stokes_symbols(const StokesProblem& problem);

StokesSolution solve_stokes(const StokesProblem& problem);

/// Per-mode inverse of [[nu lambda I, i b], [-i b^T, 0]] with b = b(|xi|) xi/|xi|.
/// `symbols.lambda` is used as the momentum symbol as given.
StokesSolution solve_stokes(const SpectralFieldd& forcing, double nu, const RadialSymbols& symbols,
                            int threads = 1);

enum class NonlocalOp { L, G, D };

/// Multiplies each mode by -lambda, i b xi/|xi|, or i b (xi/|xi|)^T.
SpectralFieldd apply_nonlocal_operator(NonlocalOp op, const SpectralFieldd& field,
                                       const RadialSymbols& symbols);
SpectralFieldd apply_nonlocal_operator(NonlocalOp op, const SpectralFieldd& field,
                                       const ScaledKernel& kernel,
                                       const SymbolQuadrature& quad = {});

/// Inverts -D G: p^ = g^ / b(|xi|)^2.
SpectralFieldd solve_pressure_poisson(const SpectralFieldd& rhs, const RadialSymbols& symbols);
SpectralFieldd solve_pressure_poisson(const SpectralFieldd& rhs, const ScaledKernel& gradient,
                                      const SymbolQuadrature& quad = {});

struct DivergenceAudit {
  double max_local = 0.0;
  double max_nonlocal = 0.0;
};

DivergenceAudit divergence_audit(const SpectralFieldd& u, const RadialSymbols& symbols);

/// Per-mode "divergence vanishes" flags: |xi.u^| <= tol |xi| |u^| and
/// |b xi/|xi|.u^| <= tol |b| |u^|. The zero mode is reported as vanishing.
struct DivergenceZeroSets {
  std::vector<bool> local;
  std::vector<bool> nonlocal;
};
DivergenceZeroSets divergence_zero_sets(const SpectralFieldd& u, const RadialSymbols& symbols,
                                        double rel_tol = 1e-12);

struct L2Norm {};
struct SobolevNorm {
  double s = 0.0;
};
struct EnergyNorm {
  ScaledKernel diffusion;
  SymbolQuadrature quadrature{};
};
using NormSpec = std::variant<L2Norm, SobolevNorm, EnergyNorm>;

/// ((2 pi)^-d sum_xi w(xi) |u^(xi)|^2)^(1/2) with w = 1, |xi|^{2s} or lambda(|xi|).
double field_norm(const SpectralFieldd& field, const NormSpec& norm);
double l2_norm(const SpectralFieldd& field);
double energy_norm(const SpectralFieldd& field, const RadialSymbols& symbols);

}  // namespace nlstokes

#endif  // NLSTOKES_SPECTRAL_HPP
