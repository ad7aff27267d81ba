#include "nlstokes/spectral.hpp"

#include "nlstokes/error.hpp"
#include "nlstokes/parallel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace nlstokes {

namespace {

constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using SmallCVec = Eigen::Matrix<cd, Eigen::Dynamic, 1, 0, 3, 1>;

SmallVec unit_direction(const PeriodicGrid& grid, Eigen::Index m, double& norm) {
  SmallVec xi(grid.dim());
  for (int a = 0; a < grid.dim(); ++a) xi[a] = grid.wavevectors()(a, m);
  norm = std::sqrt(double(grid.norm2(m)));
  return xi / norm;
}

std::vector<int> mode_vector(const PeriodicGrid& grid, Eigen::Index m) {
  std::vector<int> xi(grid.dim());
  for (int a = 0; a < grid.dim(); ++a) xi[a] = grid.wavevectors()(a, m);
  return xi;
}

std::string format_mode(const std::vector<int>& xi) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < xi.size(); ++i) os << (i ? "," : "") << xi[i];
  os << ')';
  return os.str();
}

/// A representative of the lattice sphere |xi|^2 = n2 with nonnegative,
/// nonincreasing components; falls back to the first stored mode.
std::vector<int> canonical_mode(const PeriodicGrid& grid, int n2) {
  std::optional<Eigen::Index> first;
  for (Eigen::Index m = 0; m < grid.mode_count(); ++m) {
    if (grid.norm2(m) != n2) continue;
    if (!first) first = m;
    bool ok = true;
    for (int a = 0; a < grid.dim(); ++a) {
      const int v = grid.wavevectors()(a, m);
      if (v < 0 || (a > 0 && v > grid.wavevectors()(a - 1, m))) ok = false;
    }
    if (ok) return mode_vector(grid, m);
  }
  return first ? mode_vector(grid, *first) : std::vector<int>{};
}

void check_zero_mean(const SpectralFieldd& f, std::string_view what) {
  const double scale = std::max(1.0, f.max_mode_norm());
  if (f.mean_magnitude() > 1e-12 * scale) {
    throw Error(ErrorCode::incompatible_forcing,
                "incompatible forcing: " + std::string(what) + " has a nonzero mean mode");
  }
}

/// Throws if |b| < 1e-12 |xi| on any retained mode.
void check_gradient_symbol(const PeriodicGrid& grid, const RadialSymbols& symbols, ErrorCode code) {
  for (int n2 : RadialSymbols::distinct_norm2(grid)) {
    if (n2 == 0) continue;
    const double b = symbols.b(n2);
    if (!(std::abs(b) >= 1e-12 * std::sqrt(double(n2)))) {
      const auto xi = canonical_mode(grid, n2);
      std::ostringstream os;
      os.precision(6);
      os << (code == ErrorCode::ill_posed_kernel ? "ill-posed kernel at mode "
                                                 : "ill-posed pressure operator at mode ")
         << format_mode(xi) << ": b=" << b;
      throw IllPosedError(code, os.str(), xi);
    }
  }
}

/// One-dimensional transform of axis `axis` of a row-major complex array.
/// `twiddle` is out_extent x in_extent.
std::vector<cd> transform_axis(const std::vector<cd>& in, std::vector<int>& shape, int axis,
                               const Eigen::MatrixXcd& twiddle) {
  const int in_extent = shape[axis];
  const int out_extent = int(twiddle.rows());
  std::size_t outer = 1, inner = 1;
  for (int a = 0; a < axis; ++a) outer *= std::size_t(shape[a]);
  for (std::size_t a = std::size_t(axis) + 1; a < shape.size(); ++a) inner *= std::size_t(shape[a]);
  std::vector<cd> out(outer * std::size_t(out_extent) * inner);
  for (std::size_t o = 0; o < outer; ++o) {
    for (int j = 0; j < out_extent; ++j) {
      cd* dst = &out[(o * out_extent + j) * inner];
      for (int k = 0; k < in_extent; ++k) {
        const cd w = twiddle(j, k);
        const cd* src = &in[(o * in_extent + k) * inner];
        for (std::size_t i = 0; i < inner; ++i) dst[i] += w * src[i];
      }
    }
  }
  shape[axis] = out_extent;
  return out;
}

}  // namespace

PeriodicGrid::PeriodicGrid(int dim, int N) : dim_(dim), n_(N) {
  if (dim < 1 || dim > 3) throw Error(ErrorCode::invalid_argument, "grid dimension must be 1, 2 or 3");
  if (N < 4 || N % 2 != 0) {
    throw Error(ErrorCode::invalid_argument, "modes per axis N must be even and at least 4");
  }
  const int extent = N - 1;
  Eigen::Index count = 1;
  for (int a = 0; a < dim; ++a) count *= extent;
  modes_.resize(dim, count);
  norm2_.resize(count);
  const int k = kmax();
  for (Eigen::Index m = 0; m < count; ++m) {
    Eigen::Index rest = m;
    int n2 = 0;
    for (int a = dim - 1; a >= 0; --a) {
      const int v = int(rest % extent) - k;
      rest /= extent;
      modes_(a, m) = v;
      n2 += v * v;
    }
    norm2_[m] = n2;
  }
}

Eigen::Index PeriodicGrid::point_count() const noexcept {
  Eigen::Index c = 1;
  for (int a = 0; a < dim_; ++a) c *= n_;
  return c;
}

double PeriodicGrid::spacing() const noexcept { return 2.0 * kPi / double(n_); }

std::optional<Eigen::Index> PeriodicGrid::index_of(std::span<const int> xi) const {
  if (int(xi.size()) != dim_) return std::nullopt;
  Eigen::Index idx = 0;
  for (int a = 0; a < dim_; ++a) {
    if (std::abs(xi[a]) > kmax()) return std::nullopt;
    idx = idx * axis_modes() + (xi[a] + kmax());
  }
  return idx;
}

Eigen::VectorXd PeriodicGrid::point(Eigen::Index index) const {
  Eigen::VectorXd x(dim_);
  for (int a = dim_ - 1; a >= 0; --a) {
    x[a] = -kPi + double(index % n_) * spacing();
    index /= n_;
  }
  return x;
}

Eigen::MatrixXd to_real_space(const SpectralFieldd& field) {
  const PeriodicGrid& grid = field.grid();
  const int N = grid.N();
  const int extent = grid.axis_modes();
  const int k = grid.kmax();
  Eigen::MatrixXcd twiddle(N, extent);
  for (int j = 0; j < N; ++j) {
    const double x = -kPi + double(j) * grid.spacing();
    for (int c = 0; c < extent; ++c) twiddle(j, c) = std::polar(1.0, double(c - k) * x);
  }
  const double norm = std::pow(2.0 * kPi, -double(grid.dim()));
  Eigen::MatrixXd out(field.components(), grid.point_count());
  for (int comp = 0; comp < field.components(); ++comp) {
    std::vector<cd> data(field.coefficients().row(comp).begin(), field.coefficients().row(comp).end());
    std::vector<int> shape(grid.dim(), extent);
    for (int a = 0; a < grid.dim(); ++a) data = transform_axis(data, shape, a, twiddle);
    for (Eigen::Index p = 0; p < grid.point_count(); ++p) out(comp, p) = norm * data[p].real();
  }
  return out;
}

SpectralFieldd from_real_space(const PeriodicGrid& grid, const Eigen::MatrixXd& values) {
  if (values.cols() != grid.point_count()) {
    throw Error(ErrorCode::shape_mismatch, "sample count does not match the grid");
  }
  const int N = grid.N();
  const int extent = grid.axis_modes();
  const int k = grid.kmax();
  Eigen::MatrixXcd twiddle(extent, N);
  for (int c = 0; c < extent; ++c) {
    for (int j = 0; j < N; ++j) {
      const double x = -kPi + double(j) * grid.spacing();
      twiddle(c, j) = std::polar(1.0, -double(c - k) * x);
    }
  }
  const double cell = std::pow(grid.spacing(), double(grid.dim()));
  SpectralFieldd out(grid, int(values.rows()));
  for (Eigen::Index comp = 0; comp < values.rows(); ++comp) {
    std::vector<cd> data(values.cols());
    for (Eigen::Index p = 0; p < values.cols(); ++p) data[p] = values(comp, p);
    std::vector<int> shape(grid.dim(), N);
    for (int a = 0; a < grid.dim(); ++a) data = transform_axis(data, shape, a, twiddle);
    for (Eigen::Index m = 0; m < grid.mode_count(); ++m) out(int(comp), m) = cell * data[m];
  }
  return out;
}

std::vector<int> RadialSymbols::distinct_norm2(const PeriodicGrid& grid) {
  std::vector<char> seen(std::size_t(grid.max_norm2()) + 1, 0);
  for (Eigen::Index m = 0; m < grid.mode_count(); ++m) seen[grid.norm2(m)] = 1;
  std::vector<int> out;
  for (std::size_t n2 = 0; n2 < seen.size(); ++n2) {
    if (seen[n2]) out.push_back(int(n2));
  }
  return out;
}

RadialSymbols RadialSymbols::build(const PeriodicGrid& grid, const ScaledKernel* diffusion,
                                   const ScaledKernel* gradient, const SymbolQuadrature& quad,
                                   int threads) {
  for (const ScaledKernel* k : {diffusion, gradient}) {
    if (k && k->dim() != grid.dim()) {
      throw Error(ErrorCode::invalid_argument, "kernel dimension does not match the grid");
    }
  }
  RadialSymbols s(grid.max_norm2());
  s.has_lambda_ = diffusion != nullptr;
  s.has_b_ = gradient != nullptr;
  const auto norms = distinct_norm2(grid);
  // each |xi|^2 owns its slot, so the table is identical for any thread count
  parallel_for(norms.size(), threads, [&](std::size_t i) {
    const int n2 = norms[i];
    const double xi = std::sqrt(double(n2));
    const double l = diffusion ? lambda_symbol(*diffusion, xi, quad) : 0.0;
    const double b = gradient ? b_symbol(*gradient, xi, quad) : 0.0;
    s.set(n2, l, b);
  });
  return s;
}

RadialSymbols RadialSymbols::nonlocal(const PeriodicGrid& grid, const ScaledKernel& diffusion,
                                      const ScaledKernel& gradient, const SymbolQuadrature& quad,
                                      int threads) {
  return build(grid, &diffusion, &gradient, quad, threads);
}

RadialSymbols RadialSymbols::gradient_only(const PeriodicGrid& grid, const ScaledKernel& gradient,
                                           const SymbolQuadrature& quad, int threads) {
  return build(grid, nullptr, &gradient, quad, threads);
}

RadialSymbols RadialSymbols::diffusion_only(const PeriodicGrid& grid, const ScaledKernel& diffusion,
                                            const SymbolQuadrature& quad, int threads) {
  return build(grid, &diffusion, nullptr, quad, threads);
}

RadialSymbols RadialSymbols::local(const PeriodicGrid& grid) {
  return from_function(grid, [](double xi) { return std::pair{xi * xi, xi}; });
}

RadialSymbols RadialSymbols::modified() const {
  if (!has_b_) throw Error(ErrorCode::invalid_argument, "modified symbols need b");
  RadialSymbols s = *this;
  for (std::size_t n2 = 0; n2 < b_.size(); ++n2) s.lambda_[n2] = b_[n2] * b_[n2];
  s.has_lambda_ = true;
  return s;
}

void RadialSymbols::check(int n2) const {
  if (n2 < 0 || std::size_t(n2) >= present_.size() || !present_[n2]) {
    throw Error(ErrorCode::lattice_mismatch, "no cached symbol for |xi|^2=" + std::to_string(n2));
  }
}

double RadialSymbols::lambda(int norm2) const {
  if (!has_lambda_) throw Error(ErrorCode::invalid_argument, "symbol table has no lambda");
  check(norm2);
  return lambda_[norm2];
}

double RadialSymbols::b(int norm2) const {
  if (!has_b_) throw Error(ErrorCode::invalid_argument, "symbol table has no b");
  check(norm2);
  return b_[norm2];
}

bool RadialSymbols::covers(const PeriodicGrid& grid) const {
  for (int n2 : distinct_norm2(grid)) {
    if (std::size_t(n2) >= present_.size() || !present_[n2]) return false;
  }
  return true;
}

std::string_view to_string(StokesVariant v) noexcept {
  switch (v) {
    case StokesVariant::nonlocal: return "nonlocal";
    case StokesVariant::modified: return "modified";
    case StokesVariant::local: return "local";
  }
  return "unknown";
}

std::optional<StokesVariant> parse_variant(std::string_view text) noexcept {
  if (text == "nonlocal") return StokesVariant::nonlocal;
  if (text == "modified") return StokesVariant::modified;
  if (text == "local") return StokesVariant::local;
  return std::nullopt;
}

RadialSymbols stokes_symbols(const StokesProblem& problem) {
  const PeriodicGrid& grid = problem.forcing.grid();
  switch (problem.variant) {
    case StokesVariant::local:
      return RadialSymbols::local(grid);
    case StokesVariant::modified:
      if (!problem.gradient) throw Error(ErrorCode::invalid_argument, "modified variant needs a gradient kernel");
      return RadialSymbols::gradient_only(grid, *problem.gradient, problem.quadrature, problem.threads)
          .modified();
    case StokesVariant::nonlocal:
      if (!problem.gradient || !problem.diffusion) {
        throw Error(ErrorCode::invalid_argument, "nonlocal variant needs diffusion and gradient kernels");
      }
      if (problem.diffusion->delta() != problem.gradient->delta()) {
        throw Error(ErrorCode::invalid_argument, "diffusion and gradient kernels must share delta");
      }
      return RadialSymbols::nonlocal(grid, *problem.diffusion, *problem.gradient, problem.quadrature,
                                     problem.threads);
  }
  throw Error(ErrorCode::invalid_argument, "unknown variant");
}

StokesSolution solve_stokes(const StokesProblem& problem) {
  if (!(problem.nu > 0.0) || !std::isfinite(problem.nu)) {
    throw Error(ErrorCode::invalid_argument, "viscosity nu must be positive");
  }
  check_zero_mean(problem.forcing, "forcing");
  return solve_stokes(problem.forcing, problem.nu, stokes_symbols(problem), problem.threads);
}

StokesSolution solve_stokes(const SpectralFieldd& forcing, double nu, const RadialSymbols& symbols,
                            int threads) {
  const PeriodicGrid& grid = forcing.grid();
  const int d = grid.dim();
  if (forcing.components() != d) {
    throw Error(ErrorCode::shape_mismatch, "forcing must be a vector field");
  }
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw Error(ErrorCode::invalid_argument, "viscosity nu must be positive");
  }
  check_zero_mean(forcing, "forcing");
  if (!symbols.covers(grid)) throw Error(ErrorCode::lattice_mismatch, "symbols do not cover the grid");
  check_gradient_symbol(grid, symbols, ErrorCode::ill_posed_kernel);

  StokesSolution sol{SpectralFieldd(grid, d), SpectralFieldd(grid, 1), {}};
  const Eigen::Index M = grid.mode_count();
  std::vector<double> residual(M, 0.0), div_local(M, 0.0), div_nonlocal(M, 0.0);
  const cd I(0.0, 1.0);

  parallel_for(std::size_t(M), threads, [&](std::size_t mi) {
    const auto m = Eigen::Index(mi);
    const int n2 = grid.norm2(m);
    if (n2 == 0) return;
    double xi_norm = 0.0;
    const SmallVec n = unit_direction(grid, m, xi_norm);
    const double lam = nu * symbols.lambda(n2);
    const double b = symbols.b(n2);
    if (!(lam > 0.0)) {
      throw IllPosedError(ErrorCode::ill_posed_kernel,
                          "ill-posed kernel at mode " + format_mode(mode_vector(grid, m)) +
                              ": momentum symbol is not positive",
                          mode_vector(grid, m));
    }
    const SmallCVec f = forcing.mode(m);
    const cd fp = n.cast<cd>().dot(f);  // dot() conjugates its left argument, which is real here
    const SmallCVec u = (f - n.cast<cd>() * fp) / lam;
    const cd p = -I * fp / b;
    sol.velocity.mode(m) = u;
    sol.pressure(0, m) = p;

    const SmallCVec r = lam * u + I * b * n.cast<cd>() * p - f;
    residual[mi] = r.norm();
    const cd nu_dot = n.cast<cd>().dot(u);
    div_local[mi] = std::abs(nu_dot) * xi_norm;
    div_nonlocal[mi] = std::abs(nu_dot * b);
  });

  for (Eigen::Index m = 0; m < M; ++m) {
    sol.diagnostics.momentum_residual = std::max(sol.diagnostics.momentum_residual, residual[m]);
    sol.diagnostics.max_local_divergence = std::max(sol.diagnostics.max_local_divergence, div_local[m]);
    sol.diagnostics.max_nonlocal_divergence =
        std::max(sol.diagnostics.max_nonlocal_divergence, div_nonlocal[m]);
  }
  return sol;
}

SpectralFieldd apply_nonlocal_operator(NonlocalOp op, const SpectralFieldd& field,
                                       const RadialSymbols& symbols) {
  const PeriodicGrid& grid = field.grid();
  const int d = grid.dim();
  const int comps = field.components();
  int out_comps = comps;
  switch (op) {
    case NonlocalOp::L:
      if (comps != 1 && comps != d) throw Error(ErrorCode::shape_mismatch, "L acts on scalar or vector fields");
      break;
    case NonlocalOp::G:
      if (comps != 1) throw Error(ErrorCode::shape_mismatch, "G maps a scalar field to a vector field");
      out_comps = d;
      break;
    case NonlocalOp::D:
      if (comps != d) throw Error(ErrorCode::shape_mismatch, "D maps a vector field to a scalar field");
      out_comps = 1;
      break;
  }
  if (!symbols.covers(grid)) throw Error(ErrorCode::lattice_mismatch, "symbols do not cover the grid");

  SpectralFieldd out(grid, out_comps);
  const cd I(0.0, 1.0);
  for (Eigen::Index m = 0; m < grid.mode_count(); ++m) {
    const int n2 = grid.norm2(m);
    if (n2 == 0) continue;
    if (op == NonlocalOp::L) {
      out.mode(m) = -symbols.lambda(n2) * field.mode(m);
      continue;
    }
    double xi_norm = 0.0;
    const SmallVec n = unit_direction(grid, m, xi_norm);
    const double b = symbols.b(n2);
    if (op == NonlocalOp::G) {
      out.mode(m) = (I * b * field(0, m)) * n.cast<cd>();
    } else {
      const SmallCVec u = field.mode(m);
      out(0, m) = I * b * n.cast<cd>().dot(u);
    }
  }
  return out;
}

SpectralFieldd apply_nonlocal_operator(NonlocalOp op, const SpectralFieldd& field,
                                       const ScaledKernel& kernel, const SymbolQuadrature& quad) {
  const bool wants_diffusion = op == NonlocalOp::L;
  if ((kernel.role() == KernelRole::diffusion) != wants_diffusion) {
    throw Error(ErrorCode::invalid_argument,
                wants_diffusion ? "L needs a diffusion kernel" : "G and D need a gradient kernel");
  }
  const auto symbols = wants_diffusion ? RadialSymbols::diffusion_only(field.grid(), kernel, quad)
                                       : RadialSymbols::gradient_only(field.grid(), kernel, quad);
  return apply_nonlocal_operator(op, field, symbols);
}

SpectralFieldd solve_pressure_poisson(const SpectralFieldd& rhs, const RadialSymbols& symbols) {
  const PeriodicGrid& grid = rhs.grid();
  if (rhs.components() != 1) throw Error(ErrorCode::shape_mismatch, "pressure rhs must be scalar");
  check_zero_mean(rhs, "pressure right-hand side");
  if (!symbols.covers(grid)) throw Error(ErrorCode::lattice_mismatch, "symbols do not cover the grid");
  check_gradient_symbol(grid, symbols, ErrorCode::ill_posed_pressure);
  SpectralFieldd p(grid, 1);
  for (Eigen::Index m = 0; m < grid.mode_count(); ++m) {
    const int n2 = grid.norm2(m);
    if (n2 == 0) continue;
    const double b = symbols.b(n2);
    p(0, m) = rhs(0, m) / (b * b);
  }
  return p;
}

SpectralFieldd solve_pressure_poisson(const SpectralFieldd& rhs, const ScaledKernel& gradient,
                                      const SymbolQuadrature& quad) {
  if (gradient.role() != KernelRole::gradient) {
    throw Error(ErrorCode::invalid_argument, "pressure Poisson solve needs a gradient kernel");
  }
  return solve_pressure_poisson(rhs, RadialSymbols::gradient_only(rhs.grid(), gradient, quad));
}

DivergenceAudit divergence_audit(const SpectralFieldd& u, const RadialSymbols& symbols) {
  const PeriodicGrid& grid = u.grid();
  if (u.components() != grid.dim()) throw Error(ErrorCode::shape_mismatch, "divergence needs a vector field");
  DivergenceAudit audit;
  for (Eigen::Index m = 0; m < grid.mode_count(); ++m) {
    const int n2 = grid.norm2(m);
    if (n2 == 0) continue;
    double xi_norm = 0.0;
    const SmallVec n = unit_direction(grid, m, xi_norm);
    const SmallCVec um = u.mode(m);
    const double proj = std::abs(n.cast<cd>().dot(um));
    audit.max_local = std::max(audit.max_local, proj * xi_norm);
    audit.max_nonlocal = std::max(audit.max_nonlocal, proj * std::abs(symbols.b(n2)));
  }
  return audit;
}

DivergenceZeroSets divergence_zero_sets(const SpectralFieldd& u, const RadialSymbols& symbols,
                                        double rel_tol) {
  const PeriodicGrid& grid = u.grid();
  if (u.components() != grid.dim()) throw Error(ErrorCode::shape_mismatch, "divergence needs a vector field");
  DivergenceZeroSets sets;
  sets.local.assign(std::size_t(grid.mode_count()), true);
  sets.nonlocal.assign(std::size_t(grid.mode_count()), true);
  for (Eigen::Index m = 0; m < grid.mode_count(); ++m) {
    const int n2 = grid.norm2(m);
    if (n2 == 0) continue;
    double xi_norm = 0.0;
    const SmallVec n = unit_direction(grid, m, xi_norm);
    const SmallCVec um = u.mode(m);
    const double mag = um.norm();
    const double proj = std::abs(n.cast<cd>().dot(um));
    const double b = std::abs(symbols.b(n2));
    sets.local[m] = proj * xi_norm <= rel_tol * xi_norm * mag;
    sets.nonlocal[m] = proj * b <= rel_tol * b * mag;
  }
  return sets;
}

namespace {

template <typename Weight>
double weighted_norm(const SpectralFieldd& field, Weight&& w) {
  const PeriodicGrid& grid = field.grid();
  double sum = 0.0;
  for (Eigen::Index m = 0; m < grid.mode_count(); ++m) {
    const double a = field.mode(m).squaredNorm();
    if (a != 0.0) sum += w(m) * a;
  }
  return std::sqrt(std::pow(2.0 * kPi, -double(grid.dim())) * sum);
}

}  // namespace

double l2_norm(const SpectralFieldd& field) {
  return weighted_norm(field, [](Eigen::Index) { return 1.0; });
}

double energy_norm(const SpectralFieldd& field, const RadialSymbols& symbols) {
  const PeriodicGrid& grid = field.grid();
  return weighted_norm(field, [&](Eigen::Index m) { return symbols.lambda(grid.norm2(m)); });
}

double field_norm(const SpectralFieldd& field, const NormSpec& norm) {
  const PeriodicGrid& grid = field.grid();
  return std::visit(
      [&](const auto& spec) -> double {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, L2Norm>) {
          return l2_norm(field);
        } else if constexpr (std::is_same_v<T, SobolevNorm>) {
          if (spec.s == 0.0) return l2_norm(field);
          return weighted_norm(field, [&](Eigen::Index m) {
            const int n2 = grid.norm2(m);
            return n2 == 0 ? 0.0 : std::pow(double(n2), spec.s);
          });
        } else {
          if (spec.diffusion.role() != KernelRole::diffusion) {
            throw Error(ErrorCode::invalid_argument, "energy norm needs a diffusion kernel");
          }
          return energy_norm(field, RadialSymbols::diffusion_only(grid, spec.diffusion, spec.quadrature));
        }
      },
      norm);
}

}  // namespace nlstokes
