#include "nlstokes/realspace.hpp"

#include "nlstokes/error.hpp"
#include "nlstokes/parallel.hpp"
#include "nlstokes/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nlstokes {

namespace {

constexpr double kPi = std::numbers::pi;

struct Interval {
  double lo;
  double hi;
};

/// Folds [lo, hi] onto [0, inf) by the reflection x -> -x.
std::vector<Interval> fold(double lo, double hi) {
  if (lo >= 0.0) return {{lo, hi}};
  if (hi <= 0.0) return {{-hi, -lo}};
  return {{0.0, -lo}, {0.0, hi}};
}

/// int_0^x sqrt(R^2 - t^2) dt for 0 <= x <= R.
double arc_area(double x, double R) {
  const double s = std::sqrt(std::max(R * R - x * x, 0.0));
  return 0.5 * (x * s + R * R * std::asin(std::min(x / R, 1.0)));
}

/// Area of [0, x] x [0, y] inside the disc of radius R (x, y >= 0).
double corner_area(double x, double y, double R) {
  const double xc = std::min(x, R);
  if (xc <= 0.0 || y <= 0.0) return 0.0;
  if (y >= R) return arc_area(xc, R);
  const double t = std::sqrt(R * R - y * y);
  if (xc <= t) return y * xc;
  return y * t + arc_area(xc, R) - arc_area(t, R);
}

double quadrant_rect_area(Interval x, Interval y, double R) {
  return corner_area(x.hi, y.hi, R) - corner_area(x.lo, y.hi, R) - corner_area(x.hi, y.lo, R) +
         corner_area(x.lo, y.lo, R);
}

double rect_disc_area(Interval x, Interval y, double R) {
  if (R <= 0.0) return 0.0;
  double a = 0.0;
  for (const auto& fx : fold(x.lo, x.hi)) {
    for (const auto& fy : fold(y.lo, y.hi)) a += quadrant_rect_area(fx, fy, R);
  }
  return std::max(a, 0.0);
}

double box_ball_volume(Interval x, Interval y, Interval z, double R) {
  // x -> (3x - x^3)/2 flattens the (z - z_b)^{3/2} and sqrt(R - z) endpoint terms of the slice area
  static const auto base = [] {
    auto r = gauss_legendre<double>(24);
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      const double x = r.nodes[i];
      r.weights[i] *= 1.5 * (1.0 - x * x);
      r.nodes[i] = 0.5 * x * (3.0 - x * x);
    }
    return r;
  }();
  double total = 0.0;
  for (const auto& fz : fold(z.lo, z.hi)) {
    const double z0 = fz.lo;
    const double z1 = std::min(fz.hi, R);
    if (z1 <= z0) continue;
    // slice area is smooth between heights where the slice circle meets a box edge or corner
    std::vector<double> radii;
    for (const auto& fx : fold(x.lo, x.hi)) {
      for (const auto& fy : fold(y.lo, y.hi)) {
        for (double a : {fx.lo, fx.hi}) {
          radii.push_back(a);
          for (double b : {fy.lo, fy.hi}) radii.push_back(std::hypot(a, b));
        }
        for (double b : {fy.lo, fy.hi}) radii.push_back(b);
      }
    }
    std::vector<double> breaks{z0, z1};
    for (double rho : radii) {
      if (rho < R) {
        const double zb = std::sqrt(R * R - rho * rho);
        if (zb > z0 && zb < z1) breaks.push_back(zb);
      }
    }
    std::sort(breaks.begin(), breaks.end());
    const auto rule = composite_rule<double>(breaks, base);
    total += rule.integrate([&](double zz) { return rect_disc_area(x, y, std::sqrt(std::max(R * R - zz * zz, 0.0))); });
  }
  return total;
}

void check_preconditions(const ScaledKernel& kernel, const PeriodicGrid& grid) {
  if (kernel.dim() != grid.dim()) throw Error(ErrorCode::invalid_argument, "kernel dimension does not match the lattice");
  if (kernel.delta() >= kPi) {
    throw Error(ErrorCode::invalid_argument, "delta must be below pi so the ball fits the periodic cell");
  }
  if (grid.spacing() > kernel.delta()) {
    throw Error(ErrorCode::invalid_argument, "lattice spacing h exceeds delta");
  }
}

}  // namespace

double box_ball_measure(std::span<const double> lo, std::span<const double> hi, double R) {
  if (lo.size() != hi.size() || lo.empty() || lo.size() > 3) {
    throw Error(ErrorCode::invalid_argument, "box must have 1 to 3 matching bounds");
  }
  if (!(R > 0.0)) return 0.0;
  const Interval x{lo[0], hi[0]};
  switch (lo.size()) {
    case 1: return std::max(0.0, std::min(x.hi, R) - std::max(x.lo, -R));
    case 2: return rect_disc_area(x, {lo[1], hi[1]}, R);
    default: return box_ball_volume(x, {lo[1], hi[1]}, {lo[2], hi[2]}, R);
  }
}

LatticeField::LatticeField(PeriodicGrid g, Eigen::MatrixXd v) : grid(std::move(g)), values(std::move(v)) {
  if (values.cols() != grid.point_count()) {
    throw Error(ErrorCode::shape_mismatch, "lattice field has the wrong number of points");
  }
}

LatticeField LatticeField::sample(const PeriodicGrid& grid, int components,
                                  const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& fn) {
  LatticeField f(grid, components);
  for (Eigen::Index j = 0; j < grid.point_count(); ++j) f.values.col(j) = fn(grid.point(j));
  return f;
}

Stencil build_stencil(const ScaledKernel& kernel, const PeriodicGrid& grid) {
  check_preconditions(kernel, grid);
  const int d = grid.dim();
  const double h = grid.spacing();
  const double delta = kernel.delta();
  const int reach = int(std::ceil(delta / h + 0.5 * std::sqrt(double(d))));
  Stencil st;
  st.dim = d;
  st.h = h;
  std::array<int, 3> m{};
  const int side = 2 * reach + 1;
  int total = 1;
  for (int a = 0; a < d; ++a) total *= side;
  std::array<double, 3> lo{}, hi{};
  for (int idx = 0; idx < total; ++idx) {
    int rest = idx;
    bool origin = true;
    double r2 = 0.0;
    for (int a = d - 1; a >= 0; --a) {
      m[a] = rest % side - reach;
      rest /= side;
      origin = origin && m[a] == 0;
      lo[a] = (double(m[a]) - 0.5) * h;
      hi[a] = (double(m[a]) + 0.5) * h;
      r2 += double(m[a]) * double(m[a]);
    }
    if (origin) continue;
    const double measure = box_ball_measure(std::span(lo.data(), d), std::span(hi.data(), d), delta);
    if (measure <= 0.0) continue;
    const double dist = std::sqrt(r2) * h;
    const double w = kernel.extended(dist) * measure;
    if (w == 0.0) continue;
    st.entries.push_back({m, dist, w});
  }
  if (st.entries.empty()) throw Error(ErrorCode::empty_stencil, "empty stencil: no lattice offsets inside the ball");
  return st;
}

RealspaceResult apply_operator_realspace(NonlocalOp op, const LatticeField& field, const ScaledKernel& kernel,
                                         DivergenceForm form, int threads) {
  const PeriodicGrid& grid = field.grid;
  const int d = grid.dim();
  const int comps = field.components();
  int out_comps = comps;
  switch (op) {
    case NonlocalOp::L:
      if (kernel.role() != KernelRole::diffusion) throw Error(ErrorCode::invalid_argument, "L needs a diffusion kernel");
      if (comps != 1 && comps != d) throw Error(ErrorCode::shape_mismatch, "L acts on scalar or vector fields");
      break;
    case NonlocalOp::G:
      if (kernel.role() != KernelRole::gradient) throw Error(ErrorCode::invalid_argument, "G needs a gradient kernel");
      if (comps != 1) throw Error(ErrorCode::shape_mismatch, "G maps a scalar field to a vector field");
      out_comps = d;
      break;
    case NonlocalOp::D:
      if (kernel.role() != KernelRole::gradient) throw Error(ErrorCode::invalid_argument, "D needs a gradient kernel");
      if (comps != d) throw Error(ErrorCode::shape_mismatch, "D maps a vector field to a scalar field");
      out_comps = 1;
      break;
  }
  const Stencil st = build_stencil(kernel, grid);

  RealspaceResult result{LatticeField(grid, out_comps), {}};
  const auto& prof = kernel.profile();
  if (prof.is_fractional() && prof.beta() >= 0.0) {
    result.warnings.push_back("fractional kernel with beta >= 0: the lattice sum is dominated by nearest "
                              "neighbours and depends strongly on h");
  }

  const int N = grid.N();
  const std::size_t E = st.entries.size();
  Eigen::MatrixXd dir(d, Eigen::Index(E));
  for (std::size_t e = 0; e < E; ++e) {
    for (int a = 0; a < d; ++a) dir(a, Eigen::Index(e)) = double(st.entries[e].offset[a]) * st.h / st.entries[e].distance;
  }
  const double sign = form == DivergenceForm::plus ? 1.0 : -1.0;
  const Eigen::MatrixXd& in = field.values;
  Eigen::MatrixXd& out = result.field.values;

  parallel_for(std::size_t(grid.point_count()), threads, [&](std::size_t pj) {
    std::array<int, 3> c{};
    auto rest = Eigen::Index(pj);
    for (int a = d - 1; a >= 0; --a) {
      c[a] = int(rest % N);
      rest /= N;
    }
    const auto j = Eigen::Index(pj);
    for (std::size_t e = 0; e < E; ++e) {
      const auto& en = st.entries[e];
      Eigen::Index nb = 0;
      for (int a = 0; a < d; ++a) nb = nb * N + (c[a] + en.offset[a] + 2 * N) % N;
      const double w = en.weight;
      switch (op) {
        case NonlocalOp::L:
          out.col(j) += w * (in.col(nb) - in.col(j));
          break;
        case NonlocalOp::G:
          out.col(j) += (w * (in(0, nb) - in(0, j))) * dir.col(Eigen::Index(e));
          break;
        case NonlocalOp::D:
          out(0, j) += w * dir.col(Eigen::Index(e)).dot(in.col(nb) + sign * in.col(j));
          break;
      }
    }
  });
  return result;
}

double adjointness_residual(const LatticeField& u, const LatticeField& p, const ScaledKernel& gradient, int threads) {
  if (!(u.grid == p.grid)) throw Error(ErrorCode::lattice_mismatch, "u and p live on different lattices");
  const double cell = std::pow(u.grid.spacing(), double(u.grid.dim()));
  const auto Gp = apply_operator_realspace(NonlocalOp::G, p, gradient, DivergenceForm::plus, threads);
  const auto Du = apply_operator_realspace(NonlocalOp::D, u, gradient, DivergenceForm::plus, threads);
  const double pair = cell * ((u.values.array() * Gp.field.values.array()).sum() +
                              (Du.field.values.array() * p.values.array()).sum());
  const double nu = std::sqrt(cell * u.values.squaredNorm());
  const double np = std::sqrt(cell * p.values.squaredNorm());
  return std::abs(pair) / (nu * np + 1e-300);
}

double planewave_symbol_check(NonlocalOp op, const ScaledKernel& kernel, std::span<const int> xi, int N,
                              const SymbolQuadrature& quad, int threads) {
  const PeriodicGrid grid(kernel.dim(), N);
  if (!grid.index_of(xi)) throw Error(ErrorCode::lattice_mismatch, "wavevector is not retained on the lattice");
  check_preconditions(kernel, grid);
  const int d = grid.dim();
  Eigen::VectorXd k(d);
  for (int a = 0; a < d; ++a) k[a] = xi[a];
  const double kn = k.norm();
  if (kn == 0.0) return 0.0;
  const Eigen::VectorXd n = k / kn;

  if (op == NonlocalOp::L) {
    const double lam = lambda_symbol(kernel, kn, quad);
    const auto u = LatticeField::sample(grid, 1, [&](const Eigen::VectorXd& x) {
      return Eigen::VectorXd::Constant(1, std::cos(k.dot(x)));
    });
    const auto Lu = apply_operator_realspace(op, u, kernel, DivergenceForm::plus, threads);
    double dev = 0.0;
    for (Eigen::Index j = 0; j < grid.point_count(); ++j) {
      dev = std::max(dev, std::abs(Lu.field.values(0, j) + lam * u.values(0, j)));
    }
    return dev / std::abs(lam);
  }

  const double b = b_symbol(kernel, kn, quad);
  const int comps = op == NonlocalOp::G ? 1 : d;
  const auto in = LatticeField::sample(grid, comps, [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const double s = std::sin(k.dot(x));
    if (comps == 1) return Eigen::VectorXd::Constant(1, s);
    return n * s;
  });
  const auto res = apply_operator_realspace(op, in, kernel, DivergenceForm::plus, threads);
  double dev = 0.0;
  for (Eigen::Index j = 0; j < grid.point_count(); ++j) {
    const double c = std::cos(k.dot(grid.point(j)));
    if (op == NonlocalOp::G) {
      dev = std::max(dev, (res.field.values.col(j) - b * c * n).norm());
    } else {
      dev = std::max(dev, std::abs(res.field.values(0, j) - b * c));
    }
  }
  return dev / std::abs(b);
}

}  // namespace nlstokes
