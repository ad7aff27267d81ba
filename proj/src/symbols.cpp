#include "nlstokes/symbols.hpp"

#include "nlstokes/error.hpp"
#include "nlstokes/parallel.hpp"
#include "nlstokes/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace nlstokes {

namespace {

constexpr double kPi = std::numbers::pi;

enum class SymbolKind { lambda, b };

/// Power of r of the radial integrand near the origin, counting the r^{d-1}
/// Jacobian and the leading power supplied by (1 - cos) or sin.
double integrand_origin_power(const ScaledKernel& k, SymbolKind kind) {
  const int d = k.dim();
  const double oscillatory = kind == SymbolKind::lambda ? 2.0 : 1.0;
  return k.profile().origin_power(d) + double(d - 1) + oscillatory;
}

struct AngularRule {
  Eigen::VectorXd weight;  // includes the dimension-dependent angular factor
  Eigen::VectorXd cosine;
};

AngularRule angular_rule(int dim, SymbolKind kind, int panels, int nodes) {
  std::vector<double> breaks(panels + 1);
  for (int p = 0; p <= panels; ++p) breaks[p] = 0.5 * kPi * double(p) / double(panels);
  const auto rule = composite_rule<double>(breaks, gauss_legendre<double>(nodes));
  AngularRule out;
  out.weight.resize(rule.size());
  out.cosine.resize(rule.size());
  for (Eigen::Index i = 0; i < rule.size(); ++i) {
    const double phi = rule.nodes[i];
    const double c = std::cos(phi);
    double factor = 1.0;
    if (dim == 2) {
      factor = 4.0 * (kind == SymbolKind::b ? c : 1.0);
    } else {
      factor = 4.0 * kPi * std::sin(phi) * (kind == SymbolKind::b ? c : 1.0);
    }
    out.weight[i] = rule.weights[i] * factor;
    out.cosine[i] = c;
  }
  return out;
}

double evaluate_once(const ScaledKernel& k, double xi, SymbolKind kind, int radial_panels,
                     int angular_panels, const SymbolQuadrature& quad, int grading) {
  const int d = k.dim();
  const double delta = k.delta();

  RadialRuleOptions opts;
  opts.panels = radial_panels;
  opts.grading = grading;
  opts.nodes_per_panel = quad.radial_nodes;
  opts.geometric_levels = k.profile().is_fractional() ? quad.geometric_levels : 0;
  const auto breaks = k.profile().breakpoints();
  const auto rule = graded_radial_rule<double>(opts, breaks);

  const Eigen::Index n = rule.size();
  Eigen::VectorXd r(n), w(n);
  // r^{d-1} k(r) = delta^{d-1} scale t^{d-1} w(t) with r = delta t
  const double factor = std::pow(delta, double(d - k.scaling_exponent()));
  for (Eigen::Index i = 0; i < n; ++i) {
    r[i] = delta * rule.nodes[i];
    w[i] = factor * k.profile().weighted(rule.nodes[i], d, double(d - 1), rule.weights[i]);
  }

  auto radial_sum = [&](double scaled_xi) {
    double s = 0.0;
    if (kind == SymbolKind::lambda) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double h = std::sin(0.5 * r[i] * scaled_xi);
        s += w[i] * 2.0 * h * h;  // 1 - cos(x) without cancellation
      }
    } else {
      for (Eigen::Index i = 0; i < n; ++i) s += w[i] * std::sin(r[i] * scaled_xi);
    }
    return s;
  };

  if (d == 1) return 2.0 * radial_sum(xi);

  const auto ang = angular_rule(d, kind, angular_panels, quad.angular_nodes);
  double total = 0.0;
  for (Eigen::Index j = 0; j < ang.weight.size(); ++j) {
    total += ang.weight[j] * radial_sum(ang.cosine[j] * xi);
  }
  return total;
}

double evaluate_symbol(const ScaledKernel& k, double xi, SymbolKind kind,
                       const SymbolQuadrature& quad) {
  const KernelRole expected = kind == SymbolKind::lambda ? KernelRole::diffusion : KernelRole::gradient;
  if (k.role() != expected) {
    throw Error(ErrorCode::invalid_argument,
                kind == SymbolKind::lambda ? "lambda_symbol needs a diffusion kernel"
                                           : "b_symbol needs a gradient kernel");
  }
  if (!(xi >= 0.0) || !std::isfinite(xi)) {
    throw Error(ErrorCode::invalid_argument, "wavenumber must be finite and nonnegative");
  }
  if (xi == 0.0) return 0.0;
  if (integrand_origin_power(k, kind) <= -1.0) {
    throw Error(ErrorCode::divergent_moment,
                "divergent moment: symbol integral of " + k.profile().describe() + " diverges");
  }

  const double a = k.delta() * xi;
  const int base_radial = int(std::ceil(std::max(double(quad.min_panels), 2.0 * a / kPi)));
  const int base_angular = int(std::ceil(std::max(1.0, a / 60.0)));
  const double scale = kind == SymbolKind::lambda ? std::max(1.0, xi * xi) : std::max(1.0, xi);
  const double tol = quad.rel_tolerance * scale;
  const int grading = radial_grading(k);

  double previous = 0.0;
  double current = evaluate_once(k, xi, kind, base_radial, base_angular, quad, grading);
  for (int level = 1; level <= std::max(1, quad.max_refinements); ++level) {
    const int factor = 1 << level;
    previous = current;
    current = evaluate_once(k, xi, kind, base_radial * factor, base_angular * factor, quad, grading);
    if (std::abs(current - previous) <= tol) return current;
  }
  std::ostringstream os;
  os.precision(17);
  os << "symbol quadrature did not converge at xi=" << xi << " for " << k.profile().describe()
     << "; last estimates " << previous << " and " << current;
  throw QuadratureError(os.str(), previous, current);
}

}  // namespace

int radial_grading(const ScaledKernel& kernel) {
  const RadialProfile& p = kernel.profile();
  if (!p.is_fractional()) return 1;
  const double beta = p.beta();
  double q = 1.0;
  if (beta < 1.0) {
    q = std::ceil(2.0 / (1.0 - beta) - 1e-12);
  } else if (kernel.role() == KernelRole::diffusion && beta < 2.0) {
    q = std::ceil(2.0 / (2.0 - beta) - 1e-12);
  }
  return std::max(1, int(q));
}

double lambda_symbol(const ScaledKernel& diffusion, double xi, const SymbolQuadrature& quad) {
  return evaluate_symbol(diffusion, xi, SymbolKind::lambda, quad);
}

double b_symbol(const ScaledKernel& gradient, double xi, const SymbolQuadrature& quad) {
  return evaluate_symbol(gradient, xi, SymbolKind::b, quad);
}

ScanReport scan_b_zero_crossings(const ScaledKernel& gradient, double xi_max, int resolution,
                                 double bracket_tolerance, const SymbolQuadrature& quad,
                                 int threads) {
  if (resolution < 64) throw Error(ErrorCode::invalid_argument, "scan resolution must be >= 64");
  if (!(xi_max > 0.0)) throw Error(ErrorCode::invalid_argument, "xi_max must be positive");
  if (!(bracket_tolerance > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "bracket tolerance must be positive");
  }

  std::vector<double> xs(resolution), bs(resolution);
  for (int k = 0; k < resolution; ++k) xs[k] = xi_max * double(k + 1) / double(resolution);
  parallel_for(xs.size(), threads, [&](std::size_t k) { bs[k] = b_symbol(gradient, xs[k], quad); });

  ScanReport report;
  report.samples = resolution;
  report.min_b = bs[0];
  report.argmin_xi = xs[0];
  for (int k = 1; k < resolution; ++k) {
    if (bs[k] < report.min_b) {
      report.min_b = bs[k];
      report.argmin_xi = xs[k];
    }
  }

  std::vector<std::pair<int, int>> sign_changes;
  for (int k = 0; k + 1 < resolution; ++k) {
    if (bs[k] == 0.0) {
      report.crossings.push_back({xs[k], xs[k], 0.0, 0.0});
    } else if ((bs[k] < 0.0) != (bs[k + 1] < 0.0) && bs[k + 1] != 0.0) {
      sign_changes.emplace_back(k, k + 1);
    }
  }
  if (bs[resolution - 1] == 0.0) report.crossings.push_back({xs.back(), xs.back(), 0.0, 0.0});

  std::vector<Bracket> refined(sign_changes.size());
  parallel_for(sign_changes.size(), threads, [&](std::size_t i) {
    auto [k0, k1] = sign_changes[i];
    Bracket br{xs[k0], xs[k1], bs[k0], bs[k1]};
    while (br.hi - br.lo > bracket_tolerance) {
      const double mid = 0.5 * (br.lo + br.hi);
      const double bm = b_symbol(gradient, mid, quad);
      if (bm == 0.0) {
        br = {mid, mid, 0.0, 0.0};
        break;
      }
      if ((bm < 0.0) == (br.b_lo < 0.0)) {
        br.lo = mid;
        br.b_lo = bm;
      } else {
        br.hi = mid;
        br.b_hi = bm;
      }
    }
    refined[i] = br;
  });
  report.crossings.insert(report.crossings.end(), refined.begin(), refined.end());
  std::sort(report.crossings.begin(), report.crossings.end(),
            [](const Bracket& x, const Bracket& y) { return x.lo < y.lo; });

  for (int k = 1; k + 1 < resolution; ++k) {
    const bool local_min = bs[k] <= bs[k - 1] && bs[k] <= bs[k + 1];
    if (local_min && bs[k] > 0.0 && bs[k] < 1e-8) report.near_zeros.push_back({xs[k], bs[k]});
  }
  return report;
}

std::vector<double> uniform_grid(double xi_min, double xi_max, int samples) {
  if (samples < 2 || !(xi_max > xi_min)) {
    throw Error(ErrorCode::invalid_argument, "uniform grid needs samples >= 2 and xi_max > xi_min");
  }
  std::vector<double> grid(samples);
  for (int k = 0; k < samples; ++k) {
    grid[k] = xi_min + (xi_max - xi_min) * double(k) / double(samples - 1);
  }
  return grid;
}

SymbolTable symbol_table(const ScaledKernel& diffusion, const ScaledKernel& gradient,
                         std::span<const double> xi_grid, const SymbolQuadrature& quad,
                         int threads) {
  if (diffusion.dim() != gradient.dim() || diffusion.delta() != gradient.delta()) {
    throw Error(ErrorCode::invalid_argument, "symbol table kernels must share dim and delta");
  }
  for (std::size_t i = 0; i < xi_grid.size(); ++i) {
    if (!(xi_grid[i] > 0.0) || (i > 0 && !(xi_grid[i] > xi_grid[i - 1]))) {
      throw Error(ErrorCode::invalid_argument, "symbol grid must be positive and strictly increasing");
    }
  }
  SymbolTable table;
  table.dim = gradient.dim();
  table.delta = gradient.delta();
  table.quadrature = quad;
  table.diffusion_grading = radial_grading(diffusion);
  table.gradient_grading = radial_grading(gradient);
  const auto n = Eigen::Index(xi_grid.size());
  table.xi = Eigen::Map<const Eigen::VectorXd>(xi_grid.data(), n);
  table.lambda.resize(n);
  table.b.resize(n);
  parallel_for(xi_grid.size(), threads, [&](std::size_t i) {
    table.lambda[Eigen::Index(i)] = lambda_symbol(diffusion, xi_grid[i], quad);
    table.b[Eigen::Index(i)] = b_symbol(gradient, xi_grid[i], quad);
  });
  return table;
}

}  // namespace nlstokes
