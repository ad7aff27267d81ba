#include "nlstokes/grid1d.hpp"

#include "nlstokes/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace nlstokes {

std::string_view to_string(Layout layout) noexcept {
  return layout == Layout::regular ? "regular" : "staggered";
}

std::optional<Layout> parse_layout(std::string_view text) noexcept {
  if (text == "regular") return Layout::regular;
  if (text == "staggered") return Layout::staggered;
  return std::nullopt;
}

std::string_view to_string(GridVerdict v) noexcept {
  return v == GridVerdict::stable ? "stable" : "rank-deficient";
}

int Discretization1D::horizon_cells() const noexcept { return int(std::floor(delta / h + 1e-12)); }

namespace {

/// sin(pi p / q) for integers, with the argument folded into [0, pi/2].
double sin_pi_ratio(long long p, long long q) {
  const long long period = 2 * q;
  p %= period;
  if (p < 0) p += period;
  double sign = 1.0;
  if (p >= q) {
    p -= q;
    sign = -1.0;
  }
  if (2 * p > q) p = q - p;
  if (p == 0) return 0.0;
  if (2 * p == q) return sign;
  return sign * std::sin(std::numbers::pi * double(p) / double(q));
}

}  // namespace

Discretization1D build_weights(const RadialProfile& gradient, double delta, double h, Layout layout) {
  if (gradient.role() != KernelRole::gradient) {
    throw Error(ErrorCode::invalid_argument, "grid weights need a gradient kernel");
  }
  if (!(h > 0.0) || !(delta > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "spacing and delta must be positive");
  }
  const ScaledKernel k(gradient, delta, 1);
  Discretization1D disc;
  disc.h = h;
  disc.delta = delta;
  disc.layout = layout;
  // tiny slack so that delta = r h lands on r cells despite rounding
  const double cells = delta / h + 1e-12;
  if (layout == Layout::regular) {
    const int r = int(std::floor(cells));
    if (r < 1) throw Error(ErrorCode::empty_stencil, "empty stencil: regular layout needs delta >= h");
    for (int j = 1; j <= r; ++j) {
      disc.offsets.push_back(double(j));
      disc.weights.push_back(k(std::min(j * h, delta)) * h);
    }
  } else {
    if (cells < 0.5) throw Error(ErrorCode::empty_stencil, "empty stencil: staggered layout needs delta >= h/2");
    // midpoint rule on the cells [j h, (j+1) h] covering [0, delta]; the last one is clipped at delta
    const int count = int(std::ceil(delta / h - 1e-12));
    for (int j = 0; j < count; ++j) {
      const double length = std::min((j + 1) * h, delta) - j * h;
      disc.offsets.push_back(double(j) + 0.5);
      disc.weights.push_back(k.extended((j + 0.5) * h) * length);
    }
  }
  return disc;
}

Discretization1D build_weights(const RadialProfile& gradient, double delta, int N, Layout layout) {
  if (N < 2 || N % 2 != 0) throw Error(ErrorCode::invalid_argument, "N must be even and positive");
  Discretization1D disc = build_weights(gradient, delta, 2.0 * std::numbers::pi / double(N), layout);
  disc.N = N;
  return disc;
}

double first_moment(const Discretization1D& disc) {
  double s = 0.0;
  for (std::size_t k = 0; k < disc.weights.size(); ++k) s += disc.weights[k] * disc.offsets[k] * disc.h;
  return 2.0 * s;
}

double discrete_gradient_symbol(const Discretization1D& disc, int n) {
  double s = 0.0;
  for (std::size_t k = 0; k < disc.weights.size(); ++k) {
    double sine = 0.0;
    if (disc.N > 0) {
      // n * offset * 2 pi / N = pi * (2 n offset) / N, with 2 offset an integer
      const auto twice = static_cast<long long>(std::llround(2.0 * disc.offsets[k]));
      sine = sin_pi_ratio(static_cast<long long>(n) * twice, disc.N);
    } else {
      sine = std::sin(double(n) * disc.offsets[k] * disc.h);
    }
    s += disc.weights[k] * sine;
  }
  return 2.0 * s;
}

NyquistReport nyquist_audit(const Discretization1D& disc) {
  if (disc.N <= 0) throw Error(ErrorCode::invalid_argument, "Nyquist audit needs a lattice size N");
  NyquistReport report;
  report.min_abs = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= disc.N / 2; ++n) {
    const double v = std::abs(discrete_gradient_symbol(disc, n));
    if (v < report.min_abs) {
      report.min_abs = v;
      report.argmin = n;
    }
    report.max_abs = std::max(report.max_abs, v);
  }
  report.verdict = report.min_abs < 1e-12 * report.max_abs ? GridVerdict::rank_deficient : GridVerdict::stable;
  return report;
}

}  // namespace nlstokes
