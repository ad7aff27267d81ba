#ifndef NLSTOKES_QUADRATURE_HPP
#define NLSTOKES_QUADRATURE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace nlstokes {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Nodes and weights of a quadrature rule on some interval.
template <typename Scalar>
struct QuadratureRule {
  Vector<Scalar> nodes;
  Vector<Scalar> weights;

  [[nodiscard]] Eigen::Index size() const { return nodes.size(); }

  template <typename F>
  [[nodiscard]] Scalar integrate(F&& f) const {
    Scalar sum(0);
    for (Eigen::Index i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// n-point Gauss-Legendre rule on [-1, 1]; Newton iteration on P_n with the
/// Tricomi initial guess. Nodes are returned in increasing order.
template <typename Scalar>
QuadratureRule<Scalar> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  QuadratureRule<Scalar> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    Scalar x = std::cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
    Scalar dp(0);
    for (int iter = 0; iter < 100; ++iter) {
      Scalar p0(1), p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / Scalar(k);
        p0 = p1;
        p1 = p2;
      }
      dp = Scalar(n) * (x * p1 - p0) / (x * x - Scalar(1));
      const Scalar dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= Scalar(4) * std::numeric_limits<Scalar>::epsilon()) break;
    }
    // refresh the derivative at the converged node
    Scalar p0(1), p1 = x;
    for (int k = 2; k <= n; ++k) {
      const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / Scalar(k);
      p0 = p1;
      p1 = p2;
    }
    dp = Scalar(n) * (x * p1 - p0) / (x * x - Scalar(1));
    const Scalar w = Scalar(2) / ((Scalar(1) - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = Scalar(0);
  return rule;
}

/// Composite rule: `base` (on [-1,1]) mapped onto every panel between
/// consecutive entries of the sorted `breaks`.
template <typename Scalar>
QuadratureRule<Scalar> composite_rule(std::span<const Scalar> breaks,
                                      const QuadratureRule<Scalar>& base) {
  QuadratureRule<Scalar> rule;
  const Eigen::Index panels = breaks.size() < 2 ? 0 : Eigen::Index(breaks.size() - 1);
  const Eigen::Index m = base.size();
  rule.nodes.resize(panels * m);
  rule.weights.resize(panels * m);
  for (Eigen::Index p = 0; p < panels; ++p) {
    const Scalar a = breaks[p];
    const Scalar b = breaks[p + 1];
    const Scalar mid = Scalar(0.5) * (a + b);
    const Scalar half = Scalar(0.5) * (b - a);
    rule.nodes.segment(p * m, m) = (mid + half * base.nodes.array()).matrix();
    rule.weights.segment(p * m, m) = half * base.weights;
  }
  return rule;
}

/// Options for a rule on the unit radial interval (0, 1].
struct RadialRuleOptions {
  int panels = 8;            ///< uniform panels in the graded variable t
  int grading = 1;           ///< r = t^grading
  int geometric_levels = 0;  ///< dyadic refinement of the first panel toward t = 0
  int nodes_per_panel = 32;
};

/// Composite Gauss-Legendre rule for integrals over r in (0, 1] with a
/// possible power-type singularity at r = 0. The substitution r = t^q with
/// uniform panels in t is used; `interior_breaks` (values of r in (0,1)) are
/// added as panel boundaries so that kinks of the integrand are not straddled.
template <typename Scalar>
QuadratureRule<Scalar> graded_radial_rule(const RadialRuleOptions& opts,
                                          std::span<const Scalar> interior_breaks = {}) {
  const int q = std::max(1, opts.grading);
  const int panels = std::max(1, opts.panels);
  std::vector<Scalar> t_breaks;
  t_breaks.reserve(panels + 1 + interior_breaks.size() + opts.geometric_levels);
  for (int k = 0; k <= panels; ++k) t_breaks.push_back(Scalar(k) / Scalar(panels));
  for (Scalar r : interior_breaks) {
    if (r > Scalar(0) && r < Scalar(1)) t_breaks.push_back(std::pow(r, Scalar(1) / Scalar(q)));
  }
  Scalar first = Scalar(1) / Scalar(panels);
  for (int j = 1; j <= opts.geometric_levels; ++j) {
    t_breaks.push_back(first * std::ldexp(Scalar(1), -j));
  }
  std::sort(t_breaks.begin(), t_breaks.end());
  t_breaks.erase(std::unique(t_breaks.begin(), t_breaks.end()), t_breaks.end());

  const auto base = gauss_legendre<Scalar>(opts.nodes_per_panel);
  QuadratureRule<Scalar> rule = composite_rule<Scalar>(t_breaks, base);
  if (q > 1) {
    for (Eigen::Index i = 0; i < rule.size(); ++i) {
      const Scalar t = rule.nodes[i];
      const Scalar tq1 = std::pow(t, Scalar(q - 1));
      rule.weights[i] *= Scalar(q) * tq1;
      rule.nodes[i] = tq1 * t;
    }
  }
  return rule;
}

}  // namespace nlstokes

#endif  // NLSTOKES_QUADRATURE_HPP
