#include "nlstokes/kernel.hpp"

#include "nlstokes/error.hpp"
#include "nlstokes/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace nlstokes {

std::string_view to_string(KernelRole role) noexcept {
  return role == KernelRole::diffusion ? "diffusion" : "gradient";
}

std::string_view to_string(ProfileKind kind) noexcept {
  switch (kind) {
    case ProfileKind::fractional: return "fractional";
    case ProfileKind::constant: return "constant";
    case ProfileKind::cubic_spline: return "cubic_spline";
    case ProfileKind::truncated_gaussian: return "truncated_gaussian";
    case ProfileKind::piecewise_fractional: return "piecewise_fractional";
  }
  return "unknown";
}

std::string_view to_string(Admissibility a) noexcept {
  switch (a) {
    case Admissibility::admissible: return "admissible";
    case Admissibility::inadmissible: return "inadmissible";
    case Admissibility::not_fractional: return "not_fractional";
  }
  return "unknown";
}

std::optional<KernelRole> parse_role(std::string_view text) noexcept {
  if (text == "diffusion") return KernelRole::diffusion;
  if (text == "gradient") return KernelRole::gradient;
  return std::nullopt;
}

std::optional<ProfileKind> parse_kind(std::string_view text) noexcept {
  if (text == "fractional") return ProfileKind::fractional;
  if (text == "constant") return ProfileKind::constant;
  if (text == "cubic_spline") return ProfileKind::cubic_spline;
  if (text == "truncated_gaussian") return ProfileKind::truncated_gaussian;
  if (text == "piecewise_fractional") return ProfileKind::piecewise_fractional;
  return std::nullopt;
}

namespace {

void check_amplitude(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::invalid_argument, "kernel amplitude must be finite and nonnegative");
  }
}

void check_dim(int dim) {
  if (dim < 1 || dim > 3) throw Error(ErrorCode::invalid_argument, "dimension must be 1, 2 or 3");
}

}  // namespace

RadialProfile RadialProfile::fractional(double beta, KernelRole role, double amplitude) {
  check_amplitude(amplitude);
  if (!std::isfinite(beta)) throw Error(ErrorCode::invalid_argument, "beta must be finite");
  RadialProfile p(ProfileKind::fractional, role, amplitude);
  p.beta_ = beta;
  return p;
}

RadialProfile RadialProfile::constant(KernelRole role, double amplitude) {
  check_amplitude(amplitude);
  return RadialProfile(ProfileKind::constant, role, amplitude);
}

RadialProfile RadialProfile::cubic_spline(KernelRole role, double amplitude) {
  check_amplitude(amplitude);
  return RadialProfile(ProfileKind::cubic_spline, role, amplitude);
}

RadialProfile RadialProfile::truncated_gaussian(double sigma, KernelRole role, double amplitude) {
  check_amplitude(amplitude);
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::invalid_argument, "gaussian width sigma must be positive");
  }
  RadialProfile p(ProfileKind::truncated_gaussian, role, amplitude);
  p.sigma_ = sigma;
  return p;
}

RadialProfile RadialProfile::piecewise_fractional(double beta, double epsilon, KernelRole role,
                                                  double amplitude) {
  check_amplitude(amplitude);
  if (!std::isfinite(beta)) throw Error(ErrorCode::invalid_argument, "beta must be finite");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "cutover epsilon must lie in (0, 1]");
  }
  RadialProfile p(ProfileKind::piecewise_fractional, role, amplitude);
  p.beta_ = beta;
  p.epsilon_ = epsilon;
  return p;
}

double RadialProfile::shape(double r, int dim) const {
  switch (kind_) {
    case ProfileKind::fractional:
      return std::pow(r, -double(dim) - beta_);
    case ProfileKind::constant:
      return 1.0;
    case ProfileKind::cubic_spline: {
      const double q = 2.0 * r;
      if (q < 1.0) return 1.0 - 1.5 * q * q + 0.75 * q * q * q;
      if (q < 2.0) {
        const double s = 2.0 - q;
        return 0.25 * s * s * s;
      }
      return 0.0;
    }
    case ProfileKind::truncated_gaussian:
      return std::exp(-(r * r) / (sigma_ * sigma_));
    case ProfileKind::piecewise_fractional:
      return std::pow(std::min(r, epsilon_), -double(dim) - beta_);
  }
  return 0.0;
}

double RadialProfile::operator()(double r, int dim) const {
  if (r > 1.0) return 0.0;
  return extended(r, dim);
}

double RadialProfile::extended(double r, int dim) const {
  if (!(r >= 0.0)) throw Error(ErrorCode::invalid_argument, "radius must be nonnegative");
  if (amplitude_ == 0.0) return 0.0;
  return amplitude_ * shape(r, dim);
}

double RadialProfile::weighted(double r, int dim, double power, double factor) const {
  if (r > 1.0) return 0.0;
  if (!(r >= 0.0)) throw Error(ErrorCode::invalid_argument, "radius must be nonnegative");
  if (amplitude_ == 0.0 || factor == 0.0) return 0.0;
  const bool singular = kind_ == ProfileKind::fractional || (kind_ == ProfileKind::piecewise_fractional && r < epsilon_);
  if (singular) return amplitude_ * std::exp(std::log(factor) + (power - double(dim) - beta_) * std::log(r));
  return factor * amplitude_ * shape(r, dim) * std::pow(r, power);
}

double RadialProfile::origin_power(int dim) const {
  return is_fractional() ? -double(dim) - beta_ : 0.0;
}

std::vector<double> RadialProfile::breakpoints() const {
  if (kind_ == ProfileKind::cubic_spline) return {0.5};
  if (kind_ == ProfileKind::piecewise_fractional && epsilon_ < 1.0) return {epsilon_};
  return {};
}

RadialProfile RadialProfile::with_amplitude(double amplitude) const {
  check_amplitude(amplitude);
  RadialProfile p = *this;
  p.amplitude_ = amplitude;
  return p;
}

Admissibility RadialProfile::admissibility() const noexcept {
  if (!is_fractional()) return Admissibility::not_fractional;
  if (role_ == KernelRole::gradient) {
    return (beta_ > -1.0 && beta_ < 1.0) ? Admissibility::admissible : Admissibility::inadmissible;
  }
  // diffusion kernels only need a finite second moment
  return beta_ < 2.0 ? Admissibility::admissible : Admissibility::inadmissible;
}

std::string RadialProfile::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << '(';
  switch (kind_) {
    case ProfileKind::fractional: os << "beta=" << beta_ << ", "; break;
    case ProfileKind::truncated_gaussian: os << "sigma=" << sigma_ << ", "; break;
    case ProfileKind::piecewise_fractional:
      os << "beta=" << beta_ << ", epsilon=" << epsilon_ << ", ";
      break;
    default: break;
  }
  os << "c=" << amplitude_ << ", " << to_string(role_) << ')';
  return os.str();
}

ScaledKernel::ScaledKernel(RadialProfile profile, double delta, int dim)
    : profile_(std::move(profile)), delta_(delta), dim_(dim) {
  check_dim(dim);
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::invalid_argument, "smoothing length delta must be positive");
  }
  scale_ = std::pow(delta_, -double(scaling_exponent()));
}

int ScaledKernel::scaling_exponent() const noexcept {
  return profile_.role() == KernelRole::diffusion ? dim_ + 2 : dim_ + 1;
}

double ScaledKernel::operator()(double r) const {
  if (r > delta_) return 0.0;
  return scale_ * profile_(r / delta_, dim_);
}

double ScaledKernel::extended(double r) const { return scale_ * profile_.extended(r / delta_, dim_); }

double unit_sphere_measure(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: check_dim(dim);
  }
  return 0.0;
}

double kernel_moment(const RadialProfile& profile, int dim) {
  check_dim(dim);
  const bool diffusion = profile.role() == KernelRole::diffusion;
  const int weight_power = diffusion ? dim + 1 : dim;
  const double p = profile.origin_power(dim) + weight_power;
  if (p <= -1.0) {
    throw Error(ErrorCode::divergent_moment,
                "divergent moment: " + profile.describe() + " is not integrable against r^" +
                    std::to_string(weight_power));
  }
  if (profile.amplitude() == 0.0) return 0.0;

  RadialRuleOptions opts;
  opts.panels = 8;
  if (profile.is_fractional()) {
    opts.grading = std::max(1, int(std::ceil(2.0 / (1.0 + p) - 1e-12)));
    opts.geometric_levels = 16;
  }
  const auto breaks = profile.breakpoints();
  const auto rule = graded_radial_rule<double>(opts, breaks);
  double integral = 0.0;
  for (Eigen::Index i = 0; i < rule.size(); ++i) {
    integral += profile.weighted(rule.nodes[i], dim, double(weight_power), rule.weights[i]);
  }
  const double s = unit_sphere_measure(dim);
  return diffusion ? 0.5 * s * integral : s * integral;
}

RadialProfile normalize_profile(const RadialProfile& profile, int dim) {
  if (profile.amplitude() == 0.0) {
    throw Error(ErrorCode::zero_moment, "cannot normalize a zero-amplitude profile");
  }
  const double unit = kernel_moment(profile.with_amplitude(1.0), dim);
  if (!(unit > 0.0) || !std::isfinite(unit)) {
    throw Error(ErrorCode::zero_moment, "kernel moment is not positive for " + profile.describe());
  }
  return profile.with_amplitude(double(dim) / unit);
}

double eval_scaled_kernel(const ScaledKernel& kernel, double r) {
  if (!(r >= 0.0)) throw Error(ErrorCode::invalid_argument, "radius must be nonnegative");
  return kernel(r);
}

MonotonicityReport check_gradient_monotonicity(const RadialProfile& profile, int dim,
                                               int samples) {
  check_dim(dim);
  if (profile.role() != KernelRole::gradient) {
    throw Error(ErrorCode::invalid_argument, "monotonicity audit applies to gradient kernels");
  }
  samples = std::max(samples, 2);
  auto g = [&](double r) { return std::pow(r, double(dim - 1)) * profile(r, dim); };
  auto sample = [&](int i) { return (double(i) + 0.5) / double(samples); };

  MonotonicityReport report;
  if (profile.kind() == ProfileKind::fractional) {
    // r^{d-1} c r^{-d-beta} = c r^{-1-beta}
    report.pass = profile.beta() >= -1.0 || profile.amplitude() == 0.0;
    if (!report.pass) report.violation = std::make_pair(sample(0), sample(1));
    return report;
  }
  double prev = g(sample(0));
  for (int i = 1; i < samples; ++i) {
    const double cur = g(sample(i));
    if (cur > prev * (1.0 + 1e-12) + std::numeric_limits<double>::min()) {
      report.pass = false;
      report.violation = std::make_pair(sample(i - 1), sample(i));
      return report;
    }
    prev = cur;
  }
  return report;
}

}  // namespace nlstokes
