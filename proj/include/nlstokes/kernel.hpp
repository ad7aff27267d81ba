#ifndef NLSTOKES_KERNEL_HPP
#define NLSTOKES_KERNEL_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nlstokes {

/// Which operator a radial kernel feeds: the diffusion operator L (rescaled
/// with exponent d+2) or the gradient/divergence pair G, D (exponent d+1).
enum class KernelRole { diffusion, gradient };

enum class ProfileKind {
  fractional,
  constant,
  cubic_spline,
  truncated_gaussian,
  piecewise_fractional,
};

enum class Admissibility {
  admissible,    ///< fractional gradient profile with beta in (-1, 1)
  inadmissible,  ///< fractional gradient profile outside (-1, 1); still evaluable
  not_fractional,
};

std::string_view to_string(KernelRole role) noexcept;
std::string_view to_string(ProfileKind kind) noexcept;
std::string_view to_string(Admissibility a) noexcept;
std::optional<KernelRole> parse_role(std::string_view text) noexcept;
std::optional<ProfileKind> parse_kind(std::string_view text) noexcept;

/// A radial interaction profile on [0, 1] with amplitude c.
///
/// Fractional profiles are c * r^(-d-beta); the dimension enters the
/// exponent, so evaluation always takes d. PiecewiseFractional is fractional
/// on (0, epsilon) and continues with the constant value it reaches at
/// epsilon. CubicSpline is the M4 B-spline compressed onto [0, 1].
class RadialProfile {
 public:
  static RadialProfile fractional(double beta, KernelRole role, double amplitude = 1.0);
  static RadialProfile constant(KernelRole role, double amplitude = 1.0);
  static RadialProfile cubic_spline(KernelRole role, double amplitude = 1.0);
  static RadialProfile truncated_gaussian(double sigma, KernelRole role, double amplitude = 1.0);
  static RadialProfile piecewise_fractional(double beta, double epsilon, KernelRole role,
                                            double amplitude = 1.0);

  /// Profile value at r; exactly 0 for r > 1.
  [[nodiscard]] double operator()(double r, int dim) const;

  /// Profile formula without the support cutoff at r = 1 (clamped at 0).
  [[nodiscard]] double extended(double r, int dim) const;

  /// factor r^power times the profile, combined in log space near a singular
  /// origin so a tiny r with a tiny factor cannot overflow. factor must be >= 0.
  [[nodiscard]] double weighted(double r, int dim, double power, double factor = 1.0) const;

  /// Exponent p with profile ~ r^p as r -> 0 (0 for bounded kinds).
  [[nodiscard]] double origin_power(int dim) const;

  /// Points in (0, 1) where the profile or one of its low derivatives jumps.
  [[nodiscard]] std::vector<double> breakpoints() const;

  [[nodiscard]] RadialProfile with_amplitude(double amplitude) const;

  [[nodiscard]] ProfileKind kind() const noexcept { return kind_; }
  [[nodiscard]] KernelRole role() const noexcept { return role_; }
  [[nodiscard]] double amplitude() const noexcept { return amplitude_; }
  [[nodiscard]] double beta() const noexcept { return beta_; }
  [[nodiscard]] double sigma() const noexcept { return sigma_; }
  [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
  [[nodiscard]] bool is_fractional() const noexcept {
    return kind_ == ProfileKind::fractional || kind_ == ProfileKind::piecewise_fractional;
  }
  [[nodiscard]] Admissibility admissibility() const noexcept;

  [[nodiscard]] std::string describe() const;

 private:
  RadialProfile(ProfileKind kind, KernelRole role, double amplitude)
      : kind_(kind), role_(role), amplitude_(amplitude) {}

  [[nodiscard]] double shape(double r, int dim) const;

  ProfileKind kind_;
  KernelRole role_;
  double amplitude_;
  double beta_ = 0.0;
  double sigma_ = 1.0;
  double epsilon_ = 1.0;
};

/// A profile rescaled to smoothing length delta in dimension d.
class ScaledKernel {
 public:
  ScaledKernel(RadialProfile profile, double delta, int dim);

  /// delta^-(d+2) w(r/delta) (diffusion) or delta^-(d+1) w(r/delta) (gradient).
  [[nodiscard]] double operator()(double r) const;

  /// Same scaling applied to the profile without its support cutoff.
  [[nodiscard]] double extended(double r) const;

  [[nodiscard]] int scaling_exponent() const noexcept;
  [[nodiscard]] const RadialProfile& profile() const noexcept { return profile_; }
  [[nodiscard]] double delta() const noexcept { return delta_; }
  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] KernelRole role() const noexcept { return profile_.role(); }

 private:
  RadialProfile profile_;
  double delta_;
  int dim_;
  double scale_;
};

/// Surface measure of the unit sphere in R^d (2 for d = 1, both half-lines).
double unit_sphere_measure(int dim);

/// Diffusion: (1/2) S_{d-1} int_0^1 w(r) r^{d+1} dr.
/// Gradient:  S_{d-1} int_0^1 w(r) r^d dr.
/// Throws Error{divergent_moment} for non-integrable fractional profiles.
double kernel_moment(const RadialProfile& profile, int dim);

/// Rescales the amplitude so that kernel_moment == dim.
RadialProfile normalize_profile(const RadialProfile& profile, int dim);

double eval_scaled_kernel(const ScaledKernel& kernel, double r);

struct MonotonicityReport {
  bool pass = true;
  /// First sample interval on which r^{d-1} w(r) increases.
  std::optional<std::pair<double, double>> violation;
};

/// Checks that r^{d-1} w(r) is nonincreasing on (0, 1).
MonotonicityReport check_gradient_monotonicity(const RadialProfile& profile, int dim,
                                               int samples = 4096);

}  // namespace nlstokes

#endif  // NLSTOKES_KERNEL_HPP
