#ifndef NLSTOKES_CONFIG_HPP
#define NLSTOKES_CONFIG_HPP

#include "nlstokes/error.hpp"
#include "nlstokes/forcing.hpp"
#include "nlstokes/grid1d.hpp"
#include "nlstokes/kernel.hpp"
#include "nlstokes/spectral.hpp"
#include "nlstokes/symbols.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nlstokes {

enum class Subcommand { kernels, symbols, scan, solve, converge, grid1d, validate };

std::string_view to_string(Subcommand c) noexcept;
std::optional<Subcommand> parse_subcommand(std::string_view text) noexcept;

enum class StudyKind { delta, spectral, compatibility };

std::string_view to_string(StudyKind s) noexcept;

struct KernelConfig {
  ProfileKind kind = ProfileKind::constant;
  double beta = 0.0;
  double sigma = 0.5;
  double epsilon = 1.0;
  double amplitude = 1.0;  ///< only used without normalization

  /// The configured profile, normalized for `dim` when requested.
  [[nodiscard]] RadialProfile profile(KernelRole role, int dim, bool normalize) const;
};

/// Validated settings for one run. Every field maps to one flat config key
/// of the same name (see config_keys()).
struct ExperimentConfig {
  Subcommand command = Subcommand::kernels;

  int dim = 2;
  double delta = 1.0;
  std::vector<double> deltas;
  int N = 64;
  std::vector<int> Ns;
  int N_ref = 0;
  double nu = 1.0;
  StokesVariant variant = StokesVariant::nonlocal;

  KernelConfig diffusion{ProfileKind::constant};
  KernelConfig gradient{ProfileKind::fractional, 0.5};
  bool normalize = true;

  ForcingSpec forcing = TaylorGreen{};

  StudyKind study = StudyKind::delta;
  double path_c = 1.0;
  double path_gamma = 1.0;

  double xi_min = 0.0;
  double xi_max = 60.0;
  int samples = 512;
  double bracket_tolerance = 1e-6;

  std::string op = "all";
  std::vector<int> xi;
  int pairs = 20;

  bool realspace = false;
  SymbolQuadrature quadrature{};

  std::string out = ".";
  int threads = 1;
  std::uint64_t seed = 0;
};

/// Raised with every validation problem found in a document.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems);

  [[nodiscard]] const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct ConfigKey {
  std::string_view name;
  std::string_view help;
};

/// All recognised keys.
const std::vector<ConfigKey>& config_keys();

/// Parses a flat JSON object, applies `overrides` (key -> JSON or bare string
/// text) on top, and validates everything against the module preconditions.
/// An empty `text` means an empty document.
ExperimentConfig parse_config(Subcommand command, std::string_view text,
                              const std::map<std::string, std::string>& overrides = {});

}  // namespace nlstokes

#endif  // NLSTOKES_CONFIG_HPP
