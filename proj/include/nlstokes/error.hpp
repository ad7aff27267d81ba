#ifndef NLSTOKES_ERROR_HPP
#define NLSTOKES_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nlstokes {

enum class ErrorCode {
  invalid_argument,
  divergent_moment,
  zero_moment,
  quadrature_nonconvergence,
  ill_posed_kernel,
  ill_posed_pressure,
  incompatible_forcing,
  shape_mismatch,
  empty_stencil,
  lattice_mismatch,
  io_failure,
  config_error,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library. The code is stable
/// and is what the CLI reports in its machine-readable error line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when successive quadrature refinements keep disagreeing.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& message, double previous, double last)
      : Error(ErrorCode::quadrature_nonconvergence, message),
        previous_(previous),
        last_(last) {}

  [[nodiscard]] double previous_estimate() const noexcept { return previous_; }
  [[nodiscard]] double last_estimate() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

/// Raised when a gradient symbol vanishes on a retained lattice mode.
class IllPosedError : public Error {
 public:
  IllPosedError(ErrorCode code, const std::string& message, std::vector<int> mode)
      : Error(code, message), mode_(std::move(mode)) {}

  [[nodiscard]] const std::vector<int>& mode() const noexcept { return mode_; }

 private:
  std::vector<int> mode_;
};

}  // namespace nlstokes

#endif  // NLSTOKES_ERROR_HPP
