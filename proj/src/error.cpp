#include "nlstokes/error.hpp"

namespace nlstokes {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::divergent_moment: return "divergent_moment";
    case ErrorCode::zero_moment: return "zero_moment";
    case ErrorCode::quadrature_nonconvergence: return "quadrature_nonconvergence";
    case ErrorCode::ill_posed_kernel: return "ill_posed_kernel";
    case ErrorCode::ill_posed_pressure: return "ill_posed_pressure";
    case ErrorCode::incompatible_forcing: return "incompatible_forcing";
    case ErrorCode::shape_mismatch: return "shape_mismatch";
    case ErrorCode::empty_stencil: return "empty_stencil";
    case ErrorCode::lattice_mismatch: return "lattice_mismatch";
    case ErrorCode::io_failure: return "io_failure";
    case ErrorCode::config_error: return "config_error";
  }
  return "unknown";
}

}  // namespace nlstokes
