#include "geophase/error.hpp"

namespace geophase {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::undefined_phase: return "undefined_phase";
    case ErrorCode::spin_half_only: return "spin_half_only";
    case ErrorCode::extrapolation: return "extrapolation";
    case ErrorCode::non_hermitian: return "non_hermitian";
    case ErrorCode::degenerate_spectrum: return "degenerate_spectrum";
    case ErrorCode::undefined_tilt: return "undefined_tilt";
    case ErrorCode::no_oracle: return "no_oracle";
    case ErrorCode::not_cyclic: return "not_cyclic";
    case ErrorCode::open_loop: return "open_loop";
    case ErrorCode::under_resolved: return "under_resolved";
    case ErrorCode::grid_mismatch: return "grid_mismatch";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::validation: return "validation";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

}  // namespace geophase
