#pragma once

#include <stdexcept>
#include <string>

namespace geophase {

enum class ErrorCode {
  dimension_mismatch,
  undefined_phase,
  spin_half_only,
  extrapolation,
  non_hermitian,
  degenerate_spectrum,
  undefined_tilt,
  no_oracle,
  not_cyclic,
  open_loop,
  under_resolved,
  grid_mismatch,
  invalid_argument,
  validation,
  io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace geophase
