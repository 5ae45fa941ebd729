#pragma once

#include <functional>
#include <string>
#include <vector>

#include "geophase/propagator.hpp"

namespace geophase {

/// Knobs for mutation checks; defaults run the pristine suite.
struct VerifyOptions {
  StepRule rule = StepRule::midpoint;
  /// Multiplies the step count of criteria 1-11.
  double steps_scale = 1.0;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the thirteen acceptance checks in order. `on_result` sees each result
/// as soon as it is available. Criterion 13 is the wall-clock budget of the
/// whole suite.
std::vector<CriterionResult> run_verification(
    const VerifyOptions& options = {},
    const std::function<void(const CriterionResult&)>& on_result = {});

inline constexpr double kVerifyBudgetSeconds = 60.0;

}  // namespace geophase
