#include "cytoprop/config.hpp"

#include <string>

namespace cytoprop {

void SolverConfig::validate() const {
  if (!(epsilon > 0.0)) {
    throw ValidationError("SolverConfig: epsilon must be > 0, got " +
                          std::to_string(epsilon));
  }
  if (!(lambda > 0.0)) {
    throw ValidationError("SolverConfig: lambda must be > 0, got " +
                          std::to_string(lambda));
  }
  if (!(eta > 0.0)) {
    throw ValidationError("SolverConfig: eta must be > 0, got " +
                          std::to_string(eta));
  }
  if (!step_exponent_valid(step_exponent)) {
    throw ValidationError(
        "SolverConfig: step exponent " + std::to_string(step_exponent) +
        " outside (0.5, 1]; the Robbins-Monro step conditions fail");
  }
  if (step_scale && !(*step_scale > 0.0)) {
    throw ValidationError("SolverConfig: step scale must be > 0");
  }
  if (plateau_rtol && (!(*plateau_rtol > 0.0) || plateau_window == 0)) {
    throw ValidationError("SolverConfig: plateau detector needs rtol > 0 and a nonzero window");
  }
}

double SolverConfig::resolved_step_scale(std::size_t target_size) const {
  if (step_scale) return *step_scale;
  return static_cast<double>(target_size) * epsilon / 1.9;
}

}  // namespace cytoprop
