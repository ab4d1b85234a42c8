#pragma once

#include <cstdint>
#include <optional>

#include "cytoprop/common.hpp"

namespace cytoprop {

// Solver knobs shared by the stochastic procedures. The step policy is
// gamma_n = step_scale / n^step_exponent; the exponent must lie in (0.5, 1]
// so the step sum diverges while the squared-step sum stays finite.
//
// Defaults are the published operating point of the descent-ascent
// procedure; minmax_defaults() switches to the min-max swap set.
struct SolverConfig {
  double epsilon = 5e-4;
  double lambda = 1e-4;

  // Unset resolves to J * epsilon / 1.9 with J the target support size.
  std::optional<double> step_scale;
  double step_exponent = 0.51;

  std::uint64_t n_out = 10'000;  // outer descent iterations
  std::uint64_t n_in = 10;       // inner ascent steps per outer iteration
  std::uint64_t n = 10'000;      // single-loop ascent budget
  double eta = 10.0;             // outer descent step

  std::uint64_t seed = 0;

  // Optional early stop for plain distance evaluation: halt when the running
  // estimate changes by less than plateau_rtol (relatively) across a window.
  // Unset keeps the fixed budget.
  std::optional<double> plateau_rtol;
  std::uint64_t plateau_window = 1000;

  void validate() const;

  // Step-size admissibility on its own, for config checking.
  static bool step_exponent_valid(double c) { return c > 0.5 && c <= 1.0; }

  double resolved_step_scale(std::size_t target_size) const;

  static SolverConfig descent_ascent_defaults() { return SolverConfig{}; }

  static SolverConfig minmax_defaults() {
    SolverConfig cfg;
    cfg.epsilon = 1e-4;
    cfg.lambda = 1e-4;
    cfg.step_scale = 5.0;
    cfg.step_exponent = 0.99;
    cfg.n = 10'000;
    return cfg;
  }
};

}  // namespace cytoprop
