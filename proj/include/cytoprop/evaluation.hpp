#pragma once

#include <span>
#include <string>
#include <vector>

#include "cytoprop/types.hpp"

namespace cytoprop {

// KL(p_hat | p) = sum_k p_hat_k log(p_hat_k / p_k), with 0 log 0 = 0.
// Returns +infinity when p_hat puts mass where p has none; callers surface
// that as a distinguished value instead of NaN.
double kl_divergence(const ProbabilityVector& p_hat,
                     const ProbabilityVector& p);

// One agreement point per class: x = (estimate + benchmark)/2,
// y = estimate - benchmark. Collections from several datasets append into
// one pooled set.
struct BlandAltmanPoint {
  std::string dataset;
  std::size_t class_index = 0;
  double mean = 0.0;
  double diff = 0.0;
};

std::vector<BlandAltmanPoint> bland_altman_points(
    const ProbabilityVector& p_hat, const ProbabilityVector& p,
    const std::string& dataset_tag);

struct ErrorSummary {
  double frac_within_5pct = 0.0;
  double frac_within_10pct = 0.0;
  double max_abs = 0.0;
  double median_abs = 0.0;
};

ErrorSummary error_summary(std::span<const BlandAltmanPoint> points);

}  // namespace cytoprop
