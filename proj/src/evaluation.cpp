#include "cytoprop/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cytoprop {

double kl_divergence(const ProbabilityVector& p_hat,
                     const ProbabilityVector& p) {
  if (p_hat.size() != p.size()) {
    throw ValidationError("kl_divergence: dimension mismatch, " +
                          std::to_string(p_hat.size()) + " vs " +
                          std::to_string(p.size()));
  }
  double kl = 0.0;
  for (std::size_t k = 0; k < p_hat.size(); ++k) {
    if (p_hat[k] == 0.0) continue;
    if (p[k] == 0.0) return std::numeric_limits<double>::infinity();
    kl += p_hat[k] * std::log(p_hat[k] / p[k]);
  }
  return kl;
}

std::vector<BlandAltmanPoint> bland_altman_points(
    const ProbabilityVector& p_hat, const ProbabilityVector& p,
    const std::string& dataset_tag) {
  if (p_hat.size() != p.size()) {
    throw ValidationError("bland_altman_points: dimension mismatch");
  }
  std::vector<BlandAltmanPoint> points(p_hat.size());
  for (std::size_t k = 0; k < p_hat.size(); ++k) {
    points[k] = {dataset_tag, k, (p_hat[k] + p[k]) / 2.0, p_hat[k] - p[k]};
  }
  return points;
}

ErrorSummary error_summary(std::span<const BlandAltmanPoint> points) {
  if (points.empty()) {
    throw ValidationError("error_summary: empty collection");
  }
  std::vector<double> abs_diffs(points.size());
  std::size_t within5 = 0;
  std::size_t within10 = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    abs_diffs[i] = std::abs(points[i].diff);
    if (abs_diffs[i] <= 0.05) ++within5;
    if (abs_diffs[i] <= 0.10) ++within10;
  }
  std::sort(abs_diffs.begin(), abs_diffs.end());
  const std::size_t n = abs_diffs.size();
  const double median = (n % 2 == 1)
                            ? abs_diffs[n / 2]
                            : (abs_diffs[n / 2 - 1] + abs_diffs[n / 2]) / 2.0;
  return ErrorSummary{
      static_cast<double>(within5) / static_cast<double>(n),
      static_cast<double>(within10) / static_cast<double>(n),
      abs_diffs.back(),
      median,
  };
}

}  // namespace cytoprop
