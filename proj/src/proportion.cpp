#include "cytoprop/proportion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cytoprop/evaluation.hpp"

namespace cytoprop {

namespace {

constexpr std::uint64_t kFiniteCheckStride = 1000;

void check_estimate_inputs(const WeightedSample& source,
                           const ClassPartition& partition,
                           const WeightedSample& target) {
  if (partition.size() != source.size()) {
    throw ValidationError("proportion estimate: partition covers " +
                          std::to_string(partition.size()) + " points, source has " +
                          std::to_string(source.size()));
  }
  if (source.dim() != target.dim()) {
    throw ValidationError("proportion estimate: source dimension " +
                          std::to_string(source.dim()) + " != target dimension " +
                          std::to_string(target.dim()));
  }
}

ProportionEstimate degenerate_single_class(SolverKind kind, std::size_t rows) {
  ProportionEstimate est{ProbabilityVector({1.0}), kind,
                         DualPotential::zeros(rows), {}, true};
  return est;
}

std::optional<double> trace_kl(const std::vector<double>& h,
                               const std::optional<ProbabilityVector>& benchmark) {
  if (!benchmark) return std::nullopt;
  return kl_divergence(ProbabilityVector(h, 1e-9), *benchmark);
}

}  // namespace

std::vector<double> class_to_point_weights(const ClassPartition& partition,
                                           const ProbabilityVector& h) {
  if (h.size() != partition.num_classes()) {
    throw ValidationError("class_to_point_weights: proportion dimension " +
                          std::to_string(h.size()) + " != K = " +
                          std::to_string(partition.num_classes()));
  }
  std::vector<double> per_class(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) {
    per_class[k] = h[k] / static_cast<double>(partition.class_size(k));
  }
  std::vector<double> weights(partition.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    weights[i] = per_class[static_cast<std::size_t>(partition.label(i))];
  }
  return weights;
}

std::vector<double> class_means(const ClassPartition& partition,
                                std::span<const double> u) {
  if (u.size() != partition.size()) {
    throw ValidationError("class_means: vector length " +
                          std::to_string(u.size()) + " != N = " +
                          std::to_string(partition.size()));
  }
  std::vector<double> means(partition.num_classes(), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    means[static_cast<std::size_t>(partition.label(i))] += u[i];
  }
  for (std::size_t k = 0; k < means.size(); ++k) {
    means[k] /= static_cast<double>(partition.class_size(k));
  }
  return means;
}

std::vector<double> softmax(std::span<const double> z) {
  std::vector<double> out(z.size());
  double m = -std::numeric_limits<double>::infinity();
  for (double v : z) m = std::max(m, v);
  double s = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    out[k] = std::exp(z[k] - m);
    s += out[k];
  }
  for (double& v : out) v /= s;
  return out;
}

std::vector<double> softmax_jacobian(std::span<const double> z) {
  const auto sigma = softmax(z);
  const std::size_t k = sigma.size();
  std::vector<double> jac(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      jac[i * k + j] =
          (i == j) ? sigma[i] * (1.0 - sigma[i]) : -sigma[i] * sigma[j];
    }
  }
  return jac;
}

ProbabilityVector implied_proportions(const ClassPartition& partition,
                                      std::span<const double> u,
                                      double lambda) {
  if (!(lambda > 0.0)) {
    throw ValidationError("implied_proportions: lambda must be > 0");
  }
  auto means = class_means(partition, u);
  for (double& v : means) v = -v / lambda;
  return ProbabilityVector(softmax(means), 1e-9);
}

double penalized_semidual_value(const ClassPartition& partition,
                                std::span<const double> u,
                                std::span<const double> cost_col, double b_j,
                                double epsilon, double lambda) {
  auto means = class_means(partition, u);
  for (double& v : means) v = -v / lambda;
  double m = -std::numeric_limits<double>::infinity();
  for (double v : means) m = std::max(m, v);
  double s = 0.0;
  for (double v : means) s += std::exp(v - m);
  const double penalty_log = m + std::log(s);
  return smoothed_c_transform(u, cost_col, b_j, epsilon) -
         lambda * penalty_log - epsilon;
}

void penalized_semidual_grad(const ClassPartition& partition,
                             std::span<const double> u,
                             std::span<const double> cost_col, double epsilon,
                             double lambda, std::span<double> out) {
  const auto h = implied_proportions(partition, u, lambda);
  std::vector<double> per_class(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) {
    per_class[k] = h[k] / static_cast<double>(partition.class_size(k));
  }

  const double inv_eps = 1.0 / epsilon;
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i] = (u[i] - cost_col[i]) * inv_eps;
    if (out[i] > m) m = out[i];
  }
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i] = std::exp(out[i] - m);
    s += out[i];
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i] = per_class[static_cast<std::size_t>(partition.label(i))] -
             out[i] / s;
  }
}

std::string solver_name(SolverKind kind) {
  return kind == SolverKind::kDescentAscent ? "descent-ascent" : "minmax-swap";
}

ProportionEstimate estimate_descent_ascent(
    const WeightedSample& source, const ClassPartition& partition,
    const WeightedSample& target, const SolverConfig& config,
    const std::optional<ProbabilityVector>& benchmark) {
  config.validate();
  check_estimate_inputs(source, partition, target);
  if (partition.num_classes() == 1) {
    return degenerate_single_class(SolverKind::kDescentAscent, source.size());
  }

  const std::size_t rows = source.size();
  const std::size_t num_classes = partition.num_classes();
  const CostMatrix cost(source, target);
  const auto b = target.weights();
  const auto cumulative = cumulative_weights(b);

  Rng rng(config.seed);
  const double eps = config.epsilon;
  const double inv_eps = 1.0 / eps;
  const double inner_scale = config.resolved_step_scale(target.size());
  const double inner_exponent = config.step_exponent;

  std::vector<double> z(num_classes, 1.0);
  std::vector<double> u(rows, 0.0);
  std::vector<double> exps(rows);
  std::vector<double> scratch_col(cost.precomputed() ? 0 : rows);

  ProportionEstimate est{ProbabilityVector(softmax(z)),
                         SolverKind::kDescentAscent,
                         DualPotential::zeros(rows),
                         {},
                         config.n_out >= 1 && config.n_in >= 1};
  est.trace.reserve(std::min<std::uint64_t>(config.n_out, 1u << 20));

  for (std::uint64_t l = 1; l <= config.n_out; ++l) {
    const auto sigma_z = softmax(z);
    const auto a = class_to_point_weights(partition,
                                          ProbabilityVector(sigma_z, 1e-9));

    std::fill(u.begin(), u.end(), 0.0);
    for (std::uint64_t k = 1; k <= config.n_in; ++k) {
      const std::size_t j = rng.sample_index(cumulative);
      const auto col = cost.column(j, scratch_col);
      double m = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows; ++i) {
        exps[i] = (u[i] - col[i]) * inv_eps;
        if (exps[i] > m) m = exps[i];
      }
      double s = 0.0;
      for (std::size_t i = 0; i < rows; ++i) {
        exps[i] = std::exp(exps[i] - m);
        s += exps[i];
      }
      const double gamma =
          inner_scale / std::pow(static_cast<double>(k), inner_exponent);
      const double inv_s = 1.0 / s;
      for (std::size_t i = 0; i < rows; ++i) {
        u[i] += gamma * (a[i] - exps[i] * inv_s);
      }
    }

    // omega = (Gamma J_sigma(z))^T u = J_sigma(z) * class_means(u)
    // (the Jacobian is symmetric).
    const auto means = class_means(partition, u);
    const auto jac = softmax_jacobian(z);
    for (std::size_t row = 0; row < num_classes; ++row) {
      double omega = 0.0;
      for (std::size_t colk = 0; colk < num_classes; ++colk) {
        omega += jac[row * num_classes + colk] * means[colk];
      }
      z[row] -= config.eta * omega;
      if (!std::isfinite(z[row])) {
        throw NumericalError(
            "descent-ascent: non-finite descent variable at outer iteration " +
            std::to_string(l));
      }
    }

    auto h = softmax(z);
    est.trace.push_back(TraceEntry{l, h, trace_kl(h, benchmark)});
  }

  est.proportions = ProbabilityVector(softmax(z), 1e-9);
  est.final_potential = DualPotential{u, true};
  return est;
}

ProportionEstimate estimate_minmax_swap(
    const WeightedSample& source, const ClassPartition& partition,
    const WeightedSample& target, const SolverConfig& config,
    const std::optional<ProbabilityVector>& benchmark) {
  config.validate();
  check_estimate_inputs(source, partition, target);
  if (partition.num_classes() == 1) {
    return degenerate_single_class(SolverKind::kMinMaxSwap, source.size());
  }

  const std::size_t rows = source.size();
  const CostMatrix cost(source, target);
  const auto b = target.weights();
  const auto cumulative = cumulative_weights(b);

  Rng rng(config.seed);
  const double scale = config.resolved_step_scale(target.size());
  const double exponent = config.step_exponent;

  std::vector<double> u(rows, 0.0);
  std::vector<double> grad(rows);
  std::vector<double> scratch_col(cost.precomputed() ? 0 : rows);

  constexpr std::uint64_t kTraceStride = 100;
  ProportionEstimate est{implied_proportions(partition, u, config.lambda),
                         SolverKind::kMinMaxSwap,
                         DualPotential::zeros(rows),
                         {},
                         config.n >= 1};

  for (std::uint64_t l = 1; l <= config.n; ++l) {
    const std::size_t j = rng.sample_index(cumulative);
    const auto col = cost.column(j, scratch_col);
    penalized_semidual_grad(partition, u, col, config.epsilon, config.lambda,
                            grad);
    const double gamma =
        scale / std::pow(static_cast<double>(l), exponent);
    for (std::size_t i = 0; i < rows; ++i) u[i] += gamma * grad[i];

    if (l % kFiniteCheckStride == 0) {
      for (std::size_t i = 0; i < rows; ++i) {
        if (!std::isfinite(u[i])) {
          throw NumericalError("minmax-swap: non-finite dual entry " +
                               std::to_string(i) + " at iteration " +
                               std::to_string(l));
        }
      }
    }
    if (l % kTraceStride == 0 || l == config.n) {
      const auto h = implied_proportions(partition, u, config.lambda);
      std::vector<double> hv(h.values().begin(), h.values().end());
      est.trace.push_back(TraceEntry{l, hv, trace_kl(hv, benchmark)});
    }
  }

  est.proportions = implied_proportions(partition, u, config.lambda);
  est.final_potential = DualPotential{u, true};
  return est;
}

SourceSelection select_best_source(std::span<const SourceCandidate> candidates,
                                   const WeightedSample& target,
                                   const SolverConfig& config,
                                   SolverKind solver) {
  if (candidates.empty()) {
    throw ValidationError("select_best_source: no candidates");
  }

  std::vector<ProportionEstimate> estimates;
  std::vector<double> costs;
  estimates.reserve(candidates.size());
  costs.reserve(candidates.size());

  for (const auto& cand : candidates) {
    auto est = (solver == SolverKind::kDescentAscent)
                   ? estimate_descent_ascent(*cand.sample, *cand.partition,
                                             target, config)
                   : estimate_minmax_swap(*cand.sample, *cand.partition,
                                          target, config);
    const CostMatrix cost(*cand.sample, target);
    const auto a = class_to_point_weights(*cand.partition, est.proportions);
    costs.push_back(wasserstein_estimate(cost, a, target.weights(), config,
                                         config.n));
    estimates.push_back(std::move(est));
  }

  std::size_t best = 0;
  for (std::size_t m = 1; m < costs.size(); ++m) {
    if (costs[m] < costs[best]) best = m;
  }
  return SourceSelection{best, std::move(estimates[best]), std::move(costs)};
}

std::vector<ProfilePoint> two_class_profile(const WeightedSample& source,
                                            const ClassPartition& partition,
                                            const WeightedSample& target,
                                            const SolverConfig& config,
                                            std::span<const double> grid) {
  config.validate();
  check_estimate_inputs(source, partition, target);
  if (partition.num_classes() != 2) {
    throw ValidationError("two_class_profile: defined for K = 2, got K = " +
                          std::to_string(partition.num_classes()));
  }
  const CostMatrix cost(source, target);
  std::vector<ProfilePoint> profile;
  profile.reserve(grid.size());
  for (const double h1 : grid) {
    if (h1 < 0.0 || h1 > 1.0) {
      throw ValidationError("two_class_profile: grid value " +
                            std::to_string(h1) + " outside [0, 1]");
    }
    const ProbabilityVector h({h1, 1.0 - h1}, 1e-9);
    const auto a = class_to_point_weights(partition, h);
    const double w =
        wasserstein_estimate(cost, a, target.weights(), config, config.n);
    profile.push_back(ProfilePoint{h1, w});
  }
  return profile;
}

}  // namespace cytoprop
