#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cytoprop/semidual.hpp"
#include "cytoprop/types.hpp"

namespace cytoprop {

// Point weights a(h): point i in class k gets h_k / n_k, so the re-weighted
// source carries class masses h. Output sums to 1.
std::vector<double> class_to_point_weights(const ClassPartition& partition,
                                           const ProbabilityVector& h);

// Per-class means of a point vector: entry k is the mean of u over class k.
// The transpose of the map above.
std::vector<double> class_means(const ClassPartition& partition,
                                std::span<const double> u);

// Max-shifted softmax onto the simplex.
std::vector<double> softmax(std::span<const double> z);

// K x K softmax Jacobian, row-major: sigma_i (delta_ij - sigma_j). Symmetric,
// rows and columns sum to zero.
std::vector<double> softmax_jacobian(std::span<const double> z);

// Closed-form minimizer of h -> <u, a(h)> + lambda * sum h_k log h_k over the
// simplex: softmax of -class_means(u)/lambda.
ProbabilityVector implied_proportions(const ClassPartition& partition,
                                      std::span<const double> u,
                                      double lambda);

// Penalized semi-dual integrand of the swapped min-max problem.
double penalized_semidual_value(const ClassPartition& partition,
                                std::span<const double> u,
                                std::span<const double> cost_col, double b_j,
                                double epsilon, double lambda);

// Its gradient in u: a(h(u)) - softmax((u - c)/eps). Sums to zero.
void penalized_semidual_grad(const ClassPartition& partition,
                             std::span<const double> u,
                             std::span<const double> cost_col, double epsilon,
                             double lambda, std::span<double> out);

enum class SolverKind { kDescentAscent, kMinMaxSwap };

std::string solver_name(SolverKind kind);

struct TraceEntry {
  std::uint64_t iteration = 0;
  std::vector<double> proportions;
  std::optional<double> kl;  // vs. the benchmark, when one was supplied
};

struct ProportionEstimate {
  ProbabilityVector proportions;
  SolverKind solver = SolverKind::kDescentAscent;
  DualPotential final_potential;
  std::vector<TraceEntry> trace;
  bool converged = true;  // false when the iteration budget was zero
};

// Descent-ascent estimator: outer gradient descent on the softmax
// parameters of the class proportions, inner Robbins-Monro ascent on the
// dual. The outer gradient is the Jacobian chain through the class-to-point
// weight map applied to the inner dual iterate.
ProportionEstimate estimate_descent_ascent(
    const WeightedSample& source, const ClassPartition& partition,
    const WeightedSample& target, const SolverConfig& config,
    const std::optional<ProbabilityVector>& benchmark = std::nullopt);

// Min-max swap estimator: a single Robbins-Monro loop on the entropically
// penalized objective; proportions are read off the final dual vector.
ProportionEstimate estimate_minmax_swap(
    const WeightedSample& source, const ClassPartition& partition,
    const WeightedSample& target, const SolverConfig& config,
    const std::optional<ProbabilityVector>& benchmark = std::nullopt);

struct SourceCandidate {
  const WeightedSample* sample = nullptr;
  const ClassPartition* partition = nullptr;
};

struct SourceSelection {
  std::size_t index = 0;
  ProportionEstimate estimate;
  std::vector<double> costs;  // re-weighted distance estimate per candidate
};

// Multi-source selection: estimate proportions per candidate, then score
// each candidate by a fixed-budget distance estimate between its re-weighted
// measure and the target. Ties break toward the lowest index.
SourceSelection select_best_source(std::span<const SourceCandidate> candidates,
                                   const WeightedSample& target,
                                   const SolverConfig& config,
                                   SolverKind solver);

struct ProfilePoint {
  double h1 = 0.0;
  double w_hat = 0.0;
};

// Two-class distance profile: for each h1 in the grid, a fixed-budget
// distance estimate with source weights a((h1, 1-h1)). All grid points share
// the seed, so the draw sequence is common across them.
std::vector<ProfilePoint> two_class_profile(const WeightedSample& source,
                                            const ClassPartition& partition,
                                            const WeightedSample& target,
                                            const SolverConfig& config,
                                            std::span<const double> grid);

}  // namespace cytoprop
