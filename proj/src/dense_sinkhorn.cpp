#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cytoprop/semidual.hpp"

namespace cytoprop {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_or_neg_inf(double w) { return w > 0.0 ? std::log(w) : kNegInf; }

}  // namespace

DenseOtResult dense_sinkhorn(const CostMatrix& cost, std::span<const double> a,
                             std::span<const double> b, double epsilon,
                             std::size_t max_iter, double tol) {
  const std::size_t rows = cost.rows();
  const std::size_t cols = cost.cols();
  if (a.size() != rows || b.size() != cols) {
    throw ValidationError("dense_sinkhorn: marginal size mismatch");
  }
  if (!(epsilon > 0.0)) {
    throw ValidationError("dense_sinkhorn: epsilon must be > 0");
  }

  // Local row-major copy; this solver is for test-scale instances.
  std::vector<double> c(rows * cols);
  std::vector<double> scratch(rows);
  for (std::size_t j = 0; j < cols; ++j) {
    const auto col = cost.column(j, scratch);
    for (std::size_t i = 0; i < rows; ++i) c[i * cols + j] = col[i];
  }

  const double inv_eps = 1.0 / epsilon;
  std::vector<double> f(rows, 0.0);
  std::vector<double> g(cols, 0.0);
  std::vector<double> log_a(rows), log_b(cols);
  for (std::size_t i = 0; i < rows; ++i) log_a[i] = log_or_neg_inf(a[i]);
  for (std::size_t j = 0; j < cols; ++j) log_b[j] = log_or_neg_inf(b[j]);

  std::vector<double> plan(rows * cols);
  double marginal_error = std::numeric_limits<double>::infinity();
  std::size_t it = 0;

  auto rebuild_plan_and_error = [&]() {
    marginal_error = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      double col_sum = 0.0;
      for (std::size_t i = 0; i < rows; ++i) {
        const double e = (f[i] + g[j] - c[i * cols + j]) * inv_eps;
        const double p = std::exp(e);  // exp(-inf) = 0 for excluded atoms
        plan[i * cols + j] = p;
        col_sum += p;
      }
      marginal_error = std::max(marginal_error, std::abs(col_sum - b[j]));
    }
    for (std::size_t i = 0; i < rows; ++i) {
      double row_sum = 0.0;
      for (std::size_t j = 0; j < cols; ++j) row_sum += plan[i * cols + j];
      marginal_error = std::max(marginal_error, std::abs(row_sum - a[i]));
    }
  };

  while (it < max_iter) {
    ++it;
    // g_j = eps * (log b_j - lse_i((f_i - C_ij)/eps))
    for (std::size_t j = 0; j < cols; ++j) {
      double m = kNegInf;
      for (std::size_t i = 0; i < rows; ++i) {
        m = std::max(m, (f[i] - c[i * cols + j]) * inv_eps);
      }
      double s = 0.0;
      for (std::size_t i = 0; i < rows; ++i) {
        s += std::exp((f[i] - c[i * cols + j]) * inv_eps - m);
      }
      g[j] = epsilon * (log_b[j] - (m + std::log(s)));
    }
    // f_i = eps * (log a_i - lse_j((g_j - C_ij)/eps))
    for (std::size_t i = 0; i < rows; ++i) {
      double m = kNegInf;
      for (std::size_t j = 0; j < cols; ++j) {
        m = std::max(m, (g[j] - c[i * cols + j]) * inv_eps);
      }
      double s = 0.0;
      for (std::size_t j = 0; j < cols; ++j) {
        s += std::exp((g[j] - c[i * cols + j]) * inv_eps - m);
      }
      f[i] = epsilon * (log_a[i] - (m + std::log(s)));
    }

    rebuild_plan_and_error();
    if (marginal_error < tol) break;
  }

  if (marginal_error >= tol) {
    throw NumericalError("dense_sinkhorn: no convergence after " +
                         std::to_string(max_iter) +
                         " iterations, marginal violation " +
                         std::to_string(marginal_error));
  }

  DenseOtResult out;
  out.rows = rows;
  out.cols = cols;
  out.iterations = it;
  out.marginal_error = marginal_error;

  double transport = 0.0;
  double entropy_term = 0.0;  // sum (log P - 1) P with 0 log 0 = 0
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double p = plan[i * cols + j];
      if (p > 0.0) {
        transport += c[i * cols + j] * p;
        entropy_term += (std::log(p) - 1.0) * p;
      }
    }
  }
  out.w_eps = transport + epsilon * entropy_term;

  double dual = -epsilon;
  for (std::size_t i = 0; i < rows; ++i) {
    if (a[i] > 0.0) dual += f[i] * a[i];
  }
  for (std::size_t j = 0; j < cols; ++j) {
    if (b[j] > 0.0) dual += g[j] * b[j];
  }
  out.dual_value = dual;

  out.plan = std::move(plan);
  out.potential_source = std::move(f);
  out.potential_target = std::move(g);
  return out;
}

}  // namespace cytoprop
