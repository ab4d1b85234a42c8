#include <cmath>
#include <vector>

#include "cytoprop/semidual.hpp"
#include "doctest.h"
#include "support/test_helpers.hpp"

using namespace cytoprop;
namespace ct = cytoprop::testing;

namespace {

SolverConfig plain_config(double epsilon, std::uint64_t seed) {
  SolverConfig cfg;
  cfg.epsilon = epsilon;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_SUITE("c_transform") {
  TEST_CASE("single atom at zero cost") {
    const std::vector<double> u{0.0}, c{0.0};
    CHECK(smoothed_c_transform(u, c, 1.0, 0.5) == doctest::Approx(0.0));
  }

  TEST_CASE("single atom recovers the cost") {
    const std::vector<double> u{0.0}, c{2.0};
    CHECK(smoothed_c_transform(u, c, 1.0, 0.5) == doctest::Approx(2.0));
  }

  TEST_CASE("two equal atoms give minus log two") {
    const std::vector<double> u{0.0, 0.0}, c{0.0, 0.0};
    const double got = smoothed_c_transform(u, c, 1.0, 1.0);
    CHECK(got == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
    CHECK(got == doctest::Approx(ct::naive_c_transform(u, c, 1.0, 1.0)));
  }

  TEST_CASE("matches the naive evaluation on random instances") {
    Rng rng(3);
    for (int rep = 0; rep < 50; ++rep) {
      const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform01() * 8);
      std::vector<double> u(n), c(n);
      for (auto& v : u) v = rng.uniform01() - 0.5;
      for (auto& v : c) v = 2.0 * rng.uniform01();
      const double eps = 0.05 + rng.uniform01();
      CHECK(smoothed_c_transform(u, c, 0.7, eps) ==
            doctest::Approx(ct::naive_c_transform(u, c, 0.7, eps))
                .epsilon(1e-10));
    }
  }

  TEST_CASE("finite at tiny epsilon where the naive path overflows") {
    const std::vector<double> u{0.0, 0.0}, c{0.0, 1.0};
    const double v = smoothed_c_transform(u, c, 1.0, 1e-5);
    CHECK(std::isfinite(v));
    CHECK(v == doctest::Approx(0.0).epsilon(1e-9));
  }

  TEST_CASE("nonpositive target weight rejected") {
    const std::vector<double> u{0.0}, c{0.0};
    CHECK_THROWS_AS(smoothed_c_transform(u, c, 0.0, 1.0), ValidationError);
  }
}

TEST_SUITE("semidual_integrand") {
  TEST_CASE("single-source closed form") {
    const std::vector<double> u{0.0}, a{1.0}, c{3.25};
    const double eps = 0.4;
    CHECK(semidual_value(u, a, c, 1.0, eps) ==
          doctest::Approx(3.25 - eps).epsilon(1e-12));
  }

  TEST_CASE("translation invariance when a sums to one") {
    Rng rng(5);
    for (int rep = 0; rep < 25; ++rep) {
      const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 6);
      std::vector<double> u(n), c(n);
      for (auto& v : u) v = rng.uniform01() - 0.5;
      for (auto& v : c) v = 2.0 * rng.uniform01();
      const auto a = ct::random_simplex(rng, n);
      const double eps = 0.1 + rng.uniform01();
      const double base = semidual_value(u, a, c, 1.0, eps);
      const double t = 4.0 * rng.uniform01() - 2.0;
      auto shifted = u;
      for (auto& v : shifted) v += t;
      CHECK(std::abs(semidual_value(shifted, a, c, 1.0, eps) - base) <= 1e-10);
    }
  }

  TEST_CASE("two equal atoms") {
    const std::vector<double> u{0.0, 0.0}, a{0.5, 0.5}, c{0.0, 0.0};
    CHECK(semidual_value(u, a, c, 1.0, 1.0) ==
          doctest::Approx(-std::log(2.0) - 1.0).epsilon(1e-12));
  }

  TEST_CASE("concave along random segments") {
    Rng rng(9);
    for (int rep = 0; rep < 50; ++rep) {
      const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 6);
      std::vector<double> u1(n), u2(n), c(n);
      for (auto& v : u1) v = rng.uniform01() - 0.5;
      for (auto& v : u2) v = rng.uniform01() - 0.5;
      for (auto& v : c) v = 2.0 * rng.uniform01();
      const auto a = ct::random_simplex(rng, n);
      const double theta = rng.uniform01();
      std::vector<double> mix(n);
      for (std::size_t i = 0; i < n; ++i) {
        mix[i] = theta * u1[i] + (1.0 - theta) * u2[i];
      }
      const double eps = 0.2;
      const double lhs = semidual_value(mix, a, c, 1.0, eps);
      const double rhs = theta * semidual_value(u1, a, c, 1.0, eps) +
                         (1.0 - theta) * semidual_value(u2, a, c, 1.0, eps);
      CHECK(lhs >= rhs - 1e-10);
    }
  }
}

TEST_SUITE("semidual_gradient") {
  TEST_CASE("single atom gradient is zero") {
    const std::vector<double> u{0.7}, a{1.0}, c{1.3};
    std::vector<double> grad(1);
    semidual_grad(u, a, c, 0.5, grad);
    CHECK(grad[0] == doctest::Approx(0.0));
  }

  TEST_CASE("symmetric two-atom instance") {
    const std::vector<double> u{0.0, 0.0}, a{0.5, 0.5}, c{0.0, 0.0};
    std::vector<double> grad(2);
    semidual_grad(u, a, c, 1.0, grad);
    CHECK(grad[0] == doctest::Approx(0.0));
    CHECK(grad[1] == doctest::Approx(0.0));
  }

  TEST_CASE("matches centered finite differences on 100+ random instances") {
    Rng rng(17);
    int checked = 0;
    while (checked < 120) {
      const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 18);
      std::vector<double> u(n), c(n);
      for (auto& v : u) v = rng.uniform01() - 0.5;
      for (auto& v : c) v = 2.0 * rng.uniform01();
      const auto a = ct::random_simplex(rng, n);
      const double eps = 0.01 + rng.uniform01();

      std::vector<double> grad(n);
      semidual_grad(u, a, c, eps, grad);

      double grad_sum = 0.0;
      for (double g : grad) grad_sum += g;
      CHECK(std::abs(grad_sum) <= 1e-12);

      const auto fd = ct::fd_gradient(
          [&](const std::vector<double>& x) {
            return semidual_value(x, a, c, 1.0, eps);
          },
          u, 1e-6);
      const double scale = std::max(ct::max_abs(grad), 1e-3);
      CHECK(ct::max_abs_diff(grad, fd) / scale <= 1e-5);
      ++checked;
    }
  }
}

TEST_SUITE("stochastic_ascent") {
  TEST_CASE("zero steps leaves the estimate undefined") {
    const auto src = WeightedSample::uniform({0.0, 1.0}, 1);
    const CostMatrix cost(src, src);
    const auto state = stochastic_ascent(cost, src.weights(), src.weights(),
                                         plain_config(0.5, 1), 0);
    CHECK(state.iteration == 0);
    for (double v : state.potential.values) CHECK(v == 0.0);
    CHECK_THROWS_AS(state.average_cost(), ValidationError);
  }

  TEST_CASE("single atom pair gives cost minus epsilon at every step") {
    const auto src = WeightedSample::uniform({0.0}, 1);
    const auto tgt = WeightedSample::uniform({2.0}, 1);
    const CostMatrix cost(src, tgt);
    const double eps = 0.25;
    for (std::uint64_t n : {1u, 5u, 100u}) {
      const auto state = stochastic_ascent(cost, src.weights(), tgt.weights(),
                                           plain_config(eps, 3), n);
      CHECK(state.potential.values[0] == 0.0);
      CHECK(state.average_cost() == doctest::Approx(4.0 - eps).epsilon(1e-12));
    }
  }

  TEST_CASE("running average approaches the dense fixed-point value") {
    Rng rng(23);
    const auto src = ct::random_uniform_sample(rng, 10, 2);
    const auto tgt = ct::random_uniform_sample(rng, 10, 2);
    const CostMatrix cost(src, tgt);
    const double eps = 0.1;
    const auto oracle = dense_sinkhorn(cost, src.weights(), tgt.weights(), eps);

    std::vector<double> errors;
    for (std::uint64_t seed : {11u, 12u, 13u}) {
      const double w = wasserstein_estimate(cost, src.weights(), tgt.weights(),
                                            plain_config(eps, seed), 200'000);
      errors.push_back(std::abs(w - oracle.w_eps) / std::abs(oracle.w_eps));
    }
    std::sort(errors.begin(), errors.end());
    CHECK(errors[1] <= 0.01);  // median of three seeds
  }

  TEST_CASE("plateau detector stops a constant-value run early") {
    const auto src = WeightedSample::uniform({0.0}, 1);
    const auto tgt = WeightedSample::uniform({1.0}, 1);
    const CostMatrix cost(src, tgt);
    auto cfg = plain_config(0.5, 7);
    cfg.plateau_rtol = 1e-12;
    cfg.plateau_window = 50;
    const auto state =
        stochastic_ascent(cost, src.weights(), tgt.weights(), cfg, 100'000);
    CHECK(state.iteration == 100);
  }
}

TEST_SUITE("plan_column") {
  TEST_CASE("single atom pair carries all mass") {
    const auto src = WeightedSample::uniform({0.0}, 1);
    const auto tgt = WeightedSample::uniform({1.5}, 1);
    const CostMatrix cost(src, tgt);
    const auto col = plan_column(DualPotential::zeros(1), cost, 1.0, 0.5, 0);
    CHECK(col.entries[0] == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("equidistant atoms split evenly") {
    const auto src = WeightedSample::uniform({0.0, 0.0, 2.0, 0.0}, 2);
    const auto tgt = WeightedSample::uniform({1.0, 0.0}, 2);
    const CostMatrix cost(src, tgt);
    const auto col = plan_column(DualPotential::zeros(2), cost, 1.0, 1.0, 0);
    CHECK(col.entries[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(col.entries[1] == doctest::Approx(0.5).epsilon(1e-15));
  }

  TEST_CASE("column mass equals the target weight for arbitrary potentials") {
    Rng rng(31);
    const auto src = ct::random_uniform_sample(rng, 12, 3);
    const auto tgt = ct::random_uniform_sample(rng, 7, 3);
    const CostMatrix cost(src, tgt);
    for (int rep = 0; rep < 20; ++rep) {
      DualPotential u{std::vector<double>(12), false};
      for (auto& v : u.values) v = 2.0 * rng.uniform01() - 1.0;
      const std::size_t j = static_cast<std::size_t>(rng.uniform01() * 7);
      const double b_j = tgt.weights()[j];
      const auto col = plan_column(u, cost, b_j, 0.05, j);
      const double mass = pairwise_sum(col.entries);
      CHECK(std::abs(mass - b_j) <= 1e-9 * b_j);
    }
  }

  TEST_CASE("plan from the oracle potential reproduces the oracle plan") {
    Rng rng(37);
    const auto src = ct::random_uniform_sample(rng, 6, 2);
    const auto tgt = ct::random_uniform_sample(rng, 5, 2);
    const CostMatrix cost(src, tgt);
    const double eps = 0.3;
    const auto oracle = dense_sinkhorn(cost, src.weights(), tgt.weights(), eps);

    const double f_mean =
        pairwise_sum(oracle.potential_source) / oracle.potential_source.size();
    DualPotential u{oracle.potential_source, false};
    for (auto& v : u.values) v -= f_mean;

    double max_entry = 0.0;
    for (double p : oracle.plan) max_entry = std::max(max_entry, p);
    for (std::size_t j = 0; j < tgt.size(); ++j) {
      const auto col = plan_column(u, cost, tgt.weights()[j], eps, j);
      for (std::size_t i = 0; i < src.size(); ++i) {
        CHECK(std::abs(col.entries[i] - oracle.plan[i * tgt.size() + j]) <=
              1e-8 * max_entry);
      }
    }
  }

  TEST_CASE("plan from a tail-averaged ascent matches the oracle") {
    Rng rng(41);
    const auto src = ct::random_uniform_sample(rng, 5, 2, 0.0, 1.0);
    const auto tgt = ct::random_uniform_sample(rng, 5, 2, 0.0, 1.0);
    const CostMatrix cost(src, tgt);
    const double eps = 0.5;
    const auto oracle = dense_sinkhorn(cost, src.weights(), tgt.weights(), eps);

    // Average the dual iterate over the tail of a long run to damp the
    // stochastic wobble around the maximizer.
    auto cfg = plain_config(eps, 5);
    SemiDualState state(src.size(), cfg.seed);
    const auto cumulative = cumulative_weights(tgt.weights());
    stochastic_ascent_steps(state, cost, src.weights(), tgt.weights(),
                            cumulative, cfg, 200'000);
    std::vector<double> u_avg(src.size(), 0.0);
    const int chunks = 200;
    for (int chunk = 0; chunk < chunks; ++chunk) {
      stochastic_ascent_steps(state, cost, src.weights(), tgt.weights(),
                              cumulative, cfg, 2'000);
      for (std::size_t i = 0; i < u_avg.size(); ++i) {
        u_avg[i] += state.potential.values[i] / chunks;
      }
    }
    double max_entry = 0.0;
    for (double p : oracle.plan) max_entry = std::max(max_entry, p);
    DualPotential u{u_avg, false};
    for (std::size_t j = 0; j < tgt.size(); ++j) {
      const auto col = plan_column(u, cost, tgt.weights()[j], eps, j);
      for (std::size_t i = 0; i < src.size(); ++i) {
        CHECK(std::abs(col.entries[i] - oracle.plan[i * tgt.size() + j]) <=
              1e-3 * max_entry);
      }
    }
  }
}

TEST_SUITE("dense_sinkhorn") {
  TEST_CASE("identical measures are feasible at tight tolerance") {
    Rng rng(43);
    const auto s = ct::random_uniform_sample(rng, 8, 2);
    const CostMatrix cost(s, s);
    const auto res = dense_sinkhorn(cost, s.weights(), s.weights(), 0.7);
    CHECK(res.marginal_error <= 1e-10);
  }

  TEST_CASE("single atom pair") {
    const auto src = WeightedSample::uniform({0.0}, 1);
    const auto tgt = WeightedSample::uniform({2.0}, 1);
    const CostMatrix cost(src, tgt);
    const auto res = dense_sinkhorn(cost, src.weights(), tgt.weights(), 0.25);
    CHECK(res.plan.size() == 1);
    CHECK(res.plan[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.w_eps == doctest::Approx(4.0 - 0.25).epsilon(1e-12));
  }

  TEST_CASE("frozen two-atom fixture on the line") {
    // Points {0, 1} on both sides, uniform weights, eps = 1. The symmetric
    // fixed point has f = g center-ready and the plan below; values frozen
    // after the first verified run (duality gap < 1e-12).
    const auto src = WeightedSample::uniform({0.0, 1.0}, 1);
    const CostMatrix cost(src, src);
    const auto res = dense_sinkhorn(cost, src.weights(), src.weights(), 1.0);
    CHECK(res.w_eps == doctest::Approx(-2.0064088680781682).epsilon(1e-10));
    CHECK(res.plan[0] == doctest::Approx(0.36552928931500245).epsilon(1e-9));
    CHECK(res.plan[1] == doctest::Approx(0.13447071068499755).epsilon(1e-9));
    CHECK(res.plan[2] == doctest::Approx(0.13447071068499755).epsilon(1e-9));
    CHECK(res.plan[3] == doctest::Approx(0.36552928931500245).epsilon(1e-9));
  }

  TEST_CASE("primal value agrees with the dual value") {
    Rng rng(47);
    for (double eps : {1.0, 0.1}) {
      const auto src = ct::random_uniform_sample(rng, 7, 3);
      const auto tgt = ct::random_uniform_sample(rng, 9, 3);
      const CostMatrix cost(src, tgt);
      const auto res = dense_sinkhorn(cost, src.weights(), tgt.weights(), eps);
      CHECK(res.w_eps ==
            doctest::Approx(res.dual_value).epsilon(1e-8));
    }
  }

  TEST_CASE("reports non-convergence with the achieved violation") {
    Rng rng(53);
    const auto src = ct::random_uniform_sample(rng, 6, 2);
    const auto tgt = ct::random_uniform_sample(rng, 6, 2);
    const CostMatrix cost(src, tgt);
    CHECK_THROWS_AS(
        dense_sinkhorn(cost, src.weights(), tgt.weights(), 0.01, 1, 1e-12),
        NumericalError);
  }
}
