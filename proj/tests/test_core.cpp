#include <vector>

#include "cytoprop/config.hpp"
#include "cytoprop/cost.hpp"
#include "cytoprop/types.hpp"
#include "doctest.h"
#include "support/test_helpers.hpp"

using namespace cytoprop;

TEST_SUITE("weighted_sample") {
  TEST_CASE("uniform weights sum to one up to a million points") {
    for (std::size_t n : {1u, 3u, 1000u, 1000000u}) {
      std::vector<double> pts(n, 0.5);
      const auto sample = WeightedSample::uniform(std::move(pts), 1);
      CHECK(sample.size() == n);
      const double total = pairwise_sum(sample.weights());
      CHECK(std::abs(total - 1.0) <= 1e-12);
    }
  }

  TEST_CASE("negative weight rejected with index") {
    std::vector<double> pts{0.0, 1.0};
    std::vector<double> w{1.5, -0.5};
    CHECK_THROWS_AS(WeightedSample(std::move(pts), 1, std::move(w)),
                    ValidationError);
  }

  TEST_CASE("weight sum off by more than tolerance rejected") {
    std::vector<double> pts{0.0, 1.0};
    std::vector<double> w{0.6, 0.5};
    CHECK_THROWS_AS(WeightedSample(std::move(pts), 1, std::move(w)),
                    ValidationError);
  }
}

TEST_SUITE("cost") {
  TEST_CASE("three-four-five triangle") {
    const auto src = WeightedSample::uniform({0.0, 0.0}, 2);
    const auto tgt = WeightedSample::uniform({3.0, 4.0}, 2);
    const auto col = cost_column(src, tgt, 0);
    REQUIRE(col.size() == 1);
    CHECK(col[0] == 25.0);
  }

  TEST_CASE("identical points cost zero") {
    const auto src = WeightedSample::uniform({1.0, 2.0, 3.0}, 3);
    const auto col = cost_column(src, src, 0);
    CHECK(col[0] == 0.0);
  }

  TEST_CASE("two sources one target") {
    const auto src = WeightedSample::uniform({0.0, 0.0, 1.0, 0.0}, 2);
    const auto tgt = WeightedSample::uniform({1.0, 1.0}, 2);
    const auto col = cost_column(src, tgt, 0);
    CHECK(col[0] == 2.0);
    CHECK(col[1] == 1.0);
  }

  TEST_CASE("dimension mismatch diagnostics name both dimensions") {
    const auto src = WeightedSample::uniform({0.0, 0.0}, 2);
    const auto tgt = WeightedSample::uniform({1.0, 1.0, 1.0}, 3);
    CHECK_THROWS_WITH_AS(cost_column(src, tgt, 0),
                         doctest::Contains("2"), ValidationError);
  }

  TEST_CASE("precomputed and on-demand columns are bit-identical") {
    Rng rng(7);
    const auto src = testing::random_uniform_sample(rng, 40, 3);
    const auto tgt = testing::random_uniform_sample(rng, 25, 3);
    const CostMatrix dense(src, tgt);
    const CostMatrix lazy(src, tgt, /*precompute_budget=*/0);
    REQUIRE(dense.precomputed());
    REQUIRE(!lazy.precomputed());
    std::vector<double> scratch(src.size());
    for (std::size_t j = 0; j < tgt.size(); ++j) {
      const auto a = dense.column(j, scratch);
      const auto b = lazy.column(j, scratch);
      for (std::size_t i = 0; i < src.size(); ++i) {
        CHECK(a[i] == b[i]);
      }
    }
  }

  TEST_CASE("cost symmetry across transposed access") {
    Rng rng(11);
    const auto a = testing::random_uniform_sample(rng, 9, 2);
    const auto b = testing::random_uniform_sample(rng, 6, 2);
    for (std::size_t j = 0; j < b.size(); ++j) {
      const auto col_ab = cost_column(a, b, j);
      for (std::size_t i = 0; i < a.size(); ++i) {
        const auto col_ba = cost_column(b, a, i);
        CHECK(col_ab[i] == col_ba[j]);
      }
    }
  }
}

TEST_SUITE("simplex_validation") {
  TEST_CASE("exact simplex accepted") {
    const auto p = validate_simplex({0.5, 0.5}, 1e-9);
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(p[1] == doctest::Approx(0.5));
  }

  TEST_CASE("degenerate single entry") {
    const auto p = validate_simplex({1.0}, 1e-9);
    CHECK(p[0] == 1.0);
  }

  TEST_CASE("bad sum rejected") {
    CHECK_THROWS_AS(validate_simplex({0.6, 0.5}, 1e-9), ValidationError);
  }

  TEST_CASE("tiny negative clamped and renormalized") {
    const auto p = validate_simplex({1.0 + 5e-10, -5e-10}, 1e-9);
    CHECK(p[0] == 1.0);
    CHECK(p[1] == 0.0);
  }

  TEST_CASE("large negative rejected") {
    CHECK_THROWS_AS(validate_simplex({1.5, -0.5}, 1e-9), ValidationError);
  }
}

TEST_SUITE("class_partition") {
  TEST_CASE("sizes counted per class") {
    const ClassPartition part({0, 1, 0, 2}, 3);
    CHECK(part.class_size(0) == 2);
    CHECK(part.class_size(1) == 1);
    CHECK(part.class_size(2) == 1);
  }

  TEST_CASE("empty class rejected") {
    CHECK_THROWS_AS(ClassPartition({0, 0, 2, 2}, 3), ValidationError);
  }

  TEST_CASE("out-of-range label rejected") {
    CHECK_THROWS_AS(ClassPartition({0, 3}, 2), ValidationError);
  }
}

TEST_SUITE("solver_config") {
  TEST_CASE("step exponent bounds") {
    SolverConfig cfg;
    cfg.step_exponent = 0.51;
    CHECK_NOTHROW(cfg.validate());
    cfg.step_exponent = 0.99;
    CHECK_NOTHROW(cfg.validate());
    cfg.step_exponent = 1.0;
    CHECK_NOTHROW(cfg.validate());
    cfg.step_exponent = 0.5;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.step_exponent = 1.01;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
  }

  TEST_CASE("published default sets") {
    const auto da = SolverConfig::descent_ascent_defaults();
    CHECK(da.epsilon == 5e-4);
    CHECK(da.step_exponent == 0.51);
    CHECK(da.n_out == 10000);
    CHECK(da.n_in == 10);
    CHECK(da.eta == 10.0);
    CHECK(da.resolved_step_scale(1000) ==
          doctest::Approx(1000 * 5e-4 / 1.9));

    const auto mms = SolverConfig::minmax_defaults();
    CHECK(mms.epsilon == 1e-4);
    CHECK(mms.lambda == 1e-4);
    CHECK(mms.step_exponent == 0.99);
    CHECK(mms.n == 10000);
    CHECK(mms.resolved_step_scale(1000) == 5.0);
  }
}

TEST_SUITE("dual_potential") {
  TEST_CASE("centering check tolerates drift below the bound") {
    auto u = DualPotential::zeros(100);
    u.values[0] = 5e-8;
    u.values[1] = -4.99e-8;
    CHECK_NOTHROW(u.check_centered());
    u.values[0] = 1e-6;
    CHECK_THROWS_AS(u.check_centered(), NumericalError);
  }
}
