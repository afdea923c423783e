#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "topostab/errors.hpp"
#include "topostab/optimizer.hpp"
#include "topostab/stability.hpp"

using namespace topostab;

namespace {

const double kRgbDiam = 255.0 * std::sqrt(3.0);
const double kCaseDiam = std::sqrt(150.0 * 150.0 + 120.0 * 120.0 + 180.0 * 180.0);

}  // namespace

TEST_CASE("max variability examples") {
  CHECK(max_variability(10.0, 441.673) == doctest::Approx(0.022641).epsilon(1e-4));
  CHECK(max_variability(10.0, kRgbDiam) == doctest::Approx(0.0227).epsilon(2e-3));
  CHECK(max_variability(5.0, 200.0) == 0.025);
  CHECK(max_variability(5.0, 263.249) == doctest::Approx(0.018994).epsilon(1e-4));
  CHECK_THROWS_AS(max_variability(5.0, 0.0), ValidationError);
  CHECK_THROWS_AS(max_variability(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(max_variability(-1.0, 1.0), ValidationError);
}

TEST_CASE("solve examples") {
  const auto uniform = solve({3, 10.0, 441.673, UniformPreferred{}});
  CHECK(uniform.transform == ScalingTransform({1.0, 1.0, 1.0}));
  CHECK(uniform.achieved_variability == 0.0);
  CHECK(uniform.bound_at_solution == 0.0);

  const auto rgb = solve({3, 5.0, kCaseDiam, BoundarySpread{1}});
  CHECK(rgb.transform.factor(0) == 1.0);
  CHECK(rgb.transform.factor(1) == 1.0);
  CHECK(rgb.transform.factor(2) == doctest::Approx(1.018994).epsilon(1e-6));
  CHECK(rgb.achieved_variability == rgb.variability_cap);

  const auto multimodal = solve({2, 5.0, 200.0, BoundarySpread{1}});
  CHECK(multimodal.transform == ScalingTransform({1.0, 1.025}));
  CHECK(multimodal.bound_at_solution == 5.0);
}

TEST_CASE("request validation") {
  CHECK_THROWS_AS(solve({0, 1.0, 1.0, UniformPreferred{}}), ValidationError);
  CHECK_THROWS_AS(solve({2, 0.0, 1.0, UniformPreferred{}}), ValidationError);
  CHECK_THROWS_AS(solve({2, 1.0, 0.0, UniformPreferred{}}), ValidationError);
  CHECK_THROWS_AS(solve({2, 1.0, 1.0, BoundarySpread{0}}), ValidationError);
  CHECK_THROWS_AS(solve({2, 1.0, 1.0, BoundarySpread{3}}), ValidationError);
  CHECK_THROWS_AS(solve({2, 1.0, 1.0, UniformPreferred{}, 0.0}), ValidationError);
  CHECK_THROWS_AS(solve({2, INFINITY, 1.0, UniformPreferred{}}), ValidationError);
  CHECK_NOTHROW(solve({2, 1.0, 1.0, BoundarySpread{2}}));
}

TEST_CASE("solutions satisfy the tolerance") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> eps(0.01, 10.0), diam(0.1, 500.0), smin(0.2, 3.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + trial % 6;
    OptimizationRequest req{n, eps(rng), diam(rng), UniformPreferred{}, trial % 3 ? 1.0 : smin(rng)};
    if (trial % 2) req.strategy = BoundarySpread{1 + static_cast<std::size_t>(trial) % n};
    const auto r = solve(req);
    CHECK(r.transform.factors().size() == n);
    CHECK(r.variability_cap == max_variability(req.epsilon, req.diam));
    CHECK(r.achieved_variability <= r.variability_cap + 1e-12);
    CHECK(paper_bound(r.transform, req.diam) <= req.epsilon + 1e-9);
    for (double f : r.transform.factors()) {
      CHECK(f >= req.s_min_choice);
      CHECK(f <= req.s_min_choice + r.variability_cap);
    }
    if (std::holds_alternative<UniformPreferred>(req.strategy)) {
      CHECK(r.achieved_variability == 0.0);
      CHECK(r.transform.variability() == 0.0);
    } else if (n > std::get<BoundarySpread>(req.strategy).k) {
      CHECK(r.achieved_variability == r.variability_cap);
      CHECK(r.transform.variability() == doctest::Approx(r.variability_cap).epsilon(1e-12));
    }
  }
}

TEST_CASE("solutions keep measured distances within epsilon") {
  std::mt19937_64 rng(42);
  const int dims[] = {0, 1};
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto cloud = oracle::random_cloud(rng, 5 + trial % 20, n);
    const double diam = diameter(distance_matrix(cloud));
    const double eps = 0.05 + 0.01 * trial;
    const auto r = solve({n, eps, diam, BoundarySpread{1}});
    for (const auto& rep : verify_stability(cloud, r.transform, dims)) {
      CHECK(rep.regime_contains_one);
      CHECK(rep.measured_bottleneck <= eps + 1e-9);
    }
  }
}

TEST_CASE("optimal_scaling_factors returns uniform factors") {
  const PointCloud pair({{50, 60, 40}, {200, 180, 220}});
  const auto r = optimal_scaling_factors(pair, 5.0);
  CHECK(r.transform == ScalingTransform::identity(3));
  CHECK(r.variability_cap == doctest::Approx(5.0 / kCaseDiam).epsilon(1e-14));
  CHECK_THROWS_AS(optimal_scaling_factors(PointCloud(std::vector<std::vector<double>>{{1.0, 2.0}}), 5.0),
                  ValidationError);
}

TEST_CASE("modality scaling") {
  const auto two = modality_scaling({300, 512}, 5.0, 200.0);
  CHECK(two.group_factors == std::vector<double>{1.0, 1.025});
  CHECK(two.transform.factors().size() == 812);
  CHECK(two.transform.factor(299) == 1.0);
  CHECK(two.transform.factor(300) == 1.025);
  CHECK(paper_bound(two.transform, 200.0) <= 5.0 + 1e-9);

  const auto one = modality_scaling({7}, 5.0, 200.0);
  CHECK(one.group_factors == std::vector<double>{1.0});
  CHECK(one.transform.variability() == 0.0);

  const auto three = modality_scaling({4, 4, 4}, 2.0, 100.0);
  CHECK(three.group_factors == std::vector<double>{1.0, 1.0, 1.02});

  CHECK_THROWS_AS(modality_scaling({3, 0}, 5.0, 200.0), ValidationError);
  CHECK_THROWS_AS(modality_scaling({}, 5.0, 200.0), ValidationError);
  CHECK_THROWS_AS(modality_scaling({3, 3}, 5.0, 0.0), ValidationError);
}
