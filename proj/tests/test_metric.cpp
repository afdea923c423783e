#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "topostab/errors.hpp"
#include "topostab/metric.hpp"

using namespace topostab;

namespace {

const PointCloud kUnitSquare({{0, 0}, {1, 0}, {1, 1}, {0, 1}});

ScalingTransform random_transform(std::mt19937_64& rng, std::size_t dim, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> f(dim);
  for (double& x : f) x = u(rng);
  return ScalingTransform(f);
}

}  // namespace

TEST_CASE("distance_matrix on small clouds") {
  const auto dm = distance_matrix(PointCloud({{0, 0}, {3, 4}}));
  CHECK(dm(0, 1) == 5.0);
  CHECK(dm(1, 0) == 5.0);
  CHECK(dm(0, 0) == 0.0);

  const auto single = distance_matrix(PointCloud({{0, 0}}));
  CHECK(single.size() == 1);
  CHECK(single(0, 0) == 0.0);

  const auto sq = distance_matrix(kUnitSquare);
  CHECK(sq(0, 1) == 1.0);
  CHECK(sq(1, 2) == 1.0);
  CHECK(sq(0, 2) == doctest::Approx(1.41421356).epsilon(1e-8));
  CHECK(sq(1, 3) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("distance matrix validation") {
  CHECK_NOTHROW(DistanceMatrix(2, {0, 1, 1, 0}));
  CHECK_THROWS_AS(DistanceMatrix(2, {0, 1, 2, 0}), ValidationError);
  CHECK_THROWS_AS(DistanceMatrix(2, {1, 1, 1, 0}), ValidationError);
  CHECK_THROWS_AS(DistanceMatrix(2, {0, -1, -1, 0}), ValidationError);
  CHECK_THROWS_AS(DistanceMatrix(2, {0, 1, 1}), ValidationError);
}

TEST_CASE("point cloud and transform invariants") {
  CHECK_THROWS_AS(PointCloud(std::vector<std::vector<double>>{}), ValidationError);
  CHECK_THROWS_AS(PointCloud({{0, 0}, {1}}), ValidationError);
  CHECK_THROWS_AS(PointCloud({{0, std::nan("")}}), ValidationError);
  CHECK_THROWS_AS(PointCloud({{0, std::numeric_limits<double>::infinity()}}), ValidationError);
  CHECK_NOTHROW(PointCloud({{1, 1}, {1, 1}}));  // duplicates allowed

  CHECK_THROWS_AS(ScalingTransform({1.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(ScalingTransform({-1.0}), ValidationError);
  CHECK_THROWS_AS(ScalingTransform(std::vector<double>{}), ValidationError);

  const ScalingTransform t({0.9, 1.3, 1.1});
  CHECK(t.s_min() == 0.9);
  CHECK(t.s_max() == 1.3);
  CHECK(t.variability() == doctest::Approx(0.4));
  CHECK(t.contains_one());
  CHECK_FALSE(ScalingTransform({3.0, 3.0}).contains_one());
}

TEST_CASE("apply_scaling") {
  CHECK(apply_scaling(PointCloud({{3, 4}}), ScalingTransform({1, 1})) == PointCloud({{3, 4}}));

  const auto scaled = apply_scaling(PointCloud({{0, 0}, {3, 4}}), ScalingTransform({1, 2}));
  CHECK(scaled == PointCloud({{0, 0}, {3, 8}}));
  CHECK(distance_matrix(scaled)(0, 1) == doctest::Approx(8.5440037).epsilon(1e-7));
  CHECK(distance_matrix(scaled)(0, 1) == std::sqrt(73.0));

  CHECK(apply_scaling(PointCloud({{1, 1, 1}}), ScalingTransform({2, 3, 4})) ==
        PointCloud({{2, 3, 4}}));

  CHECK_THROWS_AS(apply_scaling(PointCloud({{1, 1}}), ScalingTransform({2, 3, 4})),
                  ValidationError);
}

TEST_CASE("diameter") {
  const auto rgb = distance_matrix(PointCloud({{0, 0, 0}, {255, 255, 255}}));
  CHECK(diameter(rgb) == doctest::Approx(441.67).epsilon(1e-5));
  CHECK(diameter(rgb) == doctest::Approx(255.0 * std::sqrt(3.0)));

  const auto ranges = distance_matrix(PointCloud({{50, 60, 40}, {200, 180, 220}}));
  CHECK(diameter(ranges) == std::sqrt(69300.0));
  CHECK(std::abs(diameter(ranges) - 263.249) < 1e-3);

  CHECK(diameter(distance_matrix(PointCloud(std::vector<std::vector<double>>{{7, 7}}))) == 0.0);
}

TEST_CASE("diameter_k") {
  const auto sq = distance_matrix(kUnitSquare);
  CHECK(diameter_k(sq, 1) == std::sqrt(2.0));
  CHECK(diameter_k(sq, 0) == diameter(sq));

  const auto line = distance_matrix(PointCloud({{0}, {1}, {2}}));
  CHECK(diameter_k(line, 2) == 2.0);
  CHECK_THROWS_AS(diameter_k(line, 3), ValidationError);
  CHECK_THROWS_AS(diameter_k(line, -1), ValidationError);

  CHECK(diameter_k(distance_matrix(PointCloud(std::vector<std::vector<double>>{{1.0}})), 0) == 0.0);
}

TEST_CASE("diameter_k equals diameter, checked against subset enumeration") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 11;
    const auto dm = distance_matrix(oracle::random_cloud(rng, n, 1 + trial % 4));
    for (int k = 0; k <= 3 && static_cast<std::size_t>(k) + 1 <= n; ++k) {
      const double literal = diameter_k(dm, k);
      CHECK(literal == oracle::subset_diameter(dm, std::max(k + 1, 2)));
      CHECK(literal == diameter(dm));
    }
  }
  // Beyond the enumeration limit the shortcut is used.
  const auto big = distance_matrix(oracle::random_cloud(rng, kLiteralDiameterLimit + 5, 3));
  CHECK(diameter_k(big, 2) == diameter(big));
}

TEST_CASE("compose") {
  const std::vector<ScalingTransform> pair{ScalingTransform({1, 1.1}), ScalingTransform({1, 1.2})};
  const auto c = compose(pair);
  CHECK(c.factor(0) == 1.0);
  CHECK(c.factor(1) == doctest::Approx(1.32).epsilon(1e-15));
  CHECK(c.variability() == doctest::Approx(0.32).epsilon(1e-14));

  const std::vector<ScalingTransform> one{ScalingTransform({2, 5})};
  CHECK(compose(one) == one.front());

  const std::vector<ScalingTransform> inverse{ScalingTransform({2, 2}), ScalingTransform({0.5, 0.5})};
  CHECK(compose(inverse) == ScalingTransform({1, 1}));
  CHECK(compose(inverse).variability() == 0.0);

  const std::vector<ScalingTransform> mixed{ScalingTransform({1, 1}), ScalingTransform({1})};
  CHECK_THROWS_AS(compose(mixed), ValidationError);
  CHECK_THROWS_AS(compose(std::span<const ScalingTransform>{}), ValidationError);
}

TEST_CASE("compose is associative") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 1 + trial % 4;
    const auto a = random_transform(rng, dim, 0.5, 2.0);
    const auto b = random_transform(rng, dim, 0.5, 2.0);
    const auto c = random_transform(rng, dim, 0.5, 2.0);
    const std::vector<ScalingTransform> ab{a, b}, bc{b, c};
    const std::vector<ScalingTransform> left{compose(ab), c}, right{a, compose(bc)};
    const auto l = compose(left), r = compose(right);
    for (std::size_t i = 0; i < dim; ++i) {
      CHECK(l.factor(i) == doctest::Approx(r.factor(i)).epsilon(1e-14));
    }
  }
}

TEST_CASE("uniform scaling multiplies the diameter") {
  std::mt19937_64 rng(3);
  for (double s : {0.25, 0.7, 2.0, 3.5}) {
    const auto cloud = oracle::random_cloud(rng, 9, 3);
    const double d = diameter(distance_matrix(cloud));
    const double ds = diameter(distance_matrix(apply_scaling(cloud, ScalingTransform::uniform(3, s))));
    CHECK(ds == doctest::Approx(s * d).epsilon(1e-14));
  }
}

TEST_CASE("scaled distances stay between s_min and s_max times the original") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 1 + trial % 5;
    const auto cloud = oracle::random_cloud(rng, 8, dim);
    const auto t = random_transform(rng, dim, 0.2, 4.0);
    const auto d = distance_matrix(cloud);
    const auto ds = distance_matrix(apply_scaling(cloud, t));
    const double tol = 1e-9 * std::max(1.0, diameter(d));
    const double corrected = corrected_perturbation_factor(t);
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (std::size_t j = i + 1; j < d.size(); ++j) {
        CHECK(t.s_min() * d(i, j) <= ds(i, j) + tol);
        CHECK(ds(i, j) <= t.s_max() * d(i, j) + tol);
        CHECK(std::abs(ds(i, j) - d(i, j)) <= corrected * d(i, j) + tol);
        if (t.contains_one()) {
          CHECK(std::abs(ds(i, j) - d(i, j)) <= paper_perturbation_factor(t) * d(i, j) + tol);
        }
      }
    }
  }
}

TEST_CASE("variability factor fails outside s_min <= 1 <= s_max") {
  const auto d = distance_matrix(PointCloud({{0, 0}, {1, 0}}));
  const ScalingTransform t({3, 3});
  const auto ds = distance_matrix(apply_scaling(PointCloud({{0, 0}, {1, 0}}), t));
  CHECK(std::abs(ds(0, 1) - d(0, 1)) == 2.0);
  CHECK(paper_perturbation_factor(t) == 0.0);
  CHECK(corrected_perturbation_factor(t) == 2.0);
  CHECK(corrected_perturbation_factor(ScalingTransform({0.9, 1.1})) == doctest::Approx(0.1));
  CHECK(corrected_perturbation_factor(ScalingTransform({1, 1})) == 0.0);
}
