#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "topostab/errors.hpp"
#include "topostab/rips.hpp"

using namespace topostab;

namespace {

const PointCloud kUnitSquare({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
const PointCloud kEquilateral({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2.0}});

std::size_t count_dim(const Filtration& f, int dim) {
  return static_cast<std::size_t>(std::count_if(f.simplices().begin(), f.simplices().end(),
                                                [&](const Simplex& s) { return s.dim() == dim; }));
}

// Exact in floating point for the side-1 triangle: edges are 1 up to rounding.
DistanceMatrix equilateral_dm() { return DistanceMatrix(3, {0, 1, 1, 1, 0, 1, 1, 1, 0}); }

}  // namespace

TEST_CASE("build_filtration: two points") {
  const auto f = build_filtration(distance_matrix(PointCloud({{0, 0}, {3, 4}})), 0, 5.0);
  REQUIRE(f.size() == 3);
  CHECK(f[0].vertices == std::vector<std::uint32_t>{0});
  CHECK(f[1].vertices == std::vector<std::uint32_t>{1});
  CHECK(f[0].value == 0.0);
  CHECK(f[2].vertices == std::vector<std::uint32_t>{0, 1});
  CHECK(f[2].value == 5.0);
}

TEST_CASE("build_filtration: unit square") {
  const auto f = build_filtration(distance_matrix(kUnitSquare), 1, std::sqrt(2.0));
  CHECK(count_dim(f, 0) == 4);
  CHECK(count_dim(f, 1) == 6);
  CHECK(count_dim(f, 2) == 4);
  for (const auto& s : f.simplices()) {
    if (s.dim() == 2) CHECK(s.value == std::sqrt(2.0));
  }
  // Truncating below the diagonal drops diagonals and triangles.
  const auto g = build_filtration(distance_matrix(kUnitSquare), 1, 1.2);
  CHECK(count_dim(g, 1) == 4);
  CHECK(count_dim(g, 2) == 0);
}

TEST_CASE("build_filtration: equilateral triangle") {
  const auto f = build_filtration(equilateral_dm(), 1, 1.0);
  CHECK(count_dim(f, 0) == 3);
  CHECK(count_dim(f, 1) == 3);
  CHECK(count_dim(f, 2) == 1);
  CHECK(f[f.size() - 1].dim() == 2);
  CHECK(f[f.size() - 1].value == 1.0);
}

TEST_CASE("filtration order invariants on random clouds") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto dm = distance_matrix(oracle::random_cloud(rng, 10, 2));
    const auto f = build_filtration(dm, 1, diameter(dm));
    CHECK(f.size() == 10 + 45 + 120);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const Simplex& s = f[i];
      if (i > 0) CHECK(f[i - 1].value <= s.value);
      double diam = 0.0;
      for (std::size_t a = 0; a < s.vertices.size(); ++a) {
        for (std::size_t b = a + 1; b < s.vertices.size(); ++b) {
          diam = std::max(diam, dm(s.vertices[a], s.vertices[b]));
        }
      }
      CHECK(s.value == diam);
      for (std::size_t drop = 0; drop < s.vertices.size() && s.dim() > 0; ++drop) {
        auto face = s.vertices;
        face.erase(face.begin() + static_cast<long>(drop));
        const auto idx = f.index_of(face);
        REQUIRE(idx.has_value());
        CHECK(*idx < i);
      }
    }
  }
}

TEST_CASE("build_filtration errors") {
  const auto dm = distance_matrix(kUnitSquare);
  CHECK_THROWS_AS(build_filtration(dm, 1, 2.0, 10), BudgetError);
  CHECK_THROWS_AS(build_filtration(dm, -1, 2.0), ValidationError);
  CHECK_THROWS_AS(build_filtration(dm, 1, 0.0), ValidationError);
}

TEST_CASE("Filtration rejects invalid orders") {
  using V = std::vector<std::uint32_t>;
  // Edge before its vertex.
  CHECK_THROWS_AS(Filtration(2, 1, {{V{0}, 0}, {V{0, 1}, 1}, {V{1}, 0}}), ValidationError);
  // Decreasing values.
  CHECK_THROWS_AS(Filtration(2, 1, {{V{0}, 0}, {V{1}, 2}, {V{0, 1}, 1}}), ValidationError);
  // Unsorted vertices, out-of-range vertex, duplicates, dimension above skeleton.
  CHECK_THROWS_AS(Filtration(2, 1, {{V{0}, 0}, {V{1}, 0}, {V{1, 0}, 1}}), ValidationError);
  CHECK_THROWS_AS(Filtration(2, 1, {{V{0}, 0}, {V{2}, 0}}), ValidationError);
  CHECK_THROWS_AS(Filtration(2, 1, {{V{0}, 0}, {V{0}, 0}}), ValidationError);
  CHECK_THROWS_AS(Filtration(2, 0, {{V{0}, 0}, {V{1}, 0}, {V{0, 1}, 1}}), ValidationError);
  CHECK_NOTHROW(Filtration(2, 1, {{V{0}, 0}, {V{1}, 0}, {V{0, 1}, 1}}));
}

TEST_CASE("compute_persistence: two points") {
  const auto dm = distance_matrix(PointCloud({{0, 0}, {3, 4}}));
  const auto ds = compute_persistence(build_filtration(dm, 0, 5.0), 0);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].pairs == std::vector<PersistencePair>{{0.0, 5.0}});
  CHECK(ds[0].essential == std::vector<double>{0.0});
}

TEST_CASE("compute_persistence: unit square has one loop") {
  const auto ds = rips_persistence(distance_matrix(kUnitSquare), 1);
  REQUIRE(ds.size() == 2);
  CHECK(ds[0].pairs == std::vector<PersistencePair>(3, {0.0, 1.0}));
  CHECK(ds[0].essential == std::vector<double>{0.0});
  REQUIRE(ds[1].pairs.size() == 1);
  CHECK(ds[1].pairs[0].birth == 1.0);
  CHECK(ds[1].pairs[0].death == std::sqrt(2.0));
  CHECK(ds[1].essential.empty());

  // The diagonals open two more cycles that the triangles fill instantly.
  const auto with_zero = compute_persistence(
      build_filtration(distance_matrix(kUnitSquare), 1, std::sqrt(2.0)), 1, {true});
  CHECK(with_zero[1].pairs.size() == 3);
  CHECK(with_zero[1] == oracle::rips_diagrams(distance_matrix(kUnitSquare), 1, true)[1]);
}

TEST_CASE("compute_persistence: equilateral triangle has no loop") {
  const auto ds = compute_persistence(build_filtration(equilateral_dm(), 1, 1.0), 1);
  CHECK(ds[0].pairs == std::vector<PersistencePair>(2, {0.0, 1.0}));
  CHECK(ds[0].essential == std::vector<double>{0.0});
  CHECK(ds[1].pairs.empty());
  CHECK(ds[1].essential.empty());
  // Geometric version agrees.
  const auto geo = rips_persistence(distance_matrix(kEquilateral), 1);
  CHECK(geo[1].pairs.empty());
  CHECK(geo[0].pairs.size() == 2);
}

TEST_CASE("compute_persistence preconditions") {
  const auto f = build_filtration(distance_matrix(kUnitSquare), 0, 2.0);
  CHECK_THROWS_AS(compute_persistence(f, 1), ValidationError);
  CHECK_THROWS_AS(compute_persistence(f, -1), ValidationError);
}

TEST_CASE("truncated filtration keeps essential classes") {
  const auto f = build_filtration(distance_matrix(kUnitSquare), 1, 1.2);
  const auto ds = compute_persistence(f, 1);
  CHECK(ds[1].pairs.empty());
  CHECK(ds[1].essential == std::vector<double>{1.0});
}

TEST_CASE("coincident points") {
  const PointCloud dup({{1, 1}, {1, 1}, {1, 1}});
  const auto ds = rips_persistence(distance_matrix(dup), 1);
  CHECK(ds[0].pairs.empty());
  CHECK(ds[0].essential == std::vector<double>{0.0});
  const auto kept = rips_persistence(distance_matrix(dup), 1, {}, {true});
  CHECK(kept[0].pairs.size() == 2);
}

TEST_CASE("agrees with the textbook reduction oracle") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + trial % 8;
    const int max_k = trial % 3;
    // Integer coordinates create many ties.
    std::uniform_int_distribution<int> coord(0, 3);
    std::vector<double> coords(n * 2);
    for (double& c : coords) c = trial % 2 ? coord(rng) : std::uniform_real_distribution<>(0, 1)(rng);
    const auto dm = distance_matrix(PointCloud::from_row_major(2, coords));
    const bool keep = trial % 4 == 0;
    const auto got = rips_persistence(dm, max_k, {}, {keep});
    const auto want = oracle::rips_diagrams(dm, max_k, keep);
    REQUIRE(got.size() == want.size());
    for (std::size_t k = 0; k < got.size(); ++k) CHECK(got[k] == want[k]);
  }
}

TEST_CASE("H0 deaths are minimum spanning tree weights") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto dm = distance_matrix(oracle::random_cloud(rng, 2 + trial % 30, 1 + trial % 4));
    const auto ds = rips_persistence(dm, 0, {}, {true});
    std::vector<double> deaths;
    for (const auto& p : ds[0].pairs) deaths.push_back(p.death);
    std::sort(deaths.begin(), deaths.end());
    CHECK(deaths == oracle::mst_weights(dm));
    CHECK(ds[0].essential.size() == 1);
  }
}

TEST_CASE("uniform scaling scales every diagram point") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cloud = oracle::random_cloud(rng, 12, 2);
    const auto base = rips_persistence(distance_matrix(cloud), 1);
    // Powers of two scale exactly.
    const double exact = 4.0;
    const auto scaled =
        rips_persistence(distance_matrix(apply_scaling(cloud, ScalingTransform::uniform(2, exact))), 1);
    for (std::size_t k = 0; k < 2; ++k) {
      REQUIRE(scaled[k].pairs.size() == base[k].pairs.size());
      for (std::size_t i = 0; i < base[k].pairs.size(); ++i) {
        CHECK(scaled[k].pairs[i].birth == exact * base[k].pairs[i].birth);
        CHECK(scaled[k].pairs[i].death == exact * base[k].pairs[i].death);
      }
    }
    const double s = 1.37;
    const auto other =
        rips_persistence(distance_matrix(apply_scaling(cloud, ScalingTransform::uniform(2, s))), 1);
    for (std::size_t k = 0; k < 2; ++k) {
      REQUIRE(other[k].pairs.size() == base[k].pairs.size());
      for (std::size_t i = 0; i < base[k].pairs.size(); ++i) {
        CHECK(other[k].pairs[i].death == doctest::Approx(s * base[k].pairs[i].death).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("point order does not matter") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 14;
    const auto cloud = oracle::random_cloud(rng, n, 3);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> coords;
    for (std::size_t i : perm) {
      const auto p = cloud.point(i);
      coords.insert(coords.end(), p.begin(), p.end());
    }
    const auto shuffled = PointCloud::from_row_major(3, coords);
    CHECK(rips_persistence(distance_matrix(cloud), 2) ==
          rips_persistence(distance_matrix(shuffled), 2));
  }
}

TEST_CASE("finite deaths are values of (k+1)-simplices") {
  std::mt19937_64 rng(4);
  const auto dm = distance_matrix(oracle::random_cloud(rng, 15, 3));
  const auto f = build_filtration(dm, 2, diameter(dm));
  const auto ds = compute_persistence(f, 2);
  for (const auto& d : ds) {
    for (const auto& p : d.pairs) {
      CHECK(p.death >= p.birth);
      const bool found = std::any_of(f.simplices().begin(), f.simplices().end(), [&](const Simplex& s) {
        return s.dim() == d.dim + 1 && s.value == p.death;
      });
      CHECK(found);
    }
  }
}

TEST_CASE("persistence budget") {
  const PersistenceBudget budget;
  CHECK_NOTHROW(budget.check(64, 1));
  CHECK_THROWS_AS(budget.check(65, 1), BudgetError);
  CHECK_NOTHROW(budget.check(25, 2));
  CHECK_THROWS_AS(budget.check(26, 2), BudgetError);
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(rips_persistence(distance_matrix(oracle::random_cloud(rng, 30, 2)), 2), BudgetError);
}
