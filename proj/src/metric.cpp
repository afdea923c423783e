#include "topostab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "topostab/errors.hpp"

namespace topostab {

namespace {

void check_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError(std::string(what) + ": non-finite value at position " +
                            std::to_string(i));
    }
  }
}

// Max pairwise distance over all subsets of `remaining` more vertices drawn
// from [start, n), given the vertices already chosen.
double max_over_subsets(const DistanceMatrix& dm, std::vector<std::size_t>& chosen,
                        std::size_t start, std::size_t remaining, double current) {
  if (remaining == 0) return current;
  double best = 0.0;
  const std::size_t n = dm.size();
  for (std::size_t v = start; v + remaining <= n; ++v) {
    double with_v = current;
    for (std::size_t u : chosen) with_v = std::max(with_v, dm(u, v));
    chosen.push_back(v);
    best = std::max(best, max_over_subsets(dm, chosen, v + 1, remaining - 1, with_v));
    chosen.pop_back();
  }
  return best;
}

}  // namespace

PointCloud::PointCloud(const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw ValidationError("point cloud must be nonempty");
  dim_ = points.front().size();
  if (dim_ == 0) throw ValidationError("points must have at least one coordinate");
  coords_.reserve(points.size() * dim_);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dim_) {
      throw ValidationError("point " + std::to_string(i) + " has " +
                            std::to_string(points[i].size()) + " coordinates, expected " +
                            std::to_string(dim_));
    }
    coords_.insert(coords_.end(), points[i].begin(), points[i].end());
  }
  check_finite(coords_, "point cloud");
}

PointCloud PointCloud::from_row_major(std::size_t dimension, std::vector<double> row_major) {
  if (dimension == 0) throw ValidationError("points must have at least one coordinate");
  if (row_major.empty()) throw ValidationError("point cloud must be nonempty");
  if (row_major.size() % dimension != 0) {
    throw ValidationError("coordinate count is not a multiple of the dimension");
  }
  check_finite(row_major, "point cloud");
  PointCloud cloud;
  cloud.dim_ = dimension;
  cloud.coords_ = std::move(row_major);
  return cloud;
}

ScalingTransform::ScalingTransform(std::vector<double> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw ValidationError("scaling transform needs at least one factor");
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (!std::isfinite(factors_[i]) || factors_[i] <= 0.0) {
      throw ValidationError("scaling factor " + std::to_string(i) +
                            " must be finite and strictly positive");
    }
  }
  const auto [lo, hi] = std::minmax_element(factors_.begin(), factors_.end());
  s_min_ = *lo;
  s_max_ = *hi;
}

ScalingTransform ScalingTransform::uniform(std::size_t dimension, double factor) {
  return ScalingTransform(std::vector<double>(dimension, factor));
}

DistanceMatrix::DistanceMatrix(std::size_t size, std::vector<double> row_major)
    : n_(size), entries_(std::move(row_major)) {
  if (n_ == 0) throw ValidationError("distance matrix must be nonempty");
  if (entries_.size() != n_ * n_) throw ValidationError("distance matrix is not square");
  for (std::size_t i = 0; i < n_; ++i) {
    if ((*this)(i, i) != 0.0) throw ValidationError("distance matrix diagonal must be zero");
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double d = (*this)(i, j);
      if (!std::isfinite(d) || d < 0.0) {
        throw ValidationError("distance matrix entries must be finite and nonnegative");
      }
      if (d != (*this)(j, i)) throw ValidationError("distance matrix must be symmetric");
    }
  }
}

DistanceMatrix distance_matrix(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  std::vector<double> entries(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = cloud.point(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto q = cloud.point(j);
      double sum = 0.0;
      for (std::size_t c = 0; c < p.size(); ++c) {
        const double diff = p[c] - q[c];
        sum += diff * diff;
      }
      const double d = std::sqrt(sum);
      entries[i * n + j] = d;
      entries[j * n + i] = d;
    }
  }
  return DistanceMatrix(DistanceMatrix::Unchecked{}, n, std::move(entries));
}

PointCloud apply_scaling(const PointCloud& cloud, const ScalingTransform& transform) {
  if (transform.dimension() != cloud.dimension()) {
    throw ValidationError("transform has " + std::to_string(transform.dimension()) +
                          " factors but the cloud has dimension " +
                          std::to_string(cloud.dimension()));
  }
  const std::size_t dim = cloud.dimension();
  std::vector<double> scaled(cloud.coordinates().begin(), cloud.coordinates().end());
  for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] *= transform.factor(i % dim);
  return PointCloud::from_row_major(dim, std::move(scaled));
}

double diameter(const DistanceMatrix& dm) {
  const auto e = dm.entries();
  return e.empty() ? 0.0 : *std::max_element(e.begin(), e.end());
}

double diameter_k(const DistanceMatrix& dm, int k) {
  if (k < 0) throw ValidationError("homology dimension must be nonnegative");
  const std::size_t tuple = static_cast<std::size_t>(k) + 1;
  if (dm.size() < tuple) {
    throw ValidationError("diameter_k needs at least k+1 = " + std::to_string(tuple) +
                          " points, cloud has " + std::to_string(dm.size()));
  }
  const std::size_t subset = std::max<std::size_t>(tuple, 2);
  if (dm.size() < subset) return 0.0;
  if (dm.size() > kLiteralDiameterLimit) return diameter(dm);
  std::vector<std::size_t> chosen;
  chosen.reserve(subset);
  return max_over_subsets(dm, chosen, 0, subset, 0.0);
}

ScalingTransform compose(std::span<const ScalingTransform> transforms) {
  if (transforms.empty()) throw ValidationError("compose needs at least one transform");
  std::vector<double> product(transforms.front().factors().begin(),
                              transforms.front().factors().end());
  for (std::size_t j = 1; j < transforms.size(); ++j) {
    if (transforms[j].dimension() != product.size()) {
      throw ValidationError("compose: transform " + std::to_string(j) + " has dimension " +
                            std::to_string(transforms[j].dimension()) + ", expected " +
                            std::to_string(product.size()));
    }
    for (std::size_t i = 0; i < product.size(); ++i) product[i] *= transforms[j].factor(i);
  }
  return ScalingTransform(std::move(product));
}

double paper_perturbation_factor(const ScalingTransform& t) { return t.variability(); }

double corrected_perturbation_factor(const ScalingTransform& t) {
  return std::max({t.s_max() - 1.0, 1.0 - t.s_min(), 0.0});
}

}  // namespace topostab
