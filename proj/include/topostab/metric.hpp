#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace topostab {

/// Finite, nonempty set of points in R^n with the Euclidean metric.
/// Coordinates are stored row-major; every point has exactly `dimension()`
/// finite coordinates.
class PointCloud {
 public:
  explicit PointCloud(const std::vector<std::vector<double>>& points);
  static PointCloud from_row_major(std::size_t dimension, std::vector<double> row_major);

  std::size_t size() const { return coords_.size() / dim_; }
  std::size_t dimension() const { return dim_; }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  std::span<const double> coordinates() const { return coords_; }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  PointCloud() = default;

  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

/// Per-axis scaling S(x) = (s_1 x_1, ..., s_n x_n) with strictly positive
/// factors.
class ScalingTransform {
 public:
  explicit ScalingTransform(std::vector<double> factors);

  static ScalingTransform uniform(std::size_t dimension, double factor);
  static ScalingTransform identity(std::size_t dimension) { return uniform(dimension, 1.0); }

  std::size_t dimension() const { return factors_.size(); }
  std::span<const double> factors() const { return factors_; }
  double factor(std::size_t i) const { return factors_[i]; }
  double s_min() const { return s_min_; }
  double s_max() const { return s_max_; }
  /// s_max - s_min
  double variability() const { return s_max_ - s_min_; }
  /// s_min <= 1 <= s_max
  bool contains_one() const { return s_min_ <= 1.0 && 1.0 <= s_max_; }

  friend bool operator==(const ScalingTransform& a, const ScalingTransform& b) {
    return a.factors_ == b.factors_;
  }

 private:
  std::vector<double> factors_;
  double s_min_ = 0.0;
  double s_max_ = 0.0;
};

/// Dense symmetric matrix of pairwise distances with zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  /// Validates symmetry, zero diagonal and nonnegative finite entries.
  DistanceMatrix(std::size_t size, std::vector<double> row_major);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  std::span<const double> entries() const { return entries_; }

 private:
  friend DistanceMatrix distance_matrix(const PointCloud& cloud);
  struct Unchecked {};
  DistanceMatrix(Unchecked, std::size_t size, std::vector<double> row_major)
      : n_(size), entries_(std::move(row_major)) {}

  std::size_t n_ = 0;
  std::vector<double> entries_;
};

DistanceMatrix distance_matrix(const PointCloud& cloud);

PointCloud apply_scaling(const PointCloud& cloud, const ScalingTransform& transform);

/// Largest pairwise distance; 0 for a single point.
double diameter(const DistanceMatrix& dm);

/// Largest pairwise distance among the vertices of any simplex that can
/// carry an H_k class, i.e. over all (k+1)-subsets of points. Subsets of
/// size one have no pairs, so k = 0 uses pairs, matching the H_0 bound.
/// Throws ValidationError when fewer than k+1 points exist.
///
/// Clouds with at most kLiteralDiameterLimit points are enumerated
/// subset by subset; larger clouds use the identity diam_k = diam, which
/// holds for every finite set with at least two points.
double diameter_k(const DistanceMatrix& dm, int k);
inline constexpr std::size_t kLiteralDiameterLimit = 25;

/// Product of transforms, axis by axis. Throws on empty input or mixed
/// dimensions.
ScalingTransform compose(std::span<const ScalingTransform> transforms);

/// s_max - s_min. Bounds |d_S - d_X| / d_X only when s_min <= 1 <= s_max.
double paper_perturbation_factor(const ScalingTransform& t);

/// max(s_max - 1, 1 - s_min, 0). Bounds |d_S - d_X| / d_X for every
/// positive transform.
double corrected_perturbation_factor(const ScalingTransform& t);

}  // namespace topostab
