#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "topostab/metric.hpp"

namespace topostab {

/// All factors equal to s_min_choice (zero variability).
struct UniformPreferred {};

/// n - k factors at s_min_choice and the last k at s_min_choice + cap, which
/// spends the whole variability budget.
struct BoundarySpread {
  std::size_t k = 1;
};

using ScalingStrategy = std::variant<UniformPreferred, BoundarySpread>;

struct OptimizationRequest {
  std::size_t n = 1;
  double epsilon = 1.0;
  double diam = 1.0;
  ScalingStrategy strategy = UniformPreferred{};
  double s_min_choice = 1.0;

  void validate() const;
};

struct OptimizationResult {
  ScalingTransform transform;
  /// The variability the solver assigned (exactly 0 or exactly the cap).
  double achieved_variability = 0.0;
  double variability_cap = 0.0;
  /// achieved_variability * diam
  double bound_at_solution = 0.0;
};

/// epsilon / diam: the largest s_max - s_min for which the bottleneck bound
/// stays within epsilon. A zero diameter has no finite cap and is rejected.
double max_variability(double epsilon, double diam);

OptimizationResult solve(const OptimizationRequest& request);

/// Computes the cloud diameter, then picks factors for tolerance epsilon.
/// Since the cap is never negative, uniform factors always qualify and are
/// returned.
OptimizationResult optimal_scaling_factors(const PointCloud& cloud, double epsilon);

struct ModalityScaling {
  std::vector<double> group_factors;
  ScalingTransform transform;  // group factors repeated over each group's axes
};

/// One factor per feature group: every group at 1 except the last, which
/// gets 1 + epsilon/diam.
ModalityScaling modality_scaling(const std::vector<std::size_t>& group_sizes, double epsilon,
                                 double diam);

}  // namespace topostab
