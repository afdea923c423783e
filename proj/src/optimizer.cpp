#include "topostab/optimizer.hpp"

#include <cmath>
#include <string>

#include "topostab/errors.hpp"

namespace topostab {

namespace {

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

}  // namespace

void OptimizationRequest::validate() const {
  if (n < 1) throw ValidationError("axis count n must be at least 1");
  if (!positive_finite(epsilon)) throw ValidationError("epsilon must be positive");
  if (!positive_finite(diam)) throw ValidationError("diameter must be positive");
  if (!positive_finite(s_min_choice)) throw ValidationError("s_min must be positive");
  if (const auto* spread = std::get_if<BoundarySpread>(&strategy)) {
    if (spread->k < 1 || spread->k > n) {
      throw ValidationError("boundary-spread k must lie in [1, n], got " +
                            std::to_string(spread->k));
    }
  }
}

double max_variability(double epsilon, double diam) {
  if (!positive_finite(epsilon)) throw ValidationError("epsilon must be positive");
  if (diam == 0.0) {
    throw ValidationError("diameter is zero: every scaling is topologically safe (unbounded cap)");
  }
  if (!positive_finite(diam)) throw ValidationError("diameter must be positive");
  return epsilon / diam;
}

OptimizationResult solve(const OptimizationRequest& request) {
  request.validate();
  const double cap = max_variability(request.epsilon, request.diam);
  std::vector<double> factors(request.n, request.s_min_choice);
  double achieved = 0.0;
  if (const auto* spread = std::get_if<BoundarySpread>(&request.strategy)) {
    const double s_max = request.s_min_choice + cap;
    for (std::size_t i = request.n - spread->k; i < request.n; ++i) factors[i] = s_max;
    achieved = cap;
  }
  return OptimizationResult{ScalingTransform(std::move(factors)), achieved, cap,
                            achieved * request.diam};
}

OptimizationResult optimal_scaling_factors(const PointCloud& cloud, double epsilon) {
  OptimizationRequest request;
  request.n = cloud.dimension();
  request.epsilon = epsilon;
  request.diam = diameter(distance_matrix(cloud));
  request.strategy = UniformPreferred{};
  return solve(request);
}

ModalityScaling modality_scaling(const std::vector<std::size_t>& group_sizes, double epsilon,
                                 double diam) {
  if (group_sizes.empty()) throw ValidationError("need at least one feature group");
  for (std::size_t g = 0; g < group_sizes.size(); ++g) {
    if (group_sizes[g] == 0) throw ValidationError("feature group " + std::to_string(g) + " is empty");
  }
  const double cap = max_variability(epsilon, diam);
  std::vector<double> group_factors(group_sizes.size(), 1.0);
  if (group_sizes.size() > 1) group_factors.back() = 1.0 + cap;
  std::vector<double> axes;
  for (std::size_t g = 0; g < group_sizes.size(); ++g) {
    axes.insert(axes.end(), group_sizes[g], group_factors[g]);
  }
  return ModalityScaling{std::move(group_factors), ScalingTransform(std::move(axes))};
}

}  // namespace topostab
