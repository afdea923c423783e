#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "topostab/metric.hpp"
#include "topostab/rips.hpp"

namespace topostab {

/// Absolute slack for comparing a measured distance against a bound: 1e-9
/// for unit-scale data, growing with the diameter.
double bound_tolerance(double diam);

/// (s_max - s_min) * diam
double paper_bound(const ScalingTransform& t, double diam);
/// max(s_max - 1, 1 - s_min, 0) * diam
double corrected_bound(const ScalingTransform& t, double diam);

/// Per-dimension bounds using diameter_k. Throw when the cloud has fewer
/// than k+1 points.
double dimension_bound(const ScalingTransform& t, const DistanceMatrix& dm, int k);
double corrected_dimension_bound(const ScalingTransform& t, const DistanceMatrix& dm, int k);

/// (prod s_max^(j) - prod s_min^(j)) * diam for a sequence of transforms.
double cumulative_bound(std::span<const ScalingTransform> ts, double diam);
/// max(prod s_max^(j) - 1, 1 - prod s_min^(j), 0) * diam. Valid without
/// regime conditions since the composed factors lie between the products.
double corrected_cumulative_bound(std::span<const ScalingTransform> ts, double diam);

/// E[s_max - s_min] for n i.i.d. uniform(a, b) factors: (b-a)(1 - 2/(n+1)).
double expected_variability_uniform(double a, double b, int n);

struct UniformFactors {
  double lo = 1.0;
  double hi = 1.0;
};

/// Normal(mean, stddev) conditioned on [lo, hi], sampled by rejection.
struct TruncatedNormalFactors {
  double mean = 1.0;
  double stddev = 0.1;
  double lo = 0.5;
  double hi = 1.5;
};

using FactorDistribution = std::variant<UniformFactors, TruncatedNormalFactors>;

struct RandomScalingSpec {
  FactorDistribution distribution;
  std::size_t axes = 1;
  std::size_t trials = 1;
  std::uint64_t seed = 0;

  /// Throws ValidationError unless the support is strictly positive and
  /// axes, trials >= 1.
  void validate() const;
};

/// 64-bit seed for trial `index` of a campaign seeded with `seed`. Each trial
/// owns its stream, so results do not depend on scheduling.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index);

/// The transform drawn in trial `trial`.
ScalingTransform sample_transform(const RandomScalingSpec& spec, std::size_t trial);

struct MonteCarloReport {
  double mean_variability = 0.0;
  double std_error = 0.0;
  double expected_bound = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  /// Fraction of draws with s_min > 1 or s_max < 1.
  double regime_violation_fraction = 0.0;
};

/// Monte Carlo estimate of E[s_max - s_min] and the implied expected bound
/// E[dS] * diam. Identical output for any thread count.
MonteCarloReport monte_carlo_expected_bound(const RandomScalingSpec& spec, double diam,
                                            unsigned threads = 1);

struct WassersteinCheck {
  double p = 1.0;
  double value = 0.0;
  /// (|D| + |D_S|)^(1/p) * bound_corrected
  double chain_bound = 0.0;
  bool holds_chain = true;
};

struct StabilityReport {
  int homology_dim = 0;
  double diameter = 0.0;  // diam_k of the original cloud
  double measured_bottleneck = 0.0;
  std::optional<WassersteinCheck> wasserstein;
  double bound_paper = 0.0;
  double bound_corrected = 0.0;
  bool regime_contains_one = false;
  bool holds_paper = false;
  bool holds_corrected = false;
  std::size_t points_original = 0;  // |D|, essential classes included
  std::size_t points_scaled = 0;    // |D_S|
};

/// Computes D^k and D_S^k for each requested k, measures their bottleneck
/// (and W_p when `wasserstein_p` is set), and fills in both bounds. Throws
/// InvariantViolation if the corrected bound fails, BudgetError if the
/// persistence computation is too large.
std::vector<StabilityReport> verify_stability(const PointCloud& cloud, const ScalingTransform& t,
                                              std::span<const int> dims,
                                              std::optional<double> wasserstein_p = std::nullopt,
                                              const PersistenceBudget& budget = {});

/// Same as verify_stability for the composition of `ts`, with the cumulative
/// bounds in place of the single-transform ones.
std::vector<StabilityReport> verify_iterative_stability(
    const PointCloud& cloud, std::span<const ScalingTransform> ts, std::span<const int> dims,
    std::optional<double> wasserstein_p = std::nullopt, const PersistenceBudget& budget = {});

}  // namespace topostab
