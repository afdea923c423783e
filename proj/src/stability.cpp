#include "topostab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <thread>

#include "topostab/diagram_distance.hpp"
#include "topostab/errors.hpp"

namespace topostab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void check_diam(double diam) {
  if (!(diam >= 0.0) || !std::isfinite(diam)) {
    throw ValidationError("diameter must be finite and nonnegative");
  }
}

struct ProductExtremes {
  double s_min = 1.0;
  double s_max = 1.0;
};

ProductExtremes product_extremes(std::span<const ScalingTransform> ts) {
  if (ts.empty()) throw ValidationError("need at least one transform");
  ProductExtremes e;
  for (const auto& t : ts) {
    if (t.dimension() != ts.front().dimension()) {
      throw ValidationError("transforms in a sequence must share a dimension");
    }
    e.s_min *= t.s_min();
    e.s_max *= t.s_max();
  }
  return e;
}

double draw_factor(const FactorDistribution& dist, std::mt19937_64& rng) {
  if (const auto* u = std::get_if<UniformFactors>(&dist)) {
    if (u->lo == u->hi) return u->lo;
    return std::uniform_real_distribution<double>(u->lo, u->hi)(rng);
  }
  const auto& tn = std::get<TruncatedNormalFactors>(dist);
  if (tn.stddev == 0.0) return tn.mean;
  std::normal_distribution<double> normal(tn.mean, tn.stddev);
  for (int attempt = 0; attempt < 1'000'000; ++attempt) {
    const double x = normal(rng);
    if (x >= tn.lo && x <= tn.hi) return x;
  }
  throw ValidationError("truncated normal window [lo, hi] has negligible probability mass");
}

using BoundFn = std::function<std::pair<double, double>(double diam_k)>;

std::vector<StabilityReport> verify_impl(const PointCloud& cloud, const ScalingTransform& applied,
                                         bool regime, const BoundFn& bounds,
                                         std::span<const int> dims,
                                         std::optional<double> wasserstein_p,
                                         const PersistenceBudget& budget) {
  if (dims.empty()) throw ValidationError("no homology dimensions requested");
  int max_k = 0;
  for (int k : dims) {
    if (k < 0) throw ValidationError("homology dimensions must be nonnegative");
    max_k = std::max(max_k, k);
  }
  if (wasserstein_p && (!(*wasserstein_p >= 1.0) || !std::isfinite(*wasserstein_p))) {
    throw ValidationError("Wasserstein order p must be finite and at least 1");
  }
  const DistanceMatrix dm = distance_matrix(cloud);
  const DistanceMatrix dm_scaled = distance_matrix(apply_scaling(cloud, applied));
  // Validates N >= k+1 before any expensive work.
  std::vector<double> diam_k;
  for (int k : dims) diam_k.push_back(diameter_k(dm, k));

  const auto original = rips_persistence(dm, max_k, budget);
  const auto scaled = rips_persistence(dm_scaled, max_k, budget);

  std::vector<StabilityReport> reports;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const int k = dims[i];
    const auto& d = original[static_cast<std::size_t>(k)];
    const auto& ds = scaled[static_cast<std::size_t>(k)];
    StabilityReport r;
    r.homology_dim = k;
    r.diameter = diam_k[i];
    r.measured_bottleneck = bottleneck(d, ds);
    std::tie(r.bound_paper, r.bound_corrected) = bounds(diam_k[i]);
    r.regime_contains_one = regime;
    const double tol = bound_tolerance(diam_k[i]);
    r.holds_paper = r.measured_bottleneck <= r.bound_paper + tol;
    r.holds_corrected = r.measured_bottleneck <= r.bound_corrected + tol;
    r.points_original = d.size();
    r.points_scaled = ds.size();
    if (wasserstein_p) {
      WassersteinCheck w;
      w.p = *wasserstein_p;
      w.value = wasserstein(d, ds, w.p);
      w.chain_bound =
          std::pow(static_cast<double>(d.size() + ds.size()), 1.0 / w.p) * r.bound_corrected;
      w.holds_chain = w.value <= w.chain_bound + tol;
      r.wasserstein = w;
    }
    if (!r.holds_corrected) {
      throw InvariantViolation("H_" + std::to_string(k) + " bottleneck distance " +
                               std::to_string(r.measured_bottleneck) +
                               " exceeds the corrected bound " +
                               std::to_string(r.bound_corrected));
    }
    reports.push_back(r);
  }
  return reports;
}

}  // namespace

double bound_tolerance(double diam) { return 1e-9 * std::max(1.0, diam); }

double paper_bound(const ScalingTransform& t, double diam) {
  check_diam(diam);
  return paper_perturbation_factor(t) * diam;
}

double corrected_bound(const ScalingTransform& t, double diam) {
  check_diam(diam);
  return corrected_perturbation_factor(t) * diam;
}

double dimension_bound(const ScalingTransform& t, const DistanceMatrix& dm, int k) {
  return paper_perturbation_factor(t) * diameter_k(dm, k);
}

double corrected_dimension_bound(const ScalingTransform& t, const DistanceMatrix& dm, int k) {
  return corrected_perturbation_factor(t) * diameter_k(dm, k);
}

double cumulative_bound(std::span<const ScalingTransform> ts, double diam) {
  check_diam(diam);
  const auto e = product_extremes(ts);
  return (e.s_max - e.s_min) * diam;
}

double corrected_cumulative_bound(std::span<const ScalingTransform> ts, double diam) {
  check_diam(diam);
  const auto e = product_extremes(ts);
  return std::max({e.s_max - 1.0, 1.0 - e.s_min, 0.0}) * diam;
}

double expected_variability_uniform(double a, double b, int n) {
  if (!(a > 0.0) || !(b >= a) || !std::isfinite(b)) {
    throw ValidationError("uniform factors need 0 < a <= b");
  }
  if (n < 1) throw ValidationError("axis count must be at least 1");
  return (b - a) * (1.0 - 2.0 / (static_cast<double>(n) + 1.0));
}

void RandomScalingSpec::validate() const {
  if (axes < 1) throw ValidationError("random scaling needs at least one axis");
  if (trials < 1) throw ValidationError("random scaling needs at least one trial");
  if (const auto* u = std::get_if<UniformFactors>(&distribution)) {
    if (!(u->lo > 0.0) || !(u->hi >= u->lo) || !std::isfinite(u->hi)) {
      throw ValidationError("uniform factors need 0 < lo <= hi");
    }
  } else {
    const auto& tn = std::get<TruncatedNormalFactors>(distribution);
    if (!(tn.lo > 0.0) || !(tn.hi >= tn.lo) || !std::isfinite(tn.hi)) {
      throw ValidationError("truncated normal factors need 0 < lo <= hi");
    }
    if (!(tn.stddev >= 0.0) || !std::isfinite(tn.mean) || !std::isfinite(tn.stddev)) {
      throw ValidationError("truncated normal needs a finite mean and stddev >= 0");
    }
    if (tn.stddev == 0.0 && (tn.mean < tn.lo || tn.mean > tn.hi)) {
      throw ValidationError("degenerate truncated normal lies outside its window");
    }
  }
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ULL));
}

ScalingTransform sample_transform(const RandomScalingSpec& spec, std::size_t trial) {
  std::mt19937_64 rng(trial_seed(spec.seed, trial));
  std::vector<double> factors(spec.axes);
  for (double& f : factors) f = draw_factor(spec.distribution, rng);
  return ScalingTransform(std::move(factors));
}

MonteCarloReport monte_carlo_expected_bound(const RandomScalingSpec& spec, double diam,
                                            unsigned threads) {
  spec.validate();
  check_diam(diam);
  const std::size_t trials = spec.trials;
  std::vector<double> variability(trials);
  std::vector<char> outside(trials);
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const ScalingTransform s = sample_transform(spec, t);
      variability[t] = s.variability();
      outside[t] = s.contains_one() ? 0 : 1;
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, trials);
  if (workers == 1) {
    run(0, trials);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (trials + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(trials, begin + chunk);
      if (begin < end) pool.emplace_back(run, begin, end);
    }
  }

  double sum = 0.0;
  std::size_t violations = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    sum += variability[t];
    violations += static_cast<std::size_t>(outside[t]);
  }
  const double mean = sum / static_cast<double>(trials);
  double sq = 0.0;
  for (double v : variability) sq += (v - mean) * (v - mean);
  MonteCarloReport report;
  report.mean_variability = mean;
  report.std_error =
      trials > 1 ? std::sqrt(sq / static_cast<double>(trials - 1) / static_cast<double>(trials))
                 : 0.0;
  report.expected_bound = mean * diam;
  report.trials = trials;
  report.seed = spec.seed;
  report.regime_violation_fraction =
      static_cast<double>(violations) / static_cast<double>(trials);
  return report;
}

std::vector<StabilityReport> verify_stability(const PointCloud& cloud, const ScalingTransform& t,
                                              std::span<const int> dims,
                                              std::optional<double> wasserstein_p,
                                              const PersistenceBudget& budget) {
  const BoundFn bounds = [&](double diam_k) {
    return std::pair{paper_bound(t, diam_k), corrected_bound(t, diam_k)};
  };
  return verify_impl(cloud, t, t.contains_one(), bounds, dims, wasserstein_p, budget);
}

std::vector<StabilityReport> verify_iterative_stability(const PointCloud& cloud,
                                                        std::span<const ScalingTransform> ts,
                                                        std::span<const int> dims,
                                                        std::optional<double> wasserstein_p,
                                                        const PersistenceBudget& budget) {
  const ScalingTransform composed = compose(ts);
  const auto e = product_extremes(ts);
  const BoundFn bounds = [&](double diam_k) {
    return std::pair{cumulative_bound(ts, diam_k), corrected_cumulative_bound(ts, diam_k)};
  };
  return verify_impl(cloud, composed, e.s_min <= 1.0 && 1.0 <= e.s_max, bounds, dims,
                     wasserstein_p, budget);
}

}  // namespace topostab
