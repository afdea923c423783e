#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "topostab/rips.hpp"

namespace topostab {

/// Returned when the diagrams have different numbers of essential classes.
inline constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

/// One assignment of a matching. An empty side means the diagonal. Indices
/// refer to `pairs` of the respective diagram, or to `essential` when
/// `essential` is set (essential points are never matched to the diagonal).
struct MatchedPair {
  std::optional<std::size_t> first;
  std::optional<std::size_t> second;
  bool essential = false;
  double cost = 0.0;  // L-infinity displacement of this assignment
};

struct DiagramMatching {
  std::vector<MatchedPair> pairs;
  /// Bottleneck: max assignment cost. Wasserstein: sum of cost^p.
  double cost = 0.0;
};

/// Exact bottleneck distance. Binary search over the sorted set of candidate
/// assignment costs, testing each threshold for a perfect matching in the
/// diagonal-augmented bipartite graph.
DiagramMatching bottleneck_matching(const PersistenceDiagram& a, const PersistenceDiagram& b);
double bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b);

/// p-Wasserstein distance with L-infinity ground cost, by min-cost perfect
/// matching (Hungarian algorithm) on the diagonal-augmented problem.
DiagramMatching wasserstein_matching(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                     double p);
double wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b, double p);

/// Test oracle: bottleneck distance by enumerating every matching. Only for
/// diagrams with at most kBruteForceLimit points in total.
double brute_force_bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b);
inline constexpr std::size_t kBruteForceLimit = 8;

}  // namespace topostab
