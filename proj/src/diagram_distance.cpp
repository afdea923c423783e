#include "topostab/diagram_distance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "topostab/errors.hpp"

namespace topostab {

namespace {

void check_same_dim(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  if (a.dim != b.dim) {
    throw ValidationError("cannot compare diagrams of dimensions " + std::to_string(a.dim) +
                          " and " + std::to_string(b.dim));
  }
}

double linf(const PersistencePair& x, const PersistencePair& y) {
  return std::max(std::abs(x.birth - y.birth), std::abs(x.death - y.death));
}

double to_diagonal(const PersistencePair& x) { return (x.death - x.birth) / 2.0; }

// Essential classes match in sorted birth order, which is optimal for every
// cost that is a nondecreasing convex function of |birth difference|.
std::vector<MatchedPair> match_essential(const PersistenceDiagram& a,
                                         const PersistenceDiagram& b) {
  std::vector<std::size_t> ia(a.essential.size()), ib(b.essential.size());
  for (std::size_t i = 0; i < ia.size(); ++i) ia[i] = i;
  for (std::size_t i = 0; i < ib.size(); ++i) ib[i] = i;
  std::stable_sort(ia.begin(), ia.end(),
                   [&](std::size_t x, std::size_t y) { return a.essential[x] < a.essential[y]; });
  std::stable_sort(ib.begin(), ib.end(),
                   [&](std::size_t x, std::size_t y) { return b.essential[x] < b.essential[y]; });
  std::vector<MatchedPair> out;
  for (std::size_t i = 0; i < ia.size(); ++i) {
    out.push_back({ia[i], ib[i], true, std::abs(a.essential[ia[i]] - b.essential[ib[i]])});
  }
  return out;
}

// Diagonal-augmented bipartite graph. Left: the n points of `a`, then one
// diagonal copy per point of `b`. Right: the m points of `b`, then one
// diagonal copy per point of `a`.
class AugmentedGraph {
 public:
  AugmentedGraph(const std::vector<PersistencePair>& a, const std::vector<PersistencePair>& b)
      : a_(a), b_(b), n_(a.size()), m_(b.size()) {}

  std::size_t size() const { return n_ + m_; }

  // Cost of edge (l, r), or nullopt if the edge does not exist.
  std::optional<double> cost(std::size_t l, std::size_t r) const {
    const bool l_point = l < n_;
    const bool r_point = r < m_;
    if (l_point && r_point) return linf(a_[l], b_[r]);
    if (l_point) return r - m_ == l ? std::optional(to_diagonal(a_[l])) : std::nullopt;
    if (r_point) return l - n_ == r ? std::optional(to_diagonal(b_[r])) : std::nullopt;
    return 0.0;
  }

  std::vector<MatchedPair> assignments(const std::vector<std::size_t>& right_of_left) const {
    std::vector<MatchedPair> out;
    for (std::size_t l = 0; l < size(); ++l) {
      const std::size_t r = right_of_left[l];
      const bool l_point = l < n_;
      const bool r_point = r < m_;
      if (!l_point && !r_point) continue;
      MatchedPair mp;
      if (l_point) mp.first = l;
      if (r_point) mp.second = r;
      mp.cost = *cost(l, r);
      out.push_back(mp);
    }
    return out;
  }

 private:
  const std::vector<PersistencePair>& a_;
  const std::vector<PersistencePair>& b_;
  std::size_t n_;
  std::size_t m_;
};

// Kuhn's augmenting-path matching restricted to edges of cost <= threshold.
class ThresholdMatcher {
 public:
  explicit ThresholdMatcher(const AugmentedGraph& g) : g_(g), k_(g.size()) {
    adjacency_.resize(k_);
    for (std::size_t l = 0; l < k_; ++l) {
      for (std::size_t r = 0; r < k_; ++r) {
        if (auto c = g_.cost(l, r)) adjacency_[l].push_back({r, *c});
      }
    }
  }

  // On success, fills right_of_left with a perfect matching.
  bool perfect(double threshold, std::vector<std::size_t>& right_of_left) {
    threshold_ = threshold;
    left_of_right_.assign(k_, kFree);
    for (std::size_t l = 0; l < k_; ++l) {
      visited_.assign(k_, false);
      if (!augment(l)) return false;
    }
    right_of_left.assign(k_, kFree);
    for (std::size_t r = 0; r < k_; ++r) right_of_left[left_of_right_[r]] = r;
    return true;
  }

 private:
  static constexpr std::size_t kFree = static_cast<std::size_t>(-1);

  bool augment(std::size_t l) {
    for (const auto& [r, c] : adjacency_[l]) {
      if (c > threshold_ || visited_[r]) continue;
      visited_[r] = true;
      if (left_of_right_[r] == kFree || augment(left_of_right_[r])) {
        left_of_right_[r] = l;
        return true;
      }
    }
    return false;
  }

  const AugmentedGraph& g_;
  std::size_t k_;
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency_;
  std::vector<std::size_t> left_of_right_;
  std::vector<bool> visited_;
  double threshold_ = 0.0;
};

// Min-cost perfect assignment on a square matrix (shortest augmenting paths
// with potentials). Returns column assigned to each row.
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> row_of_col(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = row_of_col[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of_col[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      row_of_col[j0] = row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> col_of_row(n, 0);
  for (std::size_t j = 1; j <= n; ++j) col_of_row[row_of_col[j] - 1] = j - 1;
  return col_of_row;
}

DiagramMatching infinite_matching() { return {{}, kInfiniteDistance}; }

}  // namespace

DiagramMatching bottleneck_matching(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  check_same_dim(a, b);
  if (a.essential.size() != b.essential.size()) return infinite_matching();

  DiagramMatching result;
  result.pairs = match_essential(a, b);
  for (const auto& mp : result.pairs) result.cost = std::max(result.cost, mp.cost);

  const AugmentedGraph graph(a.pairs, b.pairs);
  if (graph.size() == 0) return result;

  std::vector<double> candidates;
  for (std::size_t l = 0; l < graph.size(); ++l) {
    for (std::size_t r = 0; r < graph.size(); ++r) {
      if (auto c = graph.cost(l, r)) candidates.push_back(*c);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  ThresholdMatcher matcher(graph);
  std::vector<std::size_t> matching;
  // Every point matched to the diagonal is always feasible, so the largest
  // candidate succeeds.
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (matcher.perfect(candidates[mid], matching)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (!matcher.perfect(candidates[lo], matching)) {
    throw InvariantViolation("bottleneck search ended on an infeasible threshold");
  }
  const auto finite = graph.assignments(matching);
  result.pairs.insert(result.pairs.end(), finite.begin(), finite.end());
  result.cost = std::max(result.cost, candidates[lo]);
  return result;
}

double bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  return bottleneck_matching(a, b).cost;
}

DiagramMatching wasserstein_matching(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                     double p) {
  check_same_dim(a, b);
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw ValidationError("Wasserstein order p must be finite and at least 1");
  }
  if (a.essential.size() != b.essential.size()) return infinite_matching();

  DiagramMatching result;
  result.pairs = match_essential(a, b);
  for (const auto& mp : result.pairs) result.cost += std::pow(mp.cost, p);

  const AugmentedGraph graph(a.pairs, b.pairs);
  const std::size_t k = graph.size();
  if (k == 0) return result;

  // Missing edges get a cost above any perfect matching built from real
  // edges; the all-diagonal matching always exists.
  std::vector<std::vector<double>> cost(k, std::vector<double>(k, 0.0));
  double total = 0.0;
  std::vector<std::vector<bool>> present(k, std::vector<bool>(k, false));
  for (std::size_t l = 0; l < k; ++l) {
    for (std::size_t r = 0; r < k; ++r) {
      if (auto c = graph.cost(l, r)) {
        cost[l][r] = std::pow(*c, p);
        present[l][r] = true;
        total += cost[l][r];
      }
    }
  }
  const double forbidden = 2.0 * total + 1.0;
  for (std::size_t l = 0; l < k; ++l) {
    for (std::size_t r = 0; r < k; ++r) {
      if (!present[l][r]) cost[l][r] = forbidden;
    }
  }
  const auto assignment = hungarian(cost);
  for (std::size_t l = 0; l < k; ++l) {
    if (!present[l][assignment[l]]) {
      throw InvariantViolation("Wasserstein assignment used a missing edge");
    }
  }
  for (const auto& mp : graph.assignments(assignment)) {
    result.cost += std::pow(mp.cost, p);
    result.pairs.push_back(mp);
  }
  return result;
}

double wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b, double p) {
  const DiagramMatching m = wasserstein_matching(a, b, p);
  if (m.cost == kInfiniteDistance) return kInfiniteDistance;
  return std::pow(m.cost, 1.0 / p);
}

double brute_force_bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  check_same_dim(a, b);
  if (a.size() + b.size() > kBruteForceLimit) {
    throw ValidationError("brute-force bottleneck is limited to " +
                          std::to_string(kBruteForceLimit) + " points in total");
  }
  if (a.essential.size() != b.essential.size()) return kInfiniteDistance;

  double essential_best = 0.0;
  if (!a.essential.empty()) {
    std::vector<std::size_t> perm(b.essential.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    essential_best = kInfiniteDistance;
    do {
      double worst = 0.0;
      for (std::size_t i = 0; i < perm.size(); ++i) {
        worst = std::max(worst, std::abs(a.essential[i] - b.essential[perm[i]]));
      }
      essential_best = std::min(essential_best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  // Each point of `a` goes to an unused point of `b` or to the diagonal;
  // whatever is left of `b` goes to the diagonal.
  std::vector<bool> used(b.pairs.size(), false);
  double finite_best = kInfiniteDistance;
  std::function<void(std::size_t, double)> recurse = [&](std::size_t i, double worst) {
    if (worst >= finite_best) return;
    if (i == a.pairs.size()) {
      for (std::size_t j = 0; j < b.pairs.size(); ++j) {
        if (!used[j]) worst = std::max(worst, (b.pairs[j].death - b.pairs[j].birth) / 2.0);
      }
      finite_best = std::min(finite_best, worst);
      return;
    }
    const PersistencePair& x = a.pairs[i];
    recurse(i + 1, std::max(worst, (x.death - x.birth) / 2.0));
    for (std::size_t j = 0; j < b.pairs.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      const double c = std::max(std::abs(x.birth - b.pairs[j].birth),
                                std::abs(x.death - b.pairs[j].death));
      recurse(i + 1, std::max(worst, c));
      used[j] = false;
    }
  };
  recurse(0, 0.0);
  return std::max(essential_best, finite_best);
}

}  // namespace topostab
