#include "topostab/rips.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <string>

#include "topostab/errors.hpp"

namespace topostab {

namespace {

using Column = std::vector<std::size_t>;

// Z/2 column addition: symmetric difference of two sorted index lists.
void add_column(Column& target, const Column& source) {
  Column merged;
  merged.reserve(target.size() + source.size());
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                std::back_inserter(merged));
  target.swap(merged);
}

bool filtration_less(const Simplex& a, const Simplex& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
  return a.vertices < b.vertices;
}

struct CliqueEnumerator {
  const DistanceMatrix& dm;
  std::size_t max_vertices;
  double max_radius;
  std::size_t budget;
  std::vector<Simplex>& out;

  void extend(std::vector<std::uint32_t>& clique, double value) {
    if (out.size() >= budget) {
      throw BudgetError("Rips filtration exceeds the simplex budget of " +
                        std::to_string(budget));
    }
    out.push_back({clique, value});
    if (clique.size() == max_vertices) return;
    for (std::uint32_t w = clique.back() + 1; w < dm.size(); ++w) {
      double with_w = value;
      bool admissible = true;
      for (std::uint32_t u : clique) {
        const double d = dm(u, w);
        if (d > max_radius) {
          admissible = false;
          break;
        }
        with_w = std::max(with_w, d);
      }
      if (!admissible) continue;
      clique.push_back(w);
      extend(clique, with_w);
      clique.pop_back();
    }
  }
};

}  // namespace

std::size_t Filtration::VertexHash::operator()(const std::vector<std::uint32_t>& v) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::uint32_t x : v) {
    h ^= x;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

Filtration::Filtration(std::size_t num_points, int skeleton_dim, std::vector<Simplex> simplices)
    : num_points_(num_points), skeleton_dim_(skeleton_dim), simplices_(std::move(simplices)) {
  if (skeleton_dim_ < 0) throw ValidationError("skeleton dimension must be nonnegative");
  index_.reserve(simplices_.size());
  std::vector<std::uint32_t> face;
  for (std::size_t i = 0; i < simplices_.size(); ++i) {
    const Simplex& s = simplices_[i];
    const std::string where = "filtration entry " + std::to_string(i);
    if (s.vertices.empty()) throw ValidationError(where + " has no vertices");
    if (s.dim() > skeleton_dim_) throw ValidationError(where + " exceeds the skeleton dimension");
    for (std::size_t v = 0; v < s.vertices.size(); ++v) {
      if (s.vertices[v] >= num_points_) throw ValidationError(where + " has an out-of-range vertex");
      if (v > 0 && s.vertices[v] <= s.vertices[v - 1]) {
        throw ValidationError(where + " vertices are not strictly increasing");
      }
    }
    if (!(s.value >= 0.0) || s.value == std::numeric_limits<double>::infinity()) {
      throw ValidationError(where + " has an invalid filtration value");
    }
    if (i > 0 && s.value < simplices_[i - 1].value) {
      throw ValidationError(where + " breaks the nondecreasing value order");
    }
    if (s.vertices.size() > 1) {
      for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
        face.clear();
        for (std::size_t v = 0; v < s.vertices.size(); ++v) {
          if (v != drop) face.push_back(s.vertices[v]);
        }
        const auto it = index_.find(face);
        if (it == index_.end()) {
          throw ValidationError(where + " appears before one of its faces");
        }
      }
    }
    if (!index_.emplace(s.vertices, i).second) throw ValidationError(where + " is a duplicate");
  }
}

std::optional<std::size_t> Filtration::index_of(const std::vector<std::uint32_t>& vertices) const {
  const auto it = index_.find(vertices);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Filtration build_filtration(const DistanceMatrix& dm, int max_dim, double max_radius,
                            std::size_t simplex_budget) {
  if (max_dim < 0) throw ValidationError("max_dim must be nonnegative");
  if (!(max_radius > 0.0)) throw ValidationError("max_radius must be positive");
  std::vector<Simplex> simplices;
  CliqueEnumerator enumerator{dm, static_cast<std::size_t>(max_dim) + 2, max_radius,
                              simplex_budget, simplices};
  std::vector<std::uint32_t> clique;
  for (std::uint32_t v = 0; v < dm.size(); ++v) {
    clique.assign(1, v);
    enumerator.extend(clique, 0.0);
  }
  std::sort(simplices.begin(), simplices.end(), filtration_less);
  return Filtration(dm.size(), max_dim + 1, std::move(simplices));
}

std::vector<PersistenceDiagram> compute_persistence(const Filtration& filtration,
                                                    int max_homology_dim,
                                                    PersistenceOptions options) {
  if (max_homology_dim < 0) throw ValidationError("homology dimension must be nonnegative");
  if (max_homology_dim + 1 > filtration.skeleton_dim()) {
    throw ValidationError("filtration skeleton of dimension " +
                          std::to_string(filtration.skeleton_dim()) +
                          " cannot resolve H_" + std::to_string(max_homology_dim));
  }
  const std::size_t n = filtration.size();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  // partner[i]: the simplex paired with i, in either direction.
  std::vector<std::size_t> partner(n, kNone);
  std::vector<std::size_t> column_with_low(n, kNone);
  std::vector<Column> reduced(n);

  std::vector<std::vector<std::size_t>> by_dim(static_cast<std::size_t>(max_homology_dim) + 2);
  for (std::size_t i = 0; i < n; ++i) {
    const int d = filtration[i].dim();
    if (d <= max_homology_dim + 1) by_dim[static_cast<std::size_t>(d)].push_back(i);
  }

  std::vector<std::uint32_t> face;
  for (int d = max_homology_dim + 1; d >= 1; --d) {
    for (std::size_t j : by_dim[static_cast<std::size_t>(d)]) {
      // Cleared: j already creates a class killed by a higher simplex.
      if (partner[j] != kNone) continue;
      const Simplex& s = filtration[j];
      Column col;
      col.reserve(s.vertices.size());
      for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
        face.clear();
        for (std::size_t v = 0; v < s.vertices.size(); ++v) {
          if (v != drop) face.push_back(s.vertices[v]);
        }
        col.push_back(*filtration.index_of(face));
      }
      std::sort(col.begin(), col.end());
      while (!col.empty() && column_with_low[col.back()] != kNone) {
        add_column(col, reduced[column_with_low[col.back()]]);
      }
      if (!col.empty()) {
        const std::size_t low = col.back();
        column_with_low[low] = j;
        partner[low] = j;
        partner[j] = low;
        reduced[j] = std::move(col);
      }
    }
  }

  std::vector<PersistenceDiagram> diagrams(static_cast<std::size_t>(max_homology_dim) + 1);
  for (int k = 0; k <= max_homology_dim; ++k) diagrams[static_cast<std::size_t>(k)].dim = k;
  for (int k = 0; k <= max_homology_dim; ++k) {
    auto& diagram = diagrams[static_cast<std::size_t>(k)];
    for (std::size_t i : by_dim[static_cast<std::size_t>(k)]) {
      const double birth = filtration[i].value;
      if (partner[i] == kNone) {
        diagram.essential.push_back(birth);
      } else if (partner[i] > i) {
        // i is the creator; a partner earlier in the order means i destroys.
        const double death = filtration[partner[i]].value;
        if (death > birth || options.keep_zero_persistence) {
          diagram.pairs.push_back({birth, death});
        }
      }
    }
    std::sort(diagram.pairs.begin(), diagram.pairs.end());
    std::sort(diagram.essential.begin(), diagram.essential.end());
  }
  return diagrams;
}

void PersistenceBudget::check(std::size_t num_points, int max_homology_dim) const {
  const std::size_t limit = max_homology_dim <= 0   ? max_points_h0
                            : max_homology_dim == 1 ? max_points_h1
                                                    : max_points_h2;
  if (num_points > limit) {
    throw BudgetError("H_" + std::to_string(max_homology_dim) + " persistence is limited to " +
                      std::to_string(limit) + " points, got " + std::to_string(num_points));
  }
}

std::vector<PersistenceDiagram> rips_persistence(const DistanceMatrix& dm, int max_homology_dim,
                                                 const PersistenceBudget& budget,
                                                 PersistenceOptions options) {
  budget.check(dm.size(), max_homology_dim);
  // A cloud of coincident points has diameter 0; any positive radius
  // admits exactly the same simplices.
  const double radius = std::max(diameter(dm), std::numeric_limits<double>::min());
  const Filtration filtration =
      build_filtration(dm, max_homology_dim, radius, budget.max_simplices);
  return compute_persistence(filtration, max_homology_dim, options);
}

}  // namespace topostab
