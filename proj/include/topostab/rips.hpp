#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "topostab/metric.hpp"

namespace topostab {

struct Simplex {
  std::vector<std::uint32_t> vertices;  // strictly increasing
  double value = 0.0;                   // diameter of the vertex set

  int dim() const { return static_cast<int>(vertices.size()) - 1; }
};

/// Ordered list of simplices in which every face precedes its cofaces and
/// values never decrease. The constructor rejects any list violating that.
class Filtration {
 public:
  /// `skeleton_dim` is the largest simplex dimension the filtration was
  /// built to contain; homology is available up to skeleton_dim - 1.
  Filtration(std::size_t num_points, int skeleton_dim, std::vector<Simplex> simplices);

  std::size_t num_points() const { return num_points_; }
  int skeleton_dim() const { return skeleton_dim_; }
  std::size_t size() const { return simplices_.size(); }
  const Simplex& operator[](std::size_t i) const { return simplices_[i]; }
  std::span<const Simplex> simplices() const { return simplices_; }

  std::optional<std::size_t> index_of(const std::vector<std::uint32_t>& vertices) const;

 private:
  struct VertexHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept;
  };

  std::size_t num_points_ = 0;
  int skeleton_dim_ = 0;
  std::vector<Simplex> simplices_;
  std::unordered_map<std::vector<std::uint32_t>, std::size_t, VertexHash> index_;
};

inline constexpr std::size_t kDefaultSimplexBudget = 5'000'000;

/// Rips filtration: every simplex of dimension <= max_dim + 1 whose diameter
/// is at most max_radius, valued at its diameter and ordered by
/// (value, dimension, lexicographic vertices). Throws BudgetError when more
/// than `simplex_budget` simplices would be produced.
Filtration build_filtration(const DistanceMatrix& dm, int max_dim, double max_radius,
                            std::size_t simplex_budget = kDefaultSimplexBudget);

struct PersistencePair {
  double birth = 0.0;
  double death = 0.0;

  double persistence() const { return death - birth; }
  friend auto operator<=>(const PersistencePair&, const PersistencePair&) = default;
};

struct PersistenceDiagram {
  int dim = 0;
  std::vector<PersistencePair> pairs;  // sorted
  std::vector<double> essential;       // births of classes that never die, sorted

  std::size_t size() const { return pairs.size() + essential.size(); }
  bool operator==(const PersistenceDiagram&) const = default;
};

struct PersistenceOptions {
  bool keep_zero_persistence = false;
};

/// Diagrams for dimensions 0..max_homology_dim by column reduction of the
/// Z/2 boundary matrix in filtration order, with clearing.
std::vector<PersistenceDiagram> compute_persistence(const Filtration& filtration,
                                                    int max_homology_dim,
                                                    PersistenceOptions options = {});

/// Point-count limits per homology dimension, on top of the simplex budget.
struct PersistenceBudget {
  std::size_t max_points_h0 = 2048;
  std::size_t max_points_h1 = 64;
  std::size_t max_points_h2 = 25;
  std::size_t max_simplices = kDefaultSimplexBudget;

  /// Throws BudgetError if `num_points` is too many for `max_homology_dim`.
  void check(std::size_t num_points, int max_homology_dim) const;
};

/// Complete Rips persistence of a distance matrix (max_radius = diameter).
std::vector<PersistenceDiagram> rips_persistence(const DistanceMatrix& dm, int max_homology_dim,
                                                 const PersistenceBudget& budget = {},
                                                 PersistenceOptions options = {});

}  // namespace topostab
