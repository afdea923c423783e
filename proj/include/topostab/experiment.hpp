#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "topostab/generators.hpp"
#include "topostab/io.hpp"
#include "topostab/optimizer.hpp"
#include "topostab/stability.hpp"

namespace topostab {

enum class Command {
  kDiagram,
  kDistance,
  kBound,
  kOptimize,
  kVerify,
  kTrials,
  kIterate,
  kCaseStudyRgb,
  kCaseStudyMultimodal,
};

Command parse_command(const std::string& name);
std::string command_name(Command command);

enum class OutputFormat { kJson, kCsv };

/// How `trials` draws transforms: kRegime keeps s_min <= 1 <= s_max,
/// kUnrestricted also draws all-above-one and all-below-one factors.
enum class TransformMode { kRegime, kUnrestricted };

struct ExperimentConfig {
  // Point cloud source: CSV/PPM file or generator. Optional for commands
  // that can run without one.
  std::optional<std::filesystem::path> input;
  std::optional<GeneratorSpec> generator;

  std::optional<double> epsilon;
  std::vector<int> dims{0, 1};
  std::optional<double> wasserstein_p;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  int max_dim = 2;                    // largest homology dimension allowed
  std::optional<double> max_radius;   // filtration truncation for `diagram`
  PersistenceBudget budget;
  std::optional<std::filesystem::path> out;
  OutputFormat format = OutputFormat::kJson;

  // bound / verify / distance use the first transform; iterate uses all.
  std::vector<ScalingTransform> transforms;
  std::optional<std::filesystem::path> diagram_a;
  std::optional<std::filesystem::path> diagram_b;
  std::optional<double> diameter;
  std::optional<std::size_t> axes;
  ScalingStrategy strategy = UniformPreferred{};
  double s_min = 1.0;
  std::optional<FactorDistribution> random_factors;  // `bound` Monte Carlo

  // case-study-multimodal
  std::vector<std::size_t> groups{300, 512};
  std::vector<double> ranges{1.0, 100.0};

  // trials
  TransformMode transform_mode = TransformMode::kRegime;
  std::size_t max_points = 30;
  std::size_t max_axes = 5;

  /// Throws ValidationError for bad values, BudgetError when dims exceed
  /// max_dim.
  void validate(Command command) const;
};

struct Report {
  Json document;
  /// Row-per-record form used for CSV output, when the command has one.
  std::optional<std::vector<Json>> table;
};

/// Runs one command. Deterministic for a given config, independent of
/// `threads`.
Report run_experiment(const ExperimentConfig& config, Command command);

/// JSON or CSV text for a report.
std::string render(const Report& report, OutputFormat format);

/// Loads the configured point cloud, or nullopt if none was given.
std::optional<PointCloud> load_point_cloud(const ExperimentConfig& config);

}  // namespace topostab
