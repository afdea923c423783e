// topostab: persistent homology under per-axis scaling.
//
//   topostab <command> [options]
//
// Exit status: 0 success, 1 validation error, 2 budget or invariant failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "topostab/errors.hpp"
#include "topostab/experiment.hpp"
#include "topostab/io.hpp"

namespace {

using namespace topostab;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError(what + ": '" + s + "' is not a number");
}

std::size_t to_size(const std::string& s, const std::string& what) {
  const double v = to_double(s, what);
  if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
    throw ValidationError(what + ": '" + s + "' is not a nonnegative integer");
  }
  return static_cast<std::size_t>(v);
}

FactorDistribution parse_random(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) {
    for (const auto& a : split(text.substr(colon + 1), ',')) args.push_back(to_double(a, "--random"));
  }
  if (kind == "uniform" && args.size() == 2) return UniformFactors{args[0], args[1]};
  if (kind == "tnormal" && args.size() == 4) {
    return TruncatedNormalFactors{args[0], args[1], args[2], args[3]};
  }
  throw ValidationError("--random expects uniform:a,b or tnormal:mean,sd,lo,hi");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persistent homology and stability bounds under per-axis scaling"};
  app.set_help_all_flag("--help-all");

  std::string command;
  std::string input, generate, transform, dims = "0,1", random, groups, ranges, strategy = "uniform";
  std::string diagram_a, diagram_b, out, format = "json", emit_cloud, mode = "regime";
  std::optional<double> epsilon, wasserstein_p, max_radius, diam;
  std::optional<std::size_t> axes;
  std::size_t trials = 100, spread_k = 1, max_points = 30, max_axes = 5;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  int max_dim = 2;
  double s_min = 1.0;

  app.add_option("command", command, "diagram | distance | bound | optimize | verify | trials | "
                                     "iterate | case-study-rgb | case-study-multimodal")
      ->required();
  app.add_option("--input", input, "Point cloud CSV (or .ppm P3 image)");
  app.add_option("--generate", generate, "Generator spec, e.g. circle:n=12,radius=1,seed=7");
  app.add_option("--epsilon", epsilon, "Topological tolerance");
  app.add_option("--dims", dims, "Homology dimensions, comma-separated (subset of 0,1,2)");
  app.add_option("--wasserstein-p", wasserstein_p, "Also measure p-Wasserstein distance");
  app.add_option("--trials", trials, "Trial count for trials / Monte Carlo");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--threads", threads, "Worker threads (results do not depend on it)");
  app.add_option("--max-dim", max_dim, "Largest homology dimension allowed");
  app.add_option("--max-radius", max_radius, "Truncate the Rips filtration (diagram only)");
  app.add_option("--out", out, "Write the report here instead of stdout");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--transform", transform,
                 "Scaling factors '1,1.1', a sequence '1,1.1;1,1.2', or a JSON file");
  app.add_option("--diagram-a", diagram_a, "Diagram JSON (distance)");
  app.add_option("--diagram-b", diagram_b, "Diagram JSON (distance)");
  app.add_option("--diameter", diam, "Dataset diameter when no cloud is given");
  app.add_option("--axes", axes, "Axis count when no cloud is given");
  app.add_option("--strategy", strategy, "uniform or spread (optimize)")
      ->check(CLI::IsMember({"uniform", "spread"}));
  app.add_option("--spread-k", spread_k, "Factors placed at s_max by the spread strategy");
  app.add_option("--s-min", s_min, "Smallest factor chosen by the optimizer");
  app.add_option("--random", random, "Monte Carlo factors: uniform:a,b or tnormal:mean,sd,lo,hi");
  app.add_option("--groups", groups, "Feature group sizes (case-study-multimodal)");
  app.add_option("--ranges", ranges, "Feature group value ranges (case-study-multimodal)");
  app.add_option("--transform-mode", mode, "regime or unrestricted (trials)")
      ->check(CLI::IsMember({"regime", "unrestricted"}));
  app.add_option("--max-points", max_points, "Largest random cloud in trials");
  app.add_option("--max-axes", max_axes, "Largest random dimension in trials");
  app.add_option("--emit-cloud", emit_cloud, "Also write the loaded point cloud as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    const Command cmd = parse_command(command);
    ExperimentConfig cfg;
    if (!input.empty()) cfg.input = input;
    if (!generate.empty()) cfg.generator = parse_generator_spec(generate);
    cfg.epsilon = epsilon;
    cfg.dims.clear();
    for (const auto& d : split(dims, ',')) cfg.dims.push_back(static_cast<int>(to_size(d, "--dims")));
    cfg.wasserstein_p = wasserstein_p;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.max_dim = max_dim;
    cfg.max_radius = max_radius;
    cfg.format = format == "csv" ? OutputFormat::kCsv : OutputFormat::kJson;
    if (!transform.empty()) {
      cfg.transforms = std::filesystem::is_regular_file(transform)
                           ? transforms_from_json(read_json_file(transform))
                           : parse_transform_list(transform);
    }
    if (!diagram_a.empty()) cfg.diagram_a = diagram_a;
    if (!diagram_b.empty()) cfg.diagram_b = diagram_b;
    cfg.diameter = diam;
    cfg.axes = axes;
    if (strategy == "spread") {
      cfg.strategy = BoundarySpread{spread_k};
    } else {
      cfg.strategy = UniformPreferred{};
    }
    cfg.s_min = s_min;
    if (!random.empty()) cfg.random_factors = parse_random(random);
    if (!groups.empty()) {
      cfg.groups.clear();
      for (const auto& g : split(groups, ',')) cfg.groups.push_back(to_size(g, "--groups"));
      if (ranges.empty()) cfg.ranges.clear();
    }
    if (!ranges.empty()) {
      cfg.ranges.clear();
      for (const auto& r : split(ranges, ',')) cfg.ranges.push_back(to_double(r, "--ranges"));
    }
    cfg.transform_mode = mode == "unrestricted" ? TransformMode::kUnrestricted : TransformMode::kRegime;
    cfg.max_points = max_points;
    cfg.max_axes = max_axes;

    if (!emit_cloud.empty()) {
      const auto cloud = load_point_cloud(cfg);
      if (!cloud) throw ValidationError("--emit-cloud needs --input or --generate");
      std::ostringstream csv;
      write_point_cloud_csv(csv, *cloud);
      write_text_file(emit_cloud, csv.str());
    }

    const Report report = run_experiment(cfg, cmd);
    const std::string text = render(report, cfg.format);
    if (out.empty()) {
      std::cout << text;
    } else {
      write_text_file(out, text);
    }
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const InvariantViolation& e) {
    std::cerr << "assertion failed: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
