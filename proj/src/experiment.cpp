#include "topostab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include "topostab/diagram_distance.hpp"
#include "topostab/errors.hpp"

namespace topostab {

namespace {

constexpr int kSchemaVersion = 1;

// Reference RGB extremes: the per-channel minima and maxima of an example
// image, giving channel ranges (150, 120, 180).
const std::vector<std::vector<double>> kRgbExtremes = {{50.0, 60.0, 40.0}, {200.0, 180.0, 220.0}};
constexpr double kQuotedRgbDiameter = 263.02;

Json header(Command command) {
  return Json{{"schema", kSchemaVersion}, {"command", command_name(command)}};
}

PointCloud require_cloud(const ExperimentConfig& cfg, const char* command) {
  auto cloud = load_point_cloud(cfg);
  if (!cloud) throw ValidationError(std::string(command) + " needs --input or --generate");
  return *std::move(cloud);
}

const ScalingTransform& require_transform(const ExperimentConfig& cfg, const char* command) {
  if (cfg.transforms.empty()) throw ValidationError(std::string(command) + " needs --transform");
  return cfg.transforms.front();
}

double require_epsilon(const ExperimentConfig& cfg, const char* command) {
  if (!cfg.epsilon) throw ValidationError(std::string(command) + " needs --epsilon");
  return *cfg.epsilon;
}

double resolve_diameter(const ExperimentConfig& cfg, const std::optional<PointCloud>& cloud,
                        const char* command) {
  if (cfg.diameter) return *cfg.diameter;
  if (cloud) return diameter(distance_matrix(*cloud));
  throw ValidationError(std::string(command) + " needs --diameter or a point cloud");
}

int max_requested_dim(const ExperimentConfig& cfg) {
  return *std::max_element(cfg.dims.begin(), cfg.dims.end());
}

Json cloud_summary(const PointCloud& cloud) {
  return Json{{"points", cloud.size()},
              {"dimension", cloud.dimension()},
              {"diameter", diameter(distance_matrix(cloud))}};
}

Json distance_entry(int dim, const char* metric, std::optional<double> p, double value) {
  Json j{{"dim", dim}, {"metric", metric}};
  if (p) j["p"] = *p;
  j["value"] = number_or_inf(value);
  return j;
}

Json report_row(const StabilityReport& r) {
  Json j = to_json(r);
  // Flatten the Wasserstein block so the row is CSV-friendly.
  const Json w = j["measured_wasserstein"];
  j.erase("measured_wasserstein");
  j["wasserstein_p"] = w.is_null() ? Json() : w["p"];
  j["measured_wasserstein"] = w.is_null() ? Json() : w["value"];
  j["wasserstein_chain_bound"] = w.is_null() ? Json() : w["chain_bound"];
  j["holds_wasserstein_chain"] = w.is_null() ? Json() : w["holds_chain"];
  return j;
}

// ---------------------------------------------------------------- commands

Report run_diagram(const ExperimentConfig& cfg) {
  const PointCloud cloud = require_cloud(cfg, "diagram");
  const DistanceMatrix dm = distance_matrix(cloud);
  const int max_k = max_requested_dim(cfg);
  cfg.budget.check(cloud.size(), max_k);
  std::vector<PersistenceDiagram> diagrams;
  if (cfg.max_radius) {
    diagrams = compute_persistence(
        build_filtration(dm, max_k, *cfg.max_radius, cfg.budget.max_simplices), max_k);
  } else {
    diagrams = rips_persistence(dm, max_k, cfg.budget);
  }
  Report report{header(Command::kDiagram), std::vector<Json>{}};
  report.document["cloud"] = cloud_summary(cloud);
  report.document["max_radius"] = cfg.max_radius ? Json(*cfg.max_radius) : Json(nullptr);
  Json list = Json::array();
  for (int k : cfg.dims) {
    const auto& d = diagrams[static_cast<std::size_t>(k)];
    list.push_back(to_json(d));
    for (const auto& p : d.pairs) {
      report.table->push_back(Json{{"dim", k}, {"birth", p.birth}, {"death", p.death}});
    }
    for (double b : d.essential) {
      report.table->push_back(Json{{"dim", k}, {"birth", b}, {"death", "inf"}});
    }
  }
  report.document["diagrams"] = list;
  return report;
}

Report run_distance(const ExperimentConfig& cfg) {
  std::vector<PersistenceDiagram> first, second;
  if (cfg.diagram_a || cfg.diagram_b) {
    if (!cfg.diagram_a || !cfg.diagram_b) {
      throw ValidationError("distance needs both --diagram-a and --diagram-b");
    }
    first = diagrams_from_json(read_json_file(*cfg.diagram_a));
    second = diagrams_from_json(read_json_file(*cfg.diagram_b));
  } else {
    const PointCloud cloud = require_cloud(cfg, "distance");
    const ScalingTransform& t = require_transform(cfg, "distance");
    const int max_k = max_requested_dim(cfg);
    first = rips_persistence(distance_matrix(cloud), max_k, cfg.budget);
    second = rips_persistence(distance_matrix(apply_scaling(cloud, t)), max_k, cfg.budget);
  }
  auto find = [](const std::vector<PersistenceDiagram>& ds, int k) -> const PersistenceDiagram* {
    for (const auto& d : ds) {
      if (d.dim == k) return &d;
    }
    return nullptr;
  };
  Report report{header(Command::kDistance), std::vector<Json>{}};
  Json results = Json::array();
  for (int k : cfg.dims) {
    const PersistenceDiagram* a = find(first, k);
    const PersistenceDiagram* b = find(second, k);
    if (!a && !b) continue;
    const PersistenceDiagram empty{k, {}, {}};
    if (!a) a = &empty;
    if (!b) b = &empty;
    results.push_back(distance_entry(k, "bottleneck", std::nullopt, bottleneck(*a, *b)));
    if (cfg.wasserstein_p) {
      results.push_back(
          distance_entry(k, "wasserstein", cfg.wasserstein_p, wasserstein(*a, *b, *cfg.wasserstein_p)));
    }
  }
  for (const auto& r : results) {
    report.table->push_back(Json{{"dim", r["dim"]},
                                 {"metric", r["metric"]},
                                 {"p", r.contains("p") ? r["p"] : Json()},
                                 {"value", r["value"]}});
  }
  report.document["results"] = results;
  return report;
}

Report run_bound(const ExperimentConfig& cfg) {
  const auto cloud = load_point_cloud(cfg);
  Report report{header(Command::kBound), std::nullopt};
  Json& doc = report.document;
  if (!cfg.transforms.empty() || !cfg.random_factors) {
    const ScalingTransform& t = require_transform(cfg, "bound");
    const double diam = resolve_diameter(cfg, cloud, "bound");
    doc["diameter"] = diam;
    doc["transform"] = to_json(t);
    doc["variability"] = t.variability();
    doc["regime_contains_one"] = t.contains_one();
    doc["paper_bound"] = paper_bound(t, diam);
    doc["corrected_bound"] = corrected_bound(t, diam);
    if (cloud) {
      const DistanceMatrix dm = distance_matrix(*cloud);
      Json per_dim = Json::array();
      for (int k : cfg.dims) {
        per_dim.push_back(Json{{"dim", k},
                               {"diameter_k", diameter_k(dm, k)},
                               {"paper", dimension_bound(t, dm, k)},
                               {"corrected", corrected_dimension_bound(t, dm, k)}});
      }
      doc["dimension_bounds"] = per_dim;
    }
  }
  if (cfg.random_factors) {
    RandomScalingSpec spec;
    spec.distribution = *cfg.random_factors;
    spec.axes = cfg.axes ? *cfg.axes : cloud ? cloud->dimension() : 0;
    if (spec.axes == 0) throw ValidationError("Monte Carlo bound needs --axes or a point cloud");
    spec.trials = cfg.trials;
    spec.seed = cfg.seed;
    const double diam = resolve_diameter(cfg, cloud, "bound");
    Json mc = to_json(monte_carlo_expected_bound(spec, diam, cfg.threads));
    if (const auto* u = std::get_if<UniformFactors>(&*cfg.random_factors)) {
      const double closed = expected_variability_uniform(u->lo, u->hi, static_cast<int>(spec.axes));
      mc["closed_form_mean_variability"] = closed;
      mc["closed_form_expected_bound"] = closed * diam;
    }
    doc["monte_carlo"] = mc;
  }
  return report;
}

Report run_optimize(const ExperimentConfig& cfg) {
  const auto cloud = load_point_cloud(cfg);
  OptimizationRequest req;
  req.epsilon = require_epsilon(cfg, "optimize");
  req.diam = resolve_diameter(cfg, cloud, "optimize");
  req.n = cfg.axes ? *cfg.axes : cloud ? cloud->dimension() : 0;
  if (req.n == 0) throw ValidationError("optimize needs --axes or a point cloud");
  req.strategy = cfg.strategy;
  req.s_min_choice = cfg.s_min;
  const OptimizationResult result = solve(req);
  Report report{header(Command::kOptimize), std::nullopt};
  report.document["request"] = to_json(req);
  report.document["result"] = to_json(result);
  const double check = paper_bound(result.transform, req.diam);
  report.document["paper_bound_of_factors"] = check;
  report.document["within_epsilon"] = check <= req.epsilon + bound_tolerance(req.diam);
  return report;
}

Report run_verify(const ExperimentConfig& cfg) {
  const PointCloud cloud = require_cloud(cfg, "verify");
  const ScalingTransform& t = require_transform(cfg, "verify");
  const auto reports = verify_stability(cloud, t, cfg.dims, cfg.wasserstein_p, cfg.budget);
  Report report{header(Command::kVerify), std::vector<Json>{}};
  report.document["cloud"] = cloud_summary(cloud);
  report.document["transform"] = to_json(t);
  Json list = Json::array();
  for (const auto& r : reports) {
    list.push_back(to_json(r));
    report.table->push_back(report_row(r));
  }
  report.document["reports"] = list;
  return report;
}

Report run_iterate(const ExperimentConfig& cfg) {
  const PointCloud cloud = require_cloud(cfg, "iterate");
  if (cfg.transforms.empty()) throw ValidationError("iterate needs --transform");
  const auto reports =
      verify_iterative_stability(cloud, cfg.transforms, cfg.dims, cfg.wasserstein_p, cfg.budget);
  const double diam = diameter(distance_matrix(cloud));
  Report report{header(Command::kIterate), std::vector<Json>{}};
  report.document["cloud"] = cloud_summary(cloud);
  Json ts = Json::array();
  for (const auto& t : cfg.transforms) ts.push_back(to_json(t));
  report.document["transforms"] = ts;
  report.document["composed"] = to_json(compose(cfg.transforms));
  report.document["cumulative_bound"] = cumulative_bound(cfg.transforms, diam);
  report.document["corrected_cumulative_bound"] = corrected_cumulative_bound(cfg.transforms, diam);
  Json list = Json::array();
  for (const auto& r : reports) {
    list.push_back(to_json(r));
    report.table->push_back(report_row(r));
  }
  report.document["reports"] = list;
  return report;
}

// One random factor vector for a trial.
std::vector<double> trial_factors(std::mt19937_64& rng, std::size_t axes, TransformMode mode) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  std::vector<double> f(axes);
  if (mode == TransformMode::kRegime) {
    if (axes == 1) return {1.0};
    for (double& x : f) x = between(0.5, 1.5);
    const std::size_t low = static_cast<std::size_t>(unit(rng) * static_cast<double>(axes)) % axes;
    const std::size_t high = (low + 1 + static_cast<std::size_t>(unit(rng) * static_cast<double>(axes - 1)) % (axes - 1)) % axes;
    f[low] = between(0.5, 1.0);
    f[high] = between(1.0, 1.5);
    return f;
  }
  // Unrestricted: cycle through above-one, below-one and straddling draws.
  const int kind = static_cast<int>(unit(rng) * 3.0);
  const double lo = kind == 0 ? 1.0 : 0.3;
  const double hi = kind == 1 ? 1.0 : 3.0;
  for (double& x : f) x = between(lo, hi);
  return f;
}

struct TrialOutcome {
  std::size_t points = 0;
  std::size_t axes = 0;
  std::vector<double> factors;
  std::vector<StabilityReport> reports;
};

Report run_trials(const ExperimentConfig& cfg) {
  const auto fixed_cloud = load_point_cloud(cfg);
  std::vector<TrialOutcome> outcomes(cfg.trials);
  std::vector<std::exception_ptr> errors(cfg.trials);

  auto run_one = [&](std::size_t t) {
    std::mt19937_64 rng(trial_seed(cfg.seed, t));
    std::optional<PointCloud> random_cloud;
    if (!fixed_cloud) {
      std::uniform_int_distribution<std::size_t> n_points(3, cfg.max_points);
      std::uniform_int_distribution<std::size_t> n_axes(1, cfg.max_axes);
      const std::size_t n = n_points(rng);
      const std::size_t d = n_axes(rng);
      std::uniform_real_distribution<double> coord(-1.0, 1.0);
      std::vector<double> coords(n * d);
      for (double& c : coords) c = coord(rng);
      random_cloud = PointCloud::from_row_major(d, std::move(coords));
    }
    const PointCloud& cloud = fixed_cloud ? *fixed_cloud : *random_cloud;
    TrialOutcome& out = outcomes[t];
    out.points = cloud.size();
    out.axes = cloud.dimension();
    out.factors = trial_factors(rng, cloud.dimension(), cfg.transform_mode);
    out.reports = verify_stability(cloud, ScalingTransform(out.factors), cfg.dims,
                                   cfg.wasserstein_p, cfg.budget);
  };
  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      try {
        run_one(t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(cfg.threads, 1, cfg.trials);
  if (workers == 1) {
    worker(0, cfg.trials);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (cfg.trials + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(cfg.trials, begin + chunk);
      if (begin < end) pool.emplace_back(worker, begin, end);
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  struct Tally {
    std::size_t rows = 0;
    std::size_t paper_violations = 0;
    std::size_t corrected_violations = 0;
    std::size_t chain_violations = 0;
  };
  Tally inside, outside;
  Report report{header(Command::kTrials), std::vector<Json>{}};
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const TrialOutcome& o = outcomes[t];
    const ScalingTransform transform(o.factors);
    for (const auto& r : o.reports) {
      Tally& tally = r.regime_contains_one ? inside : outside;
      ++tally.rows;
      tally.paper_violations += r.holds_paper ? 0 : 1;
      tally.corrected_violations += r.holds_corrected ? 0 : 1;
      tally.chain_violations += (r.wasserstein && !r.wasserstein->holds_chain) ? 1 : 0;
      Json row{{"trial", t},
               {"points", o.points},
               {"axes", o.axes},
               {"s_min", transform.s_min()},
               {"s_max", transform.s_max()}};
      const Json fields = report_row(r);
      for (const auto& [key, value] : fields.items()) row[key] = value;
      report.table->push_back(std::move(row));
    }
  }
  if (inside.paper_violations > 0) {
    throw InvariantViolation("bound violated inside the s_min <= 1 <= s_max regime");
  }
  if (inside.corrected_violations + outside.corrected_violations > 0) {
    throw InvariantViolation("corrected bound violated");
  }
  if (inside.chain_violations + outside.chain_violations > 0) {
    throw InvariantViolation("Wasserstein chain bound violated");
  }
  auto tally_json = [](const Tally& t) {
    return Json{{"rows", t.rows},
                {"paper_violations", t.paper_violations},
                {"corrected_violations", t.corrected_violations},
                {"wasserstein_chain_violations", t.chain_violations}};
  };
  Json& doc = report.document;
  doc["seed"] = cfg.seed;
  doc["trials"] = cfg.trials;
  doc["transform_mode"] = cfg.transform_mode == TransformMode::kRegime ? "regime" : "unrestricted";
  doc["dims"] = cfg.dims;
  doc["aggregate"] = Json{{"regime_contains_one", tally_json(inside)},
                          {"regime_excludes_one", tally_json(outside)}};
  doc["rows"] = *report.table;
  return report;
}

Report run_case_study_rgb(const ExperimentConfig& cfg) {
  const double epsilon = cfg.epsilon.value_or(10.0);
  const auto loaded = load_point_cloud(cfg);
  const bool reference = !loaded;
  const PointCloud cloud = loaded ? *loaded : PointCloud(kRgbExtremes);
  if (cloud.dimension() != 3) throw ValidationError("RGB case study needs 3-channel points");

  const double cube_diameter = 255.0 * std::sqrt(3.0);
  const double diam = diameter(distance_matrix(cloud));
  std::vector<double> ranges(3);
  for (std::size_t c = 0; c < 3; ++c) {
    double lo = cloud.point(0)[c], hi = lo;
    for (std::size_t i = 1; i < cloud.size(); ++i) {
      lo = std::min(lo, cloud.point(i)[c]);
      hi = std::max(hi, cloud.point(i)[c]);
    }
    ranges[c] = hi - lo;
  }

  OptimizationRequest req;
  req.n = 3;
  req.epsilon = epsilon;
  req.diam = diam;
  req.strategy = UniformPreferred{};
  const OptimizationResult uniform = solve(req);
  req.strategy = BoundarySpread{1};  // blue channel at s_max
  const OptimizationResult spread = solve(req);

  Report report{header(Command::kCaseStudyRgb), std::nullopt};
  Json& doc = report.document;
  doc["epsilon"] = epsilon;
  doc["rgb_cube_diameter"] = cube_diameter;
  doc["rgb_cube_max_variability"] = max_variability(epsilon, cube_diameter);
  doc["source"] = reference ? "reference-extremes" : "input";
  doc["cloud"] = cloud_summary(cloud);
  doc["channel_ranges"] = ranges;
  doc["diameter"] = diam;
  if (reference) {
    doc["diameter_note"] =
        Json{{"quoted_value", kQuotedRgbDiameter},
             {"recomputed_value", diam},
             {"difference", diam - kQuotedRgbDiameter},
             {"text", "sqrt(150^2 + 120^2 + 180^2) = sqrt(69300); the quoted 263.02 does not "
                      "match these channel ranges, all values here use the recomputed diameter"}};
  }
  doc["max_variability"] = spread.variability_cap;
  doc["uniform_solution"] = to_json(uniform);
  doc["spread_solution"] = to_json(spread);

  std::vector<int> dims;
  for (int k : cfg.dims) {
    if (static_cast<std::size_t>(k) + 1 <= cloud.size()) dims.push_back(k);
  }
  Json verification = Json::array();
  if (!dims.empty()) {
    for (const auto& r : verify_stability(cloud, spread.transform, dims, cfg.wasserstein_p, cfg.budget)) {
      Json j = to_json(r);
      j["within_epsilon"] = r.measured_bottleneck <= epsilon + bound_tolerance(diam);
      verification.push_back(j);
    }
  }
  doc["verification"] = verification;
  return report;
}

Report run_case_study_multimodal(const ExperimentConfig& cfg) {
  const double epsilon = cfg.epsilon.value_or(5.0);
  const auto cloud = load_point_cloud(cfg);
  const double diam = cfg.diameter ? *cfg.diameter : cloud ? diameter(distance_matrix(*cloud)) : 200.0;
  const ModalityScaling scaling = modality_scaling(cfg.groups, epsilon, diam);
  const double cap = max_variability(epsilon, diam);

  Report report{header(Command::kCaseStudyMultimodal), std::nullopt};
  Json& doc = report.document;
  doc["epsilon"] = epsilon;
  doc["diameter"] = diam;
  doc["max_variability"] = cap;
  Json groups = Json::array();
  for (std::size_t g = 0; g < cfg.groups.size(); ++g) {
    groups.push_back(Json{{"group", g}, {"axes", cfg.groups[g]}, {"factor", scaling.group_factors[g]}});
  }
  doc["groups"] = groups;
  doc["factors"] = scaling.group_factors;
  const double achieved = cfg.groups.size() > 1 ? cap : 0.0;
  doc["variability"] = achieved;
  doc["bound"] = achieved * diam;
  doc["paper_bound_of_factors"] = paper_bound(scaling.transform, diam);

  // Equalizing ranges (largest range / each range) typically needs a huge
  // variability; report whether it would fit under the cap.
  if (!cfg.ranges.empty()) {
    if (cfg.ranges.size() != cfg.groups.size()) {
      throw ValidationError("--ranges needs one value per group");
    }
    const double widest = *std::max_element(cfg.ranges.begin(), cfg.ranges.end());
    std::vector<double> equalizing;
    for (double r : cfg.ranges) {
      if (!(r > 0.0)) throw ValidationError("ranges must be positive");
      equalizing.push_back(widest / r);
    }
    const ScalingTransform eq(equalizing);
    doc["range_equalization"] = Json{{"factors", equalizing},
                                     {"variability", eq.variability()},
                                     {"feasible", eq.variability() <= cap}};
  }

  if (cloud) {
    if (cloud->dimension() != scaling.transform.dimension()) {
      throw ValidationError("group sizes must add up to the cloud dimension");
    }
    Json verification = Json::array();
    for (const auto& r : verify_stability(*cloud, scaling.transform, cfg.dims, cfg.wasserstein_p, cfg.budget)) {
      Json j = to_json(r);
      j["within_epsilon"] = r.measured_bottleneck <= epsilon + bound_tolerance(diam);
      verification.push_back(j);
    }
    doc["verification"] = verification;
  }
  return report;
}

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + "\"";
  }
  if (v.is_structured()) return csv_cell(Json(dump_json(v, -1)));
  return v.dump();
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, Json>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && std::any_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); })) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else {
    out.emplace_back(prefix, j);
  }
}

}  // namespace

Command parse_command(const std::string& name) {
  for (Command c : {Command::kDiagram, Command::kDistance, Command::kBound, Command::kOptimize,
                    Command::kVerify, Command::kTrials, Command::kIterate, Command::kCaseStudyRgb,
                    Command::kCaseStudyMultimodal}) {
    if (command_name(c) == name) return c;
  }
  throw ValidationError("unknown command '" + name + "'");
}

std::string command_name(Command command) {
  switch (command) {
    case Command::kDiagram: return "diagram";
    case Command::kDistance: return "distance";
    case Command::kBound: return "bound";
    case Command::kOptimize: return "optimize";
    case Command::kVerify: return "verify";
    case Command::kTrials: return "trials";
    case Command::kIterate: return "iterate";
    case Command::kCaseStudyRgb: return "case-study-rgb";
    case Command::kCaseStudyMultimodal: return "case-study-multimodal";
  }
  return "?";
}

void ExperimentConfig::validate(Command command) const {
  if (input && generator) throw ValidationError("use either --input or --generate, not both");
  if (trials < 1) throw ValidationError("--trials must be at least 1");
  if (epsilon && !(*epsilon > 0.0 && std::isfinite(*epsilon))) {
    throw ValidationError("--epsilon must be positive");
  }
  if (dims.empty()) throw ValidationError("--dims must name at least one dimension");
  for (int k : dims) {
    if (k < 0 || k > 2) throw ValidationError("--dims entries must be 0, 1 or 2");
    if (k > max_dim) {
      throw BudgetError("homology dimension " + std::to_string(k) + " exceeds --max-dim " +
                        std::to_string(max_dim));
    }
  }
  if (wasserstein_p && !(*wasserstein_p >= 1.0 && std::isfinite(*wasserstein_p))) {
    throw ValidationError("--wasserstein-p must be finite and at least 1");
  }
  if (max_radius && !(*max_radius > 0.0)) throw ValidationError("--max-radius must be positive");
  if (diameter && !(*diameter > 0.0 && std::isfinite(*diameter))) {
    throw ValidationError("--diameter must be positive");
  }
  if (threads < 1) throw ValidationError("--threads must be at least 1");
  if (command == Command::kTrials) {
    if (max_points < 3) throw ValidationError("--max-points must be at least 3");
    if (max_axes < 1) throw ValidationError("--max-axes must be at least 1");
  }
}

std::optional<PointCloud> load_point_cloud(const ExperimentConfig& config) {
  if (config.input) return load_point_cloud_file(*config.input);
  if (config.generator) return generate(*config.generator);
  return std::nullopt;
}

Report run_experiment(const ExperimentConfig& config, Command command) {
  config.validate(command);
  switch (command) {
    case Command::kDiagram: return run_diagram(config);
    case Command::kDistance: return run_distance(config);
    case Command::kBound: return run_bound(config);
    case Command::kOptimize: return run_optimize(config);
    case Command::kVerify: return run_verify(config);
    case Command::kTrials: return run_trials(config);
    case Command::kIterate: return run_iterate(config);
    case Command::kCaseStudyRgb: return run_case_study_rgb(config);
    case Command::kCaseStudyMultimodal: return run_case_study_multimodal(config);
  }
  throw ValidationError("unknown command");
}

std::string render(const Report& report, OutputFormat format) {
  if (format == OutputFormat::kJson) return dump_json(report.document) + "\n";
  std::string out;
  if (report.table) {
    if (report.table->empty()) return out;
    bool first = true;
    for (const auto& [key, _] : report.table->front().items()) {
      if (!first) out += ',';
      first = false;
      out += key;
    }
    out += '\n';
    for (const auto& row : *report.table) {
      first = true;
      for (const auto& [_, value] : row.items()) {
        if (!first) out += ',';
        first = false;
        out += csv_cell(value);
      }
      out += '\n';
    }
    return out;
  }
  std::vector<std::pair<std::string, Json>> leaves;
  flatten(report.document, "", leaves);
  out += "key,value\n";
  for (const auto& [key, value] : leaves) out += key + "," + csv_cell(value) + "\n";
  return out;
}

}  // namespace topostab
