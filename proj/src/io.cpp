#include "topostab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "topostab/errors.hpp"

namespace topostab {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

void dump_impl(const Json& j, int indent, int depth, std::string& out) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) throw ValidationError("cannot serialize a non-finite number");
      out += format_double(x);
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        dump_impl(e, indent, depth + 1, out);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(key).dump();
        out += indent < 0 ? ":" : ": ";
        dump_impl(value, indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    default:
      out += j.dump();
  }
}

double json_number(const Json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string() && j.get<std::string>() == "inf") {
    return std::numeric_limits<double>::infinity();
  }
  throw ValidationError(std::string(what) + " must be a number");
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump_impl(j, indent, 0, out);
  return out;
}

Json number_or_inf(double x) {
  if (std::isinf(x) && x > 0) return "inf";
  return x;
}

PointCloud read_point_cloud_csv(std::istream& in, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    std::size_t column = 0;
    while (std::getline(fields, field, ',')) {
      ++column;
      double value = 0.0;
      if (!parse_double(trim(field), value)) {
        throw ValidationError(source + ":" + std::to_string(line_no) + ": field " +
                              std::to_string(column) + " is not a finite number: '" +
                              trim(field) + "'");
      }
      row.push_back(value);
    }
    if (!line.empty() && line.back() == ',') {
      throw ValidationError(source + ":" + std::to_string(line_no) + ": trailing empty field");
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ValidationError(source + ":" + std::to_string(line_no) + ": row has " +
                            std::to_string(row.size()) + " fields, expected " +
                            std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError(source + ": no points");
  return PointCloud(rows);
}

PointCloud read_point_cloud_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return read_point_cloud_csv(in, path.string());
}

void write_point_cloud_csv(std::ostream& out, const PointCloud& cloud) {
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    for (std::size_t c = 0; c < p.size(); ++c) {
      if (c > 0) out << ',';
      out << format_double(p[c]);
    }
    out << '\n';
  }
}

PointCloud read_ppm_p3(std::istream& in, const std::string& source) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::stringstream ss(line);
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
  }
  if (tokens.empty() || tokens[0] != "P3") throw ValidationError(source + ": not a P3 PPM file");
  if (tokens.size() < 4) throw ValidationError(source + ": truncated PPM header");
  auto as_int = [&](std::size_t i) {
    long v = 0;
    const auto& t = tokens[i];
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || v < 0) {
      throw ValidationError(source + ": bad PPM token '" + t + "'");
    }
    return v;
  };
  const long width = as_int(1), height = as_int(2), maxval = as_int(3);
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535) {
    throw ValidationError(source + ": invalid PPM dimensions or maxval");
  }
  const std::size_t samples = static_cast<std::size_t>(width * height * 3);
  if (tokens.size() != 4 + samples) {
    throw ValidationError(source + ": expected " + std::to_string(samples) +
                          " samples, found " + std::to_string(tokens.size() - 4));
  }
  std::vector<double> coords(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const long v = as_int(4 + i);
    if (v > maxval) throw ValidationError(source + ": sample exceeds maxval");
    coords[i] = maxval == 255 ? static_cast<double>(v) : 255.0 * static_cast<double>(v) / static_cast<double>(maxval);
  }
  return PointCloud::from_row_major(3, std::move(coords));
}

PointCloud read_ppm_p3(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return read_ppm_p3(in, path.string());
}

PointCloud load_point_cloud_file(const std::filesystem::path& path) {
  if (path.extension() == ".ppm") return read_ppm_p3(path);
  return read_point_cloud_csv(path);
}

Json to_json(const ScalingTransform& t) {
  return Json{{"factors", std::vector<double>(t.factors().begin(), t.factors().end())}};
}

ScalingTransform transform_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("factors") || !j["factors"].is_array()) {
    throw ValidationError("transform JSON must be {\"factors\": [...]}");
  }
  std::vector<double> factors;
  for (const auto& f : j["factors"]) factors.push_back(json_number(f, "scaling factor"));
  return ScalingTransform(std::move(factors));
}

std::vector<ScalingTransform> transforms_from_json(const Json& j) {
  const Json* list = &j;
  if (j.is_object() && j.contains("transforms")) list = &j["transforms"];
  if (list->is_object()) return {transform_from_json(*list)};
  if (!list->is_array() || list->empty()) throw ValidationError("expected a list of transforms");
  std::vector<ScalingTransform> out;
  for (const auto& t : *list) out.push_back(transform_from_json(t));
  return out;
}

std::vector<ScalingTransform> parse_transform_list(const std::string& text) {
  std::vector<ScalingTransform> out;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    std::vector<double> factors;
    std::stringstream fields(group);
    std::string field;
    while (std::getline(fields, field, ',')) {
      double v = 0.0;
      if (!parse_double(trim(field), v)) {
        throw ValidationError("bad scaling factor '" + trim(field) + "'");
      }
      factors.push_back(v);
    }
    out.emplace_back(std::move(factors));
  }
  if (out.empty()) throw ValidationError("empty transform specification");
  return out;
}

Json to_json(const PersistenceDiagram& d) {
  Json pairs = Json::array();
  for (const auto& p : d.pairs) pairs.push_back(Json::array({p.birth, p.death}));
  return Json{{"dim", d.dim}, {"pairs", pairs}, {"essential", d.essential}};
}

PersistenceDiagram diagram_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer()) {
    throw ValidationError("diagram JSON needs an integer \"dim\"");
  }
  PersistenceDiagram d;
  d.dim = j["dim"].get<int>();
  if (d.dim < 0) throw ValidationError("diagram dimension must be nonnegative");
  if (j.contains("pairs")) {
    for (const auto& p : j["pairs"]) {
      if (!p.is_array() || p.size() != 2) throw ValidationError("diagram pairs must be [b, d]");
      const double birth = json_number(p[0], "birth");
      const double death = json_number(p[1], "death");
      if (!std::isfinite(birth)) throw ValidationError("birth must be finite");
      if (std::isinf(death)) {
        d.essential.push_back(birth);
        continue;
      }
      if (death < birth) throw ValidationError("diagram pair has death before birth");
      d.pairs.push_back({birth, death});
    }
  }
  if (j.contains("essential")) {
    for (const auto& b : j["essential"]) {
      const double birth = json_number(b, "essential birth");
      if (!std::isfinite(birth)) throw ValidationError("essential birth must be finite");
      d.essential.push_back(birth);
    }
  }
  std::sort(d.pairs.begin(), d.pairs.end());
  std::sort(d.essential.begin(), d.essential.end());
  return d;
}

std::vector<PersistenceDiagram> diagrams_from_json(const Json& j) {
  const Json* list = &j;
  if (j.is_object() && j.contains("diagrams")) list = &j["diagrams"];
  if (list->is_object()) return {diagram_from_json(*list)};
  if (!list->is_array()) throw ValidationError("expected a diagram or a list of diagrams");
  std::vector<PersistenceDiagram> out;
  for (const auto& d : *list) out.push_back(diagram_from_json(d));
  return out;
}

Json to_json(const StabilityReport& r) {
  Json j{{"homology_dim", r.homology_dim},
         {"diameter", r.diameter},
         {"measured_bottleneck", number_or_inf(r.measured_bottleneck)}};
  if (r.wasserstein) {
    j["measured_wasserstein"] = Json{{"p", r.wasserstein->p},
                                     {"value", number_or_inf(r.wasserstein->value)},
                                     {"chain_bound", r.wasserstein->chain_bound},
                                     {"holds_chain", r.wasserstein->holds_chain}};
  } else {
    j["measured_wasserstein"] = nullptr;
  }
  j["bound_paper"] = r.bound_paper;
  j["bound_corrected"] = r.bound_corrected;
  j["regime_contains_one"] = r.regime_contains_one;
  j["holds_paper"] = r.holds_paper;
  j["holds_corrected"] = r.holds_corrected;
  j["points_original"] = r.points_original;
  j["points_scaled"] = r.points_scaled;
  return j;
}

Json to_json(const MonteCarloReport& r) {
  return Json{{"mean_variability", r.mean_variability},
              {"std_error", r.std_error},
              {"expected_bound", r.expected_bound},
              {"trials", r.trials},
              {"seed", r.seed},
              {"regime_violation_fraction", r.regime_violation_fraction}};
}

Json to_json(const OptimizationRequest& r) {
  Json j{{"n", r.n}, {"epsilon", r.epsilon}, {"diam", r.diam}};
  if (const auto* spread = std::get_if<BoundarySpread>(&r.strategy)) {
    j["strategy"] = "boundary-spread";
    j["k"] = spread->k;
  } else {
    j["strategy"] = "uniform-preferred";
  }
  j["s_min_choice"] = r.s_min_choice;
  return j;
}

Json to_json(const OptimizationResult& r) {
  return Json{{"transform", to_json(r.transform)},
              {"achieved_variability", r.achieved_variability},
              {"variability_cap", r.variability_cap},
              {"bound_at_solution", r.bound_at_solution}};
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw ValidationError("failed writing " + path.string());
}

}  // namespace topostab
