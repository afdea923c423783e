#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "topostab/metric.hpp"
#include "topostab/optimizer.hpp"
#include "topostab/rips.hpp"
#include "topostab/stability.hpp"

namespace topostab {

using Json = nlohmann::ordered_json;

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double x);

/// JSON text with every floating-point number written to 17 significant
/// digits. Non-finite numbers are rejected; encode them as strings first.
std::string dump_json(const Json& j, int indent = 2);

/// JSON number, or the string "inf" for +infinity.
Json number_or_inf(double x);

// Point clouds: one row per point, comma-separated, no header.
PointCloud read_point_cloud_csv(std::istream& in, const std::string& source = "<stream>");
PointCloud read_point_cloud_csv(const std::filesystem::path& path);
void write_point_cloud_csv(std::ostream& out, const PointCloud& cloud);

/// Plain-text PPM (P3); one 3-D point per pixel, channels rescaled to 0..255.
PointCloud read_ppm_p3(std::istream& in, const std::string& source = "<stream>");
PointCloud read_ppm_p3(const std::filesystem::path& path);

/// CSV, or PPM when the file has a .ppm extension.
PointCloud load_point_cloud_file(const std::filesystem::path& path);

// {"factors": [f1, ..., fn]}
Json to_json(const ScalingTransform& t);
ScalingTransform transform_from_json(const Json& j);
/// A single transform object, an array of them, or {"transforms": [...]}.
std::vector<ScalingTransform> transforms_from_json(const Json& j);
/// Inline "1,1.1" or "1,1.1;1,1.2" (';' separates transforms).
std::vector<ScalingTransform> parse_transform_list(const std::string& text);

// {"dim": k, "pairs": [[b, d], ...], "essential": [b, ...]}
Json to_json(const PersistenceDiagram& d);
PersistenceDiagram diagram_from_json(const Json& j);
/// A single diagram, an array of diagrams, or an object with "diagrams".
std::vector<PersistenceDiagram> diagrams_from_json(const Json& j);

Json to_json(const StabilityReport& r);
Json to_json(const MonteCarloReport& r);
Json to_json(const OptimizationRequest& r);
Json to_json(const OptimizationResult& r);

Json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
/// Throws ValidationError when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace topostab
