#include "topostab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "topostab/errors.hpp"

namespace topostab {

namespace {

GeneratorFamily parse_family(const std::string& name) {
  if (name == "circle") return GeneratorFamily::kCircle;
  if (name == "square") return GeneratorFamily::kSquare;
  if (name == "gaussian-blobs") return GeneratorFamily::kGaussianBlobs;
  if (name == "rgb-pixels") return GeneratorFamily::kRgbPixels;
  if (name == "grid") return GeneratorFamily::kGrid;
  throw ValidationError("unknown generator family '" + name + "'");
}

std::size_t as_count(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e9) {
    throw ValidationError(std::string(what) + " must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

double GeneratorSpec::param(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

std::string family_name(GeneratorFamily family) {
  switch (family) {
    case GeneratorFamily::kCircle: return "circle";
    case GeneratorFamily::kSquare: return "square";
    case GeneratorFamily::kGaussianBlobs: return "gaussian-blobs";
    case GeneratorFamily::kRgbPixels: return "rgb-pixels";
    case GeneratorFamily::kGrid: return "grid";
  }
  return "?";
}

GeneratorSpec parse_generator_spec(const std::string& text) {
  GeneratorSpec spec;
  const auto colon = text.find(':');
  spec.family = parse_family(text.substr(0, colon));
  if (spec.family == GeneratorFamily::kRgbPixels) spec.dimension = 3;
  if (colon == std::string::npos) return spec;
  std::stringstream fields(text.substr(colon + 1));
  std::string field;
  while (std::getline(fields, field, ',')) {
    if (field.empty()) continue;
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw ValidationError("generator option '" + field + "' lacks '='");
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw ValidationError("generator option '" + key + "' has non-numeric value '" + value + "'");
    }
    if (key == "n") {
      spec.count = as_count(v, "n");
    } else if (key == "dim") {
      spec.dimension = as_count(v, "dim");
    } else if (key == "seed") {
      if (v < 0 || v != std::floor(v)) throw ValidationError("seed must be a nonnegative integer");
      spec.seed = static_cast<std::uint64_t>(v);
    } else {
      spec.params[key] = v;
    }
  }
  return spec;
}

PointCloud generate(const GeneratorSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::size_t dim = spec.dimension;
  if (dim == 0) throw ValidationError("generator dimension must be positive");
  std::vector<double> coords;
  if (spec.family != GeneratorFamily::kGrid && spec.family != GeneratorFamily::kRgbPixels &&
      spec.count > kMaxGeneratedPoints) {
    throw BudgetError("generator is limited to " + std::to_string(kMaxGeneratedPoints) +
                      " points, requested " + std::to_string(spec.count));
  }

  switch (spec.family) {
    case GeneratorFamily::kCircle: {
      if (dim < 2) throw ValidationError("circle needs dimension >= 2");
      const double radius = spec.param("radius", 1.0);
      const double noise = spec.param("noise", 0.0);
      for (std::size_t i = 0; i < spec.count; ++i) {
        const double angle = 2.0 * std::numbers::pi * unit(rng);
        std::vector<double> p(dim, 0.0);
        p[0] = radius * std::cos(angle);
        p[1] = radius * std::sin(angle);
        if (noise > 0.0) {
          for (double& c : p) c += noise * gauss(rng);
        }
        coords.insert(coords.end(), p.begin(), p.end());
      }
      break;
    }
    case GeneratorFamily::kSquare: {
      if (dim < 2) throw ValidationError("square needs dimension >= 2");
      const double side = spec.param("side", 1.0);
      const double noise = spec.param("noise", 0.0);
      for (std::size_t i = 0; i < spec.count; ++i) {
        const double t = 4.0 * unit(rng);
        const int edge = std::min(3, static_cast<int>(t));
        const double u = (t - edge) * side;
        std::vector<double> p(dim, 0.0);
        switch (edge) {
          case 0: p[0] = u; break;
          case 1: p[0] = side; p[1] = u; break;
          case 2: p[0] = side - u; p[1] = side; break;
          default: p[1] = side - u; break;
        }
        if (noise > 0.0) {
          for (double& c : p) c += noise * gauss(rng);
        }
        coords.insert(coords.end(), p.begin(), p.end());
      }
      break;
    }
    case GeneratorFamily::kGaussianBlobs: {
      const std::size_t blobs = as_count(spec.param("blobs", 3.0), "blobs");
      const double spread = spec.param("spread", 0.3);
      const double extent = spec.param("extent", 10.0);
      std::vector<double> centers(blobs * dim);
      for (double& c : centers) c = extent * unit(rng);
      for (std::size_t i = 0; i < spec.count; ++i) {
        const std::size_t b = i % blobs;
        for (std::size_t c = 0; c < dim; ++c) {
          coords.push_back(centers[b * dim + c] + spread * gauss(rng));
        }
      }
      break;
    }
    case GeneratorFamily::kRgbPixels: {
      dim = 3;
      const std::size_t width = as_count(spec.param("width", 8.0), "width");
      const std::size_t height = as_count(spec.param("height", 8.0), "height");
      const double noise = spec.param("noise", 0.0);
      if (width * height > kMaxGeneratedPoints) {
        throw BudgetError("rgb-pixels image exceeds " + std::to_string(kMaxGeneratedPoints) +
                          " pixels");
      }
      const double wx = width > 1 ? static_cast<double>(width - 1) : 1.0;
      const double hy = height > 1 ? static_cast<double>(height - 1) : 1.0;
      for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
          const double fx = static_cast<double>(x) / wx;
          const double fy = static_cast<double>(y) / hy;
          double rgb[3] = {255.0 * fx, 255.0 * fy, 255.0 * (1.0 - 0.5 * (fx + fy))};
          for (double& c : rgb) {
            if (noise > 0.0) c += noise * gauss(rng);
            c = std::clamp(std::round(c), 0.0, 255.0);
          }
          coords.insert(coords.end(), rgb, rgb + 3);
        }
      }
      break;
    }
    case GeneratorFamily::kGrid: {
      const std::size_t side = as_count(spec.param("side", 3.0), "side");
      const double spacing = spec.param("spacing", 1.0);
      std::size_t total = 1;
      for (std::size_t c = 0; c < dim; ++c) {
        total *= side;
        if (total > kMaxGeneratedPoints) break;
      }
      if (total > kMaxGeneratedPoints) {
        throw BudgetError("grid would have more than " + std::to_string(kMaxGeneratedPoints) +
                          " points");
      }
      for (std::size_t i = 0; i < total; ++i) {
        std::size_t rest = i;
        for (std::size_t c = 0; c < dim; ++c) {
          coords.push_back(spacing * static_cast<double>(rest % side));
          rest /= side;
        }
      }
      break;
    }
  }
  if (coords.size() / dim > kMaxGeneratedPoints) {
    throw BudgetError("generator would produce more than " +
                      std::to_string(kMaxGeneratedPoints) + " points");
  }
  return PointCloud::from_row_major(dim, std::move(coords));
}

}  // namespace topostab
