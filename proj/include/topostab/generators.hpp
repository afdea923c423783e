#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>

#include "topostab/metric.hpp"

namespace topostab {

enum class GeneratorFamily { kCircle, kSquare, kGaussianBlobs, kRgbPixels, kGrid };

/// Synthetic point-cloud recipe. Family parameters (all optional):
///   circle          radius=1 noise=0
///   square          side=1 noise=0
///   gaussian-blobs  blobs=3 spread=0.3 extent=10
///   rgb-pixels      width=8 height=8 noise=0 (count is width*height, dim 3)
///   grid            side=3 spacing=1 (count is side^dim)
struct GeneratorSpec {
  GeneratorFamily family = GeneratorFamily::kCircle;
  std::size_t count = 12;
  std::size_t dimension = 2;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;

  double param(const std::string& key, double fallback) const;
};

inline constexpr std::size_t kMaxGeneratedPoints = 2048;

/// Parses "family:key=value,key=value". Recognized keys besides the family
/// parameters: n (point count), dim, seed.
GeneratorSpec parse_generator_spec(const std::string& text);

std::string family_name(GeneratorFamily family);

/// Deterministic for a given spec.
PointCloud generate(const GeneratorSpec& spec);

}  // namespace topostab
