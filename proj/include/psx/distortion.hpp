#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "psx/image.hpp"

namespace psx {

/// Image corruption families, each with 5 severities. "none" is an identity
/// debug family.
enum class DistortionFamily {
  none,
  gaussian_noise,
  impulse_noise,
  gaussian_blur,
  brightness,
  contrast,
  pixelate,
  jpeg,
};

struct DistortionSpec {
  DistortionFamily family = DistortionFamily::none;
  int severity = 1;          // 1..5
  std::uint64_t seed = 0;    // stochastic families only

  void validate() const;
};

std::string family_name(DistortionFamily family);
DistortionFamily parse_family(const std::string& name);

/// Parses "family:severity", e.g. "gaussian_noise:3".
DistortionSpec parse_distortion(const std::string& text, std::uint64_t seed = 0);

/// Applies the corruption; output shares the input dims and is clamped to
/// [0, 1]. Stochastic families are deterministic given the spec's seed.
PlanarImage apply_distortion(const PlanarImage& img, const DistortionSpec& spec);

/// All 5 severities applied independently to the same input, in order.
std::vector<PlanarImage> severity_sweep(const PlanarImage& img, DistortionFamily family,
                                        std::uint64_t seed);

}  // namespace psx
