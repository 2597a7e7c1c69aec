#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "psx/image.hpp"

namespace psx {

/// Reads an 8-bit PNG (gray or RGB; palette and alpha are converted) or a
/// binary PPM/PGM. Values come out scaled to [0, 1].
PlanarImage load_image(const std::string& path);

/// Writes an 8-bit PNG, clamping to [0, 1] before quantization.
void save_image(const PlanarImage& img, const std::string& path);

/// PNG encoding to a byte buffer (same quantization as save_image).
std::vector<std::uint8_t> encode_png(const PlanarImage& img);

/// Decode counterpart of encode_png; accepts what load_image accepts.
PlanarImage decode_png(const std::uint8_t* data, std::size_t size);

}  // namespace psx
