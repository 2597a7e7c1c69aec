#pragma once

#include <cstdint>
#include <vector>

namespace psx {

/// Binary encoding of superpixel state: 1 = present, 0 = ablated. Length
/// equals the segment count of the SegmentMap it refers to.
struct InterpretableVector {
  std::vector<std::uint8_t> bits;

  std::size_t size() const { return bits.size(); }
  bool all_ones() const {
    for (auto b : bits)
      if (!b) return false;
    return true;
  }
  static InterpretableVector ones(std::size_t n) { return {std::vector<std::uint8_t>(n, 1)}; }

  bool operator==(const InterpretableVector&) const = default;
};

}  // namespace psx
