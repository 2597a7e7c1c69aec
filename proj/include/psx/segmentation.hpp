#pragma once

#include <Eigen/Core>

#include "psx/image.hpp"

namespace psx {

/// Per-pixel superpixel labels. Ids are contiguous from 0, each id names one
/// 4-connected region.
struct SegmentMap {
  Eigen::ArrayXXi labels;  // height x width
  int segment_count = 0;

  Index height() const { return labels.rows(); }
  Index width() const { return labels.cols(); }

  /// Checks coverage and contiguity of ids (connectivity has its own helper).
  void validate() const;

  /// True when every id labels exactly one 4-connected component.
  bool connected() const;
};

/// SLIC superpixels: k-means over (color, x, y) with grid-initialized centers
/// at spacing sqrt(H*W/target), the spatial term scaled by
/// compactness/spacing. After the iterations, stray components are merged
/// into the largest adjacent segment. Deterministic: assignment ties break
/// toward the lower center index.
SegmentMap slic_segment(const PlanarImage& img, int target_segments, double compactness,
                        int iterations);

/// Reasonable target segment count for an image of the given extent.
int default_segment_target(Index height, Index width);

/// Arithmetic mean color per segment: one row per segment, one column per
/// channel.
Eigen::MatrixXd segment_means(const PlanarImage& img, const SegmentMap& seg);

/// True where a pixel borders a different segment (right/down comparison).
Eigen::ArrayXX<bool> segment_boundaries(const SegmentMap& seg);

/// Debug rendering: segments filled with their mean color, boundaries drawn
/// in yellow.
PlanarImage segment_preview(const PlanarImage& img, const SegmentMap& seg);

}  // namespace psx
