#pragma once

#include <Eigen/Core>

#include "psx/surrogate.hpp"

namespace psx {

/// Pixel-space projection of one explained class: every pixel carries the
/// coefficient of the superpixel it belongs to.
struct ImportanceMap {
  Plane<double> values;
  int class_id = 0;

  Index height() const { return values.rows(); }
  Index width() const { return values.cols(); }
};

/// Projects the class's coefficients through the segment map; the intercept
/// is excluded.
ImportanceMap project_explanation(const Explanation& expl, int class_id);

/// Distance between explanations in pixel space: the squared Frobenius norm
/// of the difference of projected maps, averaged over the shared classes.
/// Works across different segmentations; both explanations must cover the
/// same class set and dims. When per_pixel_normalized is set each squared
/// norm is divided by the pixel count (for cross-resolution comparisons).
double explanation_distance(const Explanation& a, const Explanation& b,
                            bool per_pixel_normalized = false);

}  // namespace psx
