#include "psx/expdist.hpp"

#include <algorithm>

namespace psx {

ImportanceMap project_explanation(const Explanation& expl, int class_id) {
  const int pos = expl.index_of(class_id);
  if (pos < 0)
    throw LookupError("project_explanation: class " + std::to_string(class_id) + " not explained");
  const Eigen::VectorXd& coef = expl.coefficients[static_cast<std::size_t>(pos)];

  ImportanceMap map;
  map.class_id = class_id;
  map.values.resize(expl.segment_map.height(), expl.segment_map.width());
  for (Index j = 0; j < map.width(); ++j)
    for (Index i = 0; i < map.height(); ++i)
      map.values(i, j) = coef(expl.segment_map.labels(i, j));
  return map;
}

double explanation_distance(const Explanation& a, const Explanation& b,
                            bool per_pixel_normalized) {
  if (a.segment_map.height() != b.segment_map.height() ||
      a.segment_map.width() != b.segment_map.width())
    throw DimensionError("explanation_distance: source dims differ");

  std::vector<int> ca = a.class_ids, cb = b.class_ids;
  std::sort(ca.begin(), ca.end());
  std::sort(cb.begin(), cb.end());
  if (ca != cb) throw ComparabilityError("explanation_distance: explained class sets differ");
  if (ca.empty()) throw ComparabilityError("explanation_distance: no explained classes");

  const double pixels =
      static_cast<double>(a.segment_map.height() * a.segment_map.width());
  double acc = 0.0;
  for (int id : ca) {
    const ImportanceMap ma = project_explanation(a, id);
    const ImportanceMap mb = project_explanation(b, id);
    double frob2 = ((ma.values - mb.values) * (ma.values - mb.values)).sum();
    if (per_pixel_normalized) frob2 /= pixels;
    acc += frob2;
  }
  return acc / static_cast<double>(ca.size());
}

}  // namespace psx
