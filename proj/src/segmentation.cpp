#include "psx/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace psx {

void SegmentMap::validate() const {
  if (segment_count < 1) throw ParameterError("SegmentMap: segment_count must be >= 1");
  std::vector<Index> counts(static_cast<std::size_t>(segment_count), 0);
  for (Index j = 0; j < labels.cols(); ++j)
    for (Index i = 0; i < labels.rows(); ++i) {
      const int id = labels(i, j);
      if (id < 0 || id >= segment_count) throw ParameterError("SegmentMap: label out of range");
      ++counts[static_cast<std::size_t>(id)];
    }
  for (Index c : counts)
    if (c == 0) throw ParameterError("SegmentMap: empty segment id");
}

bool SegmentMap::connected() const {
  const Index h = labels.rows(), w = labels.cols();
  Eigen::ArrayXXi seen = Eigen::ArrayXXi::Zero(h, w);
  std::vector<bool> id_seen(static_cast<std::size_t>(segment_count), false);
  std::vector<std::pair<Index, Index>> stack;
  for (Index i = 0; i < h; ++i)
    for (Index j = 0; j < w; ++j) {
      if (seen(i, j)) continue;
      const int id = labels(i, j);
      if (id_seen[static_cast<std::size_t>(id)]) return false;  // second component of this id
      id_seen[static_cast<std::size_t>(id)] = true;
      stack.push_back({i, j});
      seen(i, j) = 1;
      while (!stack.empty()) {
        auto [y, x] = stack.back();
        stack.pop_back();
        const Index ny[4] = {y - 1, y + 1, y, y};
        const Index nx[4] = {x, x, x - 1, x + 1};
        for (int n = 0; n < 4; ++n) {
          if (ny[n] < 0 || ny[n] >= h || nx[n] < 0 || nx[n] >= w) continue;
          if (seen(ny[n], nx[n]) || labels(ny[n], nx[n]) != id) continue;
          seen(ny[n], nx[n]) = 1;
          stack.push_back({ny[n], nx[n]});
        }
      }
    }
  return true;
}

int default_segment_target(Index height, Index width) {
  return std::min(height, width) <= 64 ? 16 : 50;
}

namespace {

struct Center {
  double y = 0, x = 0;
  std::vector<double> color;  // one entry per channel
};

// Flood fill of one 4-connected component; returns its pixels in scan order.
std::vector<Index> component_pixels(const Eigen::ArrayXXi& labels, Eigen::ArrayXXi& comp_id,
                                    Index start, int id, int comp) {
  const Index h = labels.rows(), w = labels.cols();
  std::vector<Index> pixels;
  std::vector<Index> stack{start};
  comp_id(start % h, start / h) = comp;
  while (!stack.empty()) {
    const Index p = stack.back();
    stack.pop_back();
    pixels.push_back(p);
    const Index i = p % h, j = p / h;
    const Index ny[4] = {i - 1, i + 1, i, i};
    const Index nx[4] = {j, j, j - 1, j + 1};
    for (int n = 0; n < 4; ++n) {
      if (ny[n] < 0 || ny[n] >= h || nx[n] < 0 || nx[n] >= w) continue;
      if (comp_id(ny[n], nx[n]) >= 0 || labels(ny[n], nx[n]) != id) continue;
      comp_id(ny[n], nx[n]) = comp;
      stack.push_back(nx[n] * h + ny[n]);
    }
  }
  return pixels;
}

// Merge every non-largest component of each label into the largest adjacent
// segment, then relabel ids contiguously in scan order of first appearance.
void enforce_connectivity(Eigen::ArrayXXi& labels, int label_count) {
  const Index h = labels.rows(), w = labels.cols();

  Eigen::ArrayXXi comp_id = Eigen::ArrayXXi::Constant(h, w, -1);
  struct Comp {
    int label;
    std::vector<Index> pixels;  // column-major flat indices (j * h + i)
  };
  std::vector<Comp> comps;
  // scan column-major so flat indices are monotone within a column sweep
  for (Index j = 0; j < w; ++j)
    for (Index i = 0; i < h; ++i) {
      if (comp_id(i, j) >= 0) continue;
      const int id = labels(i, j);
      const int c = static_cast<int>(comps.size());
      comps.push_back({id, component_pixels(labels, comp_id, j * h + i, id, c)});
    }

  // largest component per label keeps the id; ties go to the earlier one
  std::vector<int> main_comp(static_cast<std::size_t>(label_count), -1);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto lbl = static_cast<std::size_t>(comps[c].label);
    if (main_comp[lbl] < 0 ||
        comps[c].pixels.size() > comps[static_cast<std::size_t>(main_comp[lbl])].pixels.size())
      main_comp[lbl] = static_cast<int>(c);
  }

  std::vector<Index> label_size(static_cast<std::size_t>(label_count), 0);
  for (Index j = 0; j < w; ++j)
    for (Index i = 0; i < h; ++i) ++label_size[static_cast<std::size_t>(labels(i, j))];

  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto lbl = static_cast<std::size_t>(comps[c].label);
    if (main_comp[lbl] == static_cast<int>(c)) continue;
    // orphan: find the largest segment adjacent to this component
    int best = -1;
    Index best_size = -1;
    for (Index p : comps[c].pixels) {
      const Index i = p % h, j = p / h;
      const Index ny[4] = {i - 1, i + 1, i, i};
      const Index nx[4] = {j, j, j - 1, j + 1};
      for (int n = 0; n < 4; ++n) {
        if (ny[n] < 0 || ny[n] >= h || nx[n] < 0 || nx[n] >= w) continue;
        const int other = labels(ny[n], nx[n]);
        if (other == comps[c].label) continue;
        const Index sz = label_size[static_cast<std::size_t>(other)];
        if (sz > best_size || (sz == best_size && other < best)) {
          best = other;
          best_size = sz;
        }
      }
    }
    if (best < 0) continue;  // single-label image, nothing adjacent
    for (Index p : comps[c].pixels) labels(p % h, p / h) = best;
    label_size[lbl] -= static_cast<Index>(comps[c].pixels.size());
    label_size[static_cast<std::size_t>(best)] += static_cast<Index>(comps[c].pixels.size());
  }

  // contiguous relabel by first appearance, row-major
  std::vector<int> remap(static_cast<std::size_t>(label_count), -1);
  int next = 0;
  for (Index i = 0; i < h; ++i)
    for (Index j = 0; j < w; ++j) {
      int& m = remap[static_cast<std::size_t>(labels(i, j))];
      if (m < 0) m = next++;
      labels(i, j) = m;
    }
}

}  // namespace

SegmentMap slic_segment(const PlanarImage& img, int target_segments, double compactness,
                        int iterations) {
  const Index h = img.height(), w = img.width();
  const int channels = img.channels();
  if (target_segments < 2) throw ParameterError("slic_segment: target_segments must be >= 2");
  if (static_cast<Index>(target_segments) > h * w)
    throw ParameterError("slic_segment: more segments than pixels");
  if (!(compactness > 0.0)) throw ParameterError("slic_segment: compactness must be > 0");
  if (iterations < 1) throw ParameterError("slic_segment: iterations must be >= 1");

  const double spacing = std::sqrt(static_cast<double>(h * w) / target_segments);
  const double spatial_scale = compactness / spacing;
  const double ss2 = spatial_scale * spatial_scale;

  // grid shape: roughly square cells, at least target_segments centers
  const int ny = std::max<int>(
      1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(target_segments) * h / w))));
  const int nx = (target_segments + ny - 1) / ny;
  const int k = ny * nx;

  std::vector<Center> centers(static_cast<std::size_t>(k));
  for (int gy = 0; gy < ny; ++gy)
    for (int gx = 0; gx < nx; ++gx) {
      Center& c = centers[static_cast<std::size_t>(gy * nx + gx)];
      c.y = (gy + 0.5) * static_cast<double>(h) / ny;
      c.x = (gx + 0.5) * static_cast<double>(w) / nx;
      const Index pi = std::min<Index>(h - 1, static_cast<Index>(c.y));
      const Index pj = std::min<Index>(w - 1, static_cast<Index>(c.x));
      c.color.resize(static_cast<std::size_t>(channels));
      for (int ch = 0; ch < channels; ++ch) c.color[static_cast<std::size_t>(ch)] = img(ch, pi, pj);
    }

  // initial assignment: nearest grid cell, so every pixel starts labeled
  Eigen::ArrayXXi labels(h, w);
  for (Index i = 0; i < h; ++i) {
    const int gy = std::min<int>(ny - 1, static_cast<int>(i * ny / h));
    for (Index j = 0; j < w; ++j) {
      const int gx = std::min<int>(nx - 1, static_cast<int>(j * nx / w));
      labels(i, j) = gy * nx + gx;
    }
  }

  const auto window = static_cast<Index>(std::ceil(spacing));
  Plane<double> best_d(h, w);
  for (int it = 0; it < iterations; ++it) {
    best_d.setConstant(std::numeric_limits<double>::infinity());
    for (int c = 0; c < k; ++c) {
      const Center& ct = centers[static_cast<std::size_t>(c)];
      const Index i0 = std::max<Index>(0, static_cast<Index>(ct.y) - window);
      const Index i1 = std::min<Index>(h - 1, static_cast<Index>(ct.y) + window);
      const Index j0 = std::max<Index>(0, static_cast<Index>(ct.x) - window);
      const Index j1 = std::min<Index>(w - 1, static_cast<Index>(ct.x) + window);
      for (Index j = j0; j <= j1; ++j) {
        const double dx = static_cast<double>(j) - ct.x;
        for (Index i = i0; i <= i1; ++i) {
          const double dy = static_cast<double>(i) - ct.y;
          double d = ss2 * (dy * dy + dx * dx);
          for (int ch = 0; ch < channels; ++ch) {
            const double dc = img(ch, i, j) - ct.color[static_cast<std::size_t>(ch)];
            d += dc * dc;
          }
          if (d < best_d(i, j)) {  // strict: ties keep the lower center index
            best_d(i, j) = d;
            labels(i, j) = c;
          }
        }
      }
    }

    std::vector<Center> acc(static_cast<std::size_t>(k));
    std::vector<Index> n(static_cast<std::size_t>(k), 0);
    for (auto& a : acc) a.color.assign(static_cast<std::size_t>(channels), 0.0);
    for (Index j = 0; j < w; ++j)
      for (Index i = 0; i < h; ++i) {
        const auto c = static_cast<std::size_t>(labels(i, j));
        acc[c].y += static_cast<double>(i);
        acc[c].x += static_cast<double>(j);
        for (int ch = 0; ch < channels; ++ch)
          acc[c].color[static_cast<std::size_t>(ch)] += img(ch, i, j);
        ++n[c];
      }
    for (int c = 0; c < k; ++c) {
      const auto uc = static_cast<std::size_t>(c);
      if (n[uc] == 0) continue;  // empty center keeps its previous state
      const double inv = 1.0 / static_cast<double>(n[uc]);
      centers[uc].y = acc[uc].y * inv;
      centers[uc].x = acc[uc].x * inv;
      for (int ch = 0; ch < channels; ++ch)
        centers[uc].color[static_cast<std::size_t>(ch)] = acc[uc].color[static_cast<std::size_t>(ch)] * inv;
    }
  }

  enforce_connectivity(labels, k);

  SegmentMap seg;
  seg.labels = std::move(labels);
  seg.segment_count = seg.labels.maxCoeff() + 1;
  return seg;
}

Eigen::MatrixXd segment_means(const PlanarImage& img, const SegmentMap& seg) {
  if (img.height() != seg.height() || img.width() != seg.width())
    throw DimensionError("segment_means: dimension mismatch");
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(seg.segment_count, img.channels());
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(seg.segment_count);
  for (Index j = 0; j < img.width(); ++j)
    for (Index i = 0; i < img.height(); ++i) {
      const int id = seg.labels(i, j);
      counts(id) += 1.0;
      for (int c = 0; c < img.channels(); ++c) sums(id, c) += img(c, i, j);
    }
  for (Index s = 0; s < sums.rows(); ++s)
    if (counts(s) > 0.0) sums.row(s) /= counts(s);
  return sums;
}

Eigen::ArrayXX<bool> segment_boundaries(const SegmentMap& seg) {
  const Index h = seg.height(), w = seg.width();
  Eigen::ArrayXX<bool> b = Eigen::ArrayXX<bool>::Constant(h, w, false);
  for (Index j = 0; j < w; ++j)
    for (Index i = 0; i < h; ++i) {
      if (i + 1 < h && seg.labels(i, j) != seg.labels(i + 1, j)) b(i, j) = true;
      if (j + 1 < w && seg.labels(i, j) != seg.labels(i, j + 1)) b(i, j) = true;
    }
  return b;
}

PlanarImage segment_preview(const PlanarImage& img, const SegmentMap& seg) {
  const Eigen::MatrixXd means = segment_means(img, seg);
  const Eigen::ArrayXX<bool> edges = segment_boundaries(seg);
  PlanarImage out(img.height(), img.width(), 3);
  for (Index j = 0; j < img.width(); ++j)
    for (Index i = 0; i < img.height(); ++i) {
      const int id = seg.labels(i, j);
      for (int c = 0; c < 3; ++c) {
        const int src = img.channels() == 3 ? c : 0;
        out(c, i, j) = edges(i, j) ? (c < 2 ? 1.0 : 0.0) : means(id, src);
      }
    }
  return out;
}

}  // namespace psx
