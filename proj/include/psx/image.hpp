#pragma once

#include <Eigen/Core>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "psx/errors.hpp"

namespace psx {

using Index = Eigen::Index;

template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Taps = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

/// How samples outside the image are produced during filtering.
enum class Boundary {
  mirror,     // reflect about the edge sample without repeating it: d c b | a b c d
  replicate,  // clamp to the edge sample:                           a a a | a b c d
};

inline Index mirror_index(Index i, Index n) {
  if (n == 1) return 0;
  const Index period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

inline Index replicate_index(Index i, Index n) {
  return i < 0 ? 0 : (i >= n ? n - 1 : i);
}

inline Index boundary_index(Index i, Index n, Boundary mode) {
  return mode == Boundary::mirror ? mirror_index(i, n) : replicate_index(i, n);
}

// ---------------------------------------------------------------------------
// Kernel2D
// ---------------------------------------------------------------------------

/// Odd-sided 2-D filter taps. Kernels built from a 1-D profile keep the
/// factors around so filtering can run as two 1-D passes.
template <typename Scalar>
struct Kernel2DT {
  Plane<Scalar> taps;
  bool normalized = false;  // taps sum to 1
  Taps<Scalar> col_factor;  // vertical 1-D factor (empty if not separable)
  Taps<Scalar> row_factor;  // horizontal 1-D factor

  Index rows() const { return taps.rows(); }
  Index cols() const { return taps.cols(); }
  bool separable() const { return col_factor.size() > 0 && row_factor.size() > 0; }

  void validate() const {
    if (taps.rows() % 2 == 0 || taps.cols() % 2 == 0)
      throw ParameterError("Kernel2D: side lengths must be odd");
    if (normalized && std::abs(taps.sum() - Scalar(1)) >= Scalar(1e-9))
      throw ParameterError("Kernel2D: normalized kernel must sum to 1");
  }

  /// Same kernel with every tap scaled by s (drops the normalized flag).
  Kernel2DT scaled(Scalar s) const {
    Kernel2DT out;
    out.taps = taps * s;
    out.normalized = false;
    if (separable()) {
      const Scalar split = std::sqrt(std::abs(s));
      const Scalar sign = s < Scalar(0) ? Scalar(-1) : Scalar(1);
      out.col_factor = col_factor * (split * sign);
      out.row_factor = row_factor * split;
    }
    return out;
  }

  static Kernel2DT from_separable(Taps<Scalar> col, Taps<Scalar> row, bool is_normalized) {
    Kernel2DT k;
    k.taps = col.matrix() * row.matrix().transpose();
    k.normalized = is_normalized;
    k.col_factor = std::move(col);
    k.row_factor = std::move(row);
    k.validate();
    return k;
  }
};

using Kernel2D = Kernel2DT<double>;

/// Sampled Gaussian, normalized to sum 1; side length is 2*radius+1.
template <typename Scalar = double>
Kernel2DT<Scalar> gaussian_kernel(Scalar sigma, Index radius) {
  if (!(sigma > Scalar(0))) throw ParameterError("gaussian_kernel: sigma must be positive");
  if (radius < 1) throw ParameterError("gaussian_kernel: radius must be >= 1");
  Taps<Scalar> f(2 * radius + 1);
  for (Index i = -radius; i <= radius; ++i)
    f(i + radius) = std::exp(-Scalar(i * i) / (Scalar(2) * sigma * sigma));
  f /= f.sum();
  return Kernel2DT<Scalar>::from_separable(f, f, true);
}

/// The 5-tap binomial [1,4,6,4,1]/16, the default pyramid low-pass.
template <typename Scalar = double>
Kernel2DT<Scalar> binomial_kernel5() {
  Taps<Scalar> f(5);
  f << Scalar(1) / 16, Scalar(4) / 16, Scalar(6) / 16, Scalar(4) / 16, Scalar(1) / 16;
  return Kernel2DT<Scalar>::from_separable(f, f, true);
}

/// Normalized box filter with odd side length.
template <typename Scalar = double>
Kernel2DT<Scalar> box_kernel(Index side) {
  if (side < 1 || side % 2 == 0) throw ParameterError("box_kernel: side must be odd and >= 1");
  Taps<Scalar> f = Taps<Scalar>::Constant(side, Scalar(1) / Scalar(side));
  return Kernel2DT<Scalar>::from_separable(f, f, true);
}

// ---------------------------------------------------------------------------
// PlanarImage
// ---------------------------------------------------------------------------

/// Real-valued raster stored as one dense plane per channel, nominal range
/// [0, 1]. Channel count is 1 (gray) or 3 (RGB).
template <typename Scalar>
class PlanarImageT {
 public:
  PlanarImageT() = default;

  PlanarImageT(Index height, Index width, int channels, Scalar fill = Scalar(0)) {
    if (height < 1 || width < 1) throw ParameterError("PlanarImage: dims must be >= 1");
    if (channels != 1 && channels != 3) throw ParameterError("PlanarImage: channels must be 1 or 3");
    planes_.reserve(static_cast<std::size_t>(channels));
    for (int c = 0; c < channels; ++c) planes_.push_back(Plane<Scalar>::Constant(height, width, fill));
  }

  static PlanarImageT from_planes(std::vector<Plane<Scalar>> planes) {
    if (planes.size() != 1 && planes.size() != 3)
      throw ParameterError("PlanarImage: channels must be 1 or 3");
    for (const auto& p : planes)
      if (p.rows() != planes[0].rows() || p.cols() != planes[0].cols())
        throw DimensionError("PlanarImage: planes must share dims");
    if (planes[0].rows() < 1 || planes[0].cols() < 1)
      throw ParameterError("PlanarImage: dims must be >= 1");
    PlanarImageT img;
    img.planes_ = std::move(planes);
    return img;
  }

  static PlanarImageT from_plane(Plane<Scalar> plane) {
    std::vector<Plane<Scalar>> v;
    v.push_back(std::move(plane));
    return from_planes(std::move(v));
  }

  Index height() const { return planes_.empty() ? 0 : planes_[0].rows(); }
  Index width() const { return planes_.empty() ? 0 : planes_[0].cols(); }
  int channels() const { return static_cast<int>(planes_.size()); }
  Index pixel_count() const { return height() * width(); }

  Plane<Scalar>& plane(int c) { return planes_[static_cast<std::size_t>(c)]; }
  const Plane<Scalar>& plane(int c) const { return planes_[static_cast<std::size_t>(c)]; }

  Scalar operator()(int c, Index i, Index j) const { return planes_[static_cast<std::size_t>(c)](i, j); }
  Scalar& operator()(int c, Index i, Index j) { return planes_[static_cast<std::size_t>(c)](i, j); }

  bool same_shape(const PlanarImageT& o) const {
    return height() == o.height() && width() == o.width() && channels() == o.channels();
  }

  /// Throws if any stored value is non-finite or the shape is degenerate.
  void validate() const {
    if (planes_.empty()) throw ParameterError("PlanarImage: empty");
    if (height() < 1 || width() < 1) throw ParameterError("PlanarImage: dims must be >= 1");
    if (channels() != 1 && channels() != 3) throw ParameterError("PlanarImage: channels must be 1 or 3");
    for (const auto& p : planes_)
      if (!p.isFinite().all()) throw ParameterError("PlanarImage: non-finite values");
  }

  PlanarImageT clamped(Scalar lo = Scalar(0), Scalar hi = Scalar(1)) const {
    PlanarImageT out = *this;
    for (auto& p : out.planes_) p = p.min(hi).max(lo);
    return out;
  }

 private:
  std::vector<Plane<Scalar>> planes_;
};

using PlanarImage = PlanarImageT<double>;

/// Rec.601 luma. Single-channel input is returned unchanged.
template <typename Scalar>
PlanarImageT<Scalar> to_grayscale(const PlanarImageT<Scalar>& img) {
  if (img.channels() == 1) return img;
  Plane<Scalar> y = Scalar(0.299) * img.plane(0) + Scalar(0.587) * img.plane(1) +
                    Scalar(0.114) * img.plane(2);
  return PlanarImageT<Scalar>::from_plane(std::move(y));
}

// ---------------------------------------------------------------------------
// Filtering
// ---------------------------------------------------------------------------

namespace detail {

// 1-D pass down the columns with the (already flipped) taps.
template <typename Scalar>
Plane<Scalar> convolve_cols(const Plane<Scalar>& in, const Taps<Scalar>& flipped, Boundary mode) {
  const Index n = in.rows(), r = flipped.size() / 2;
  Plane<Scalar> out(in.rows(), in.cols());
  for (Index j = 0; j < in.cols(); ++j) {
    for (Index i = 0; i < n; ++i) {
      Scalar acc = Scalar(0);
      for (Index m = -r; m <= r; ++m)
        acc += flipped(m + r) * in(boundary_index(i + m, n, mode), j);
      out(i, j) = acc;
    }
  }
  return out;
}

template <typename Scalar>
Plane<Scalar> convolve_rows(const Plane<Scalar>& in, const Taps<Scalar>& flipped, Boundary mode) {
  const Index n = in.cols(), r = flipped.size() / 2;
  Plane<Scalar> out(in.rows(), in.cols());
  for (Index j = 0; j < n; ++j) {
    for (Index m = -r; m <= r; ++m) {
      const Index src = boundary_index(j + m, n, mode);
      if (m == -r)
        out.col(j) = flipped(m + r) * in.col(src);
      else
        out.col(j) += flipped(m + r) * in.col(src);
    }
  }
  return out;
}

}  // namespace detail

/// Same-size 2-D convolution (correlation with the flipped kernel) of one
/// plane. Separable kernels run as two 1-D passes.
template <typename Scalar>
Plane<Scalar> convolve_same(const Plane<Scalar>& in, const Kernel2DT<Scalar>& k, Boundary mode) {
  k.validate();
  if (k.rows() > 2 * in.rows() || k.cols() > 2 * in.cols())
    throw SizeError("convolve_same: kernel larger than 2x image extent");
  if (k.separable()) {
    const Taps<Scalar> fc = k.col_factor.reverse();
    const Taps<Scalar> fr = k.row_factor.reverse();
    return detail::convolve_rows(detail::convolve_cols(in, fc, mode), fr, mode);
  }
  const Index r = k.rows() / 2, c = k.cols() / 2;
  Plane<Scalar> out(in.rows(), in.cols());
  for (Index j = 0; j < in.cols(); ++j) {
    for (Index i = 0; i < in.rows(); ++i) {
      Scalar acc = Scalar(0);
      for (Index m = 0; m < k.rows(); ++m) {
        const Index si = boundary_index(i - (m - r), in.rows(), mode);
        for (Index n = 0; n < k.cols(); ++n) {
          const Index sj = boundary_index(j - (n - c), in.cols(), mode);
          acc += k.taps(m, n) * in(si, sj);
        }
      }
      out(i, j) = acc;
    }
  }
  return out;
}

template <typename Scalar>
PlanarImageT<Scalar> convolve_same(const PlanarImageT<Scalar>& img, const Kernel2DT<Scalar>& k,
                                   Boundary mode) {
  std::vector<Plane<Scalar>> planes;
  planes.reserve(static_cast<std::size_t>(img.channels()));
  for (int c = 0; c < img.channels(); ++c) planes.push_back(convolve_same(img.plane(c), k, mode));
  return PlanarImageT<Scalar>::from_planes(std::move(planes));
}

// ---------------------------------------------------------------------------
// Dyadic resampling and the Laplacian pyramid
// ---------------------------------------------------------------------------

/// Low-pass then keep even rows/cols; output dims are ceil(dim / 2).
template <typename Scalar>
Plane<Scalar> downsample2(const Plane<Scalar>& in, const Kernel2DT<Scalar>& lowpass,
                          Boundary mode = Boundary::mirror) {
  if (in.rows() < 2 || in.cols() < 2) throw SizeError("downsample2: image smaller than 2x2");
  const Plane<Scalar> f = convolve_same(in, lowpass, mode);
  Plane<Scalar> out((in.rows() + 1) / 2, (in.cols() + 1) / 2);
  for (Index j = 0; j < out.cols(); ++j)
    for (Index i = 0; i < out.rows(); ++i) out(i, j) = f(2 * i, 2 * j);
  return out;
}

template <typename Scalar>
PlanarImageT<Scalar> downsample2(const PlanarImageT<Scalar>& img, const Kernel2DT<Scalar>& lowpass,
                                 Boundary mode = Boundary::mirror) {
  std::vector<Plane<Scalar>> planes;
  for (int c = 0; c < img.channels(); ++c) planes.push_back(downsample2(img.plane(c), lowpass, mode));
  return PlanarImageT<Scalar>::from_planes(std::move(planes));
}

/// Zeros interleaved up to (target_h, target_w), then low-pass with the taps
/// scaled by 4 to restore the mean. Targets must be 2*dim-1 or 2*dim.
template <typename Scalar>
Plane<Scalar> upsample2(const Plane<Scalar>& in, Index target_h, Index target_w,
                        const Kernel2DT<Scalar>& lowpass, Boundary mode = Boundary::mirror) {
  const auto valid = [](Index target, Index d) { return target == 2 * d - 1 || target == 2 * d; };
  if (!valid(target_h, in.rows()) || !valid(target_w, in.cols()))
    throw SizeError("upsample2: target dims must be 2*dim-1 or 2*dim");
  Plane<Scalar> z = Plane<Scalar>::Zero(target_h, target_w);
  for (Index j = 0; j < in.cols(); ++j)
    for (Index i = 0; i < in.rows(); ++i) z(2 * i, 2 * j) = in(i, j);
  return convolve_same(z, lowpass.scaled(Scalar(4)), mode);
}

template <typename Scalar>
PlanarImageT<Scalar> upsample2(const PlanarImageT<Scalar>& img, Index target_h, Index target_w,
                               const Kernel2DT<Scalar>& lowpass, Boundary mode = Boundary::mirror) {
  std::vector<Plane<Scalar>> planes;
  for (int c = 0; c < img.channels(); ++c)
    planes.push_back(upsample2(img.plane(c), target_h, target_w, lowpass, mode));
  return PlanarImageT<Scalar>::from_planes(std::move(planes));
}

/// Band-pass decomposition: bands 0..stages-2 hold image minus
/// upsample(downsample(image)) at each level, the last band is the low-pass
/// residual. Summing each band with the upsampled next level recovers the
/// input exactly (up to roundoff).
template <typename Scalar>
std::vector<PlanarImageT<Scalar>> laplacian_pyramid(const PlanarImageT<Scalar>& img, int stages,
                                                    const Kernel2DT<Scalar>& lowpass,
                                                    Boundary mode = Boundary::mirror) {
  if (stages < 1) throw ParameterError("laplacian_pyramid: stages must be >= 1");
  std::vector<PlanarImageT<Scalar>> bands;
  bands.reserve(static_cast<std::size_t>(stages));
  PlanarImageT<Scalar> cur = img;
  for (int s = 0; s + 1 < stages; ++s) {
    if (cur.height() < 2 || cur.width() < 2)
      throw SizeError("laplacian_pyramid: too many stages for image size");
    PlanarImageT<Scalar> down = downsample2(cur, lowpass, mode);
    PlanarImageT<Scalar> up = upsample2(down, cur.height(), cur.width(), lowpass, mode);
    std::vector<Plane<Scalar>> diff;
    for (int c = 0; c < cur.channels(); ++c) diff.push_back(cur.plane(c) - up.plane(c));
    bands.push_back(PlanarImageT<Scalar>::from_planes(std::move(diff)));
    cur = std::move(down);
  }
  bands.push_back(std::move(cur));
  return bands;
}

}  // namespace psx
