#pragma once

#include <string>
#include <vector>

#include "psx/image.hpp"
#include "psx/interpretable.hpp"

namespace psx {

/// Neighbourhood distance selector plus its metric-specific settings.
///
/// For MS-SSIM, an empty scale_weights means "canonical 5-scale weights,
/// truncated to what the image size allows and renormalized". For NLPD,
/// stages == 0 means "pick from the image size" (4 at 64px, up to 6 on
/// larger images).
struct DistanceKind {
  enum class Tag { cosine_binary, msssim, nlpd };

  Tag tag = Tag::cosine_binary;
  std::vector<double> msssim_weights;  // empty = auto
  int nlpd_stages = 0;                 // 0 = auto
  double nlpd_constant = 0.17;

  static DistanceKind cosine() { return {Tag::cosine_binary, {}, 0, 0.17}; }
  static DistanceKind msssim() { return {Tag::msssim, {}, 0, 0.17}; }
  static DistanceKind nlpd() { return {Tag::nlpd, {}, 0, 0.17}; }

  void validate() const;
  std::string name() const;
};

DistanceKind parse_distance_kind(const std::string& name);

/// Width sigma of the exponential kernel pi_x.
struct KernelConfig {
  double width = 0.25;

  void validate() const;
};

/// 1 - a.b / (|a||b|); defined as 1 when either vector is all-zero.
double cosine_distance_binary(const InterpretableVector& a, const InterpretableVector& b);

/// Multi-scale structural similarity in (0, 1]. Inputs must be single-channel
/// and share dims; contrast-structure terms are combined across scales with
/// the configured weights and the luminance term enters at the coarsest scale.
double msssim(const PlanarImage& ref, const PlanarImage& test, const DistanceKind& kind);

/// 1 - msssim(ref, test).
double msssim_distance(const PlanarImage& ref, const PlanarImage& test, const DistanceKind& kind);

/// Largest workable MS-SSIM scale count for the given dims (at most max_scales).
int msssim_feasible_scales(Index height, Index width, int max_scales = 5);

/// Laplacian pyramid bands, each divided pointwise by
/// (c + 5x5 box mean of |band|).
std::vector<PlanarImage> nlpd_transform(const PlanarImage& img, const DistanceKind& kind);

/// Mean over stages of the RMS difference between the two transforms.
double nlpd_distance(const PlanarImage& ref, const PlanarImage& test, const DistanceKind& kind);

/// Variant taking a precomputed reference transform; build_neighbourhood uses
/// this to avoid transforming the query image once per sample.
double nlpd_distance(const std::vector<PlanarImage>& ref_transform, const PlanarImage& test,
                     const DistanceKind& kind);

/// Automatic NLPD stage count for the given dims.
int nlpd_auto_stages(Index height, Index width);

/// Exponential kernel weight exp(-d^2 / sigma^2), in (0, 1].
double kernel_weight(double d, const KernelConfig& cfg);

}  // namespace psx
