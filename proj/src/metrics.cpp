#include "psx/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace psx {

namespace {

// Canonical 5-scale MS-SSIM weights.
const std::vector<double> kMsssimWeights = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

constexpr double kC1 = 0.01 * 0.01;  // stabilizers on a [0, 1] dynamic range
constexpr double kC2 = 0.03 * 0.03;
constexpr Index kWindowRadius = 5;
constexpr double kWindowSigma = 1.5;

void require_gray_pair(const PlanarImage& ref, const PlanarImage& test, const char* who) {
  if (ref.channels() != 1 || test.channels() != 1)
    throw DimensionError(std::string(who) + ": inputs must be single-channel");
  if (ref.height() != test.height() || ref.width() != test.width())
    throw DimensionError(std::string(who) + ": dimension mismatch");
}

}  // namespace

void DistanceKind::validate() const {
  if (!msssim_weights.empty()) {
    double sum = 0.0;
    for (double w : msssim_weights) {
      if (!(w > 0.0)) throw ParameterError("DistanceKind: MS-SSIM weights must be positive");
      sum += w;
    }
    if (std::abs(sum - 1.0) >= 1e-9)
      throw ParameterError("DistanceKind: MS-SSIM weights must sum to 1");
  }
  if (nlpd_stages < 0) throw ParameterError("DistanceKind: stages must be >= 1 (or 0 for auto)");
  if (!(nlpd_constant > 0.0)) throw ParameterError("DistanceKind: normalization constant must be > 0");
}

std::string DistanceKind::name() const {
  switch (tag) {
    case Tag::cosine_binary: return "cosine";
    case Tag::msssim: return "msssim";
    case Tag::nlpd: return "nlpd";
  }
  return "?";
}

DistanceKind parse_distance_kind(const std::string& name) {
  if (name == "cosine" || name == "cosine_binary") return DistanceKind::cosine();
  if (name == "msssim" || name == "ms-ssim") return DistanceKind::msssim();
  if (name == "nlpd") return DistanceKind::nlpd();
  throw ParameterError("unknown distance kind: " + name);
}

void KernelConfig::validate() const {
  if (!(width > 0.0)) throw ParameterError("KernelConfig: width must be > 0");
}

double cosine_distance_binary(const InterpretableVector& a, const InterpretableVector& b) {
  if (a.size() != b.size()) throw DimensionError("cosine_distance_binary: length mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a.bits[i], y = b.bits[i];
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0.0 || nb == 0.0) return 1.0;  // all-ablated sample shares nothing
  return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

int msssim_feasible_scales(Index height, Index width, int max_scales) {
  const Index window = 2 * kWindowRadius + 1;
  Index h = height, w = width;
  int m = 0;
  while (m < max_scales && h >= window && w >= window) {
    ++m;
    h = (h + 1) / 2;
    w = (w + 1) / 2;
  }
  return m;
}

double msssim(const PlanarImage& ref, const PlanarImage& test, const DistanceKind& kind) {
  kind.validate();
  require_gray_pair(ref, test, "msssim");

  std::vector<double> weights;
  if (kind.msssim_weights.empty()) {
    const int m = msssim_feasible_scales(ref.height(), ref.width());
    if (m < 1) throw SizeError("msssim: image too small for the 11x11 window");
    weights.assign(kMsssimWeights.begin(), kMsssimWeights.begin() + m);
    double sum = 0.0;
    for (double w : weights) sum += w;
    for (double& w : weights) w /= sum;
  } else {
    weights = kind.msssim_weights;
    const int feasible = msssim_feasible_scales(ref.height(), ref.width(),
                                                static_cast<int>(weights.size()));
    if (feasible < static_cast<int>(weights.size()))
      throw SizeError("msssim: image too small for the configured scale count");
  }

  const Kernel2D window = gaussian_kernel(kWindowSigma, kWindowRadius);
  const Kernel2D pyr = binomial_kernel5();
  const int scales = static_cast<int>(weights.size());

  Plane<double> x = ref.plane(0);
  Plane<double> y = test.plane(0);
  double score = 1.0;
  for (int s = 0; s < scales; ++s) {
    const Plane<double> mu_x = convolve_same(x, window, Boundary::mirror);
    const Plane<double> mu_y = convolve_same(y, window, Boundary::mirror);
    const Plane<double> sig_xx =
        convolve_same<double>(x * x, window, Boundary::mirror) - mu_x * mu_x;
    const Plane<double> sig_yy =
        convolve_same<double>(y * y, window, Boundary::mirror) - mu_y * mu_y;
    const Plane<double> sig_xy =
        convolve_same<double>(x * y, window, Boundary::mirror) - mu_x * mu_y;

    const double cs = ((2.0 * sig_xy + kC2) / (sig_xx + sig_yy + kC2)).mean();
    score *= std::pow(std::max(cs, 0.0), weights[static_cast<std::size_t>(s)]);
    if (s == scales - 1) {
      const double lum =
          ((2.0 * mu_x * mu_y + kC1) / (mu_x * mu_x + mu_y * mu_y + kC1)).mean();
      score *= std::pow(std::max(lum, 0.0), weights[static_cast<std::size_t>(s)]);
    } else {
      x = downsample2(x, pyr);
      y = downsample2(y, pyr);
    }
  }
  return score;
}

double msssim_distance(const PlanarImage& ref, const PlanarImage& test, const DistanceKind& kind) {
  return 1.0 - msssim(ref, test, kind);
}

int nlpd_auto_stages(Index height, Index width) {
  const Index d = std::min(height, width);
  int log2d = 0;
  while ((Index(1) << (log2d + 1)) <= d) ++log2d;
  return std::clamp(log2d - 2, 1, 6);
}

std::vector<PlanarImage> nlpd_transform(const PlanarImage& img, const DistanceKind& kind) {
  kind.validate();
  if (img.channels() != 1) throw DimensionError("nlpd_transform: input must be single-channel");
  const int stages = kind.nlpd_stages > 0 ? kind.nlpd_stages
                                          : nlpd_auto_stages(img.height(), img.width());
  const Kernel2D pyr = binomial_kernel5();
  const Kernel2D pool = box_kernel(5);
  std::vector<PlanarImage> bands = laplacian_pyramid(img, stages, pyr);
  for (PlanarImage& band : bands) {
    // box conv on the coarsest band needs dims >= 3
    if (band.height() < 3 || band.width() < 3)
      throw SizeError("nlpd_transform: too many stages for image size");
    const Plane<double> pooled =
        convolve_same<double>(band.plane(0).abs(), pool, Boundary::mirror);
    band.plane(0) /= (kind.nlpd_constant + pooled);
  }
  return bands;
}

double nlpd_distance(const std::vector<PlanarImage>& ref_transform, const PlanarImage& test,
                     const DistanceKind& kind) {
  const std::vector<PlanarImage> tt = nlpd_transform(test, kind);
  if (tt.size() != ref_transform.size() || tt.empty())
    throw DimensionError("nlpd_distance: transforms have different stage counts");
  double acc = 0.0;
  for (std::size_t s = 0; s < tt.size(); ++s) {
    if (!ref_transform[s].same_shape(tt[s]))
      throw DimensionError("nlpd_distance: dimension mismatch");
    const Plane<double> diff = ref_transform[s].plane(0) - tt[s].plane(0);
    acc += std::sqrt((diff * diff).mean());
  }
  return acc / static_cast<double>(tt.size());
}

double nlpd_distance(const PlanarImage& ref, const PlanarImage& test, const DistanceKind& kind) {
  require_gray_pair(ref, test, "nlpd_distance");
  return nlpd_distance(nlpd_transform(ref, kind), test, kind);
}

double kernel_weight(double d, const KernelConfig& cfg) {
  cfg.validate();
  if (d < 0.0) throw ParameterError("kernel_weight: distance must be >= 0");
  return std::exp(-(d * d) / (cfg.width * cfg.width));
}

}  // namespace psx
