#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "psx/blackbox.hpp"
#include "psx/image.hpp"
#include "psx/interpretable.hpp"
#include "psx/metrics.hpp"
#include "psx/segmentation.hpp"

namespace psx {

/// One sampled point of the surrogate's training neighbourhood.
struct NeighbourhoodSample {
  InterpretableVector vector;
  double weight = 0.0;          // exponential kernel value, in (0, 1]
  std::vector<double> targets;  // black-box probability per class
};

enum class AblationMode { zero, segment_mean };

AblationMode parse_ablation_mode(const std::string& name);
std::string ablation_mode_name(AblationMode mode);

struct SurrogateConfig {
  int sample_count = 1000;
  AblationMode ablation = AblationMode::zero;
  double ridge_alpha = 1.0;
  KernelConfig kernel{};
  DistanceKind distance = DistanceKind::cosine();
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Per-class linear surrogate over superpixels.
struct Explanation {
  std::vector<int> class_ids;
  std::vector<Eigen::VectorXd> coefficients;  // one vector per class id
  std::vector<double> intercepts;
  SegmentMap segment_map;

  int segment_count() const { return segment_map.segment_count; }
  /// Position of class_id within class_ids, or -1.
  int index_of(int class_id) const;
};

/// sample_count bit vectors, i.i.d. uniform over {0,1}^segment_count from the
/// seeded generator, except that the first vector is always all-ones (the
/// query point's own representation).
std::vector<InterpretableVector> sample_vectors(int segment_count, const SurrogateConfig& cfg);

/// Replaces ablated superpixels by 0 or by their mean color.
PlanarImage ablate(const PlanarImage& img, const SegmentMap& seg, const InterpretableVector& v,
                   AblationMode mode);

/// Samples vectors, renders the ablated images, queries the model, and
/// weights every sample by kernel_weight(D(x, z)) for cfg.distance.
std::vector<NeighbourhoodSample> build_neighbourhood(const PlanarImage& img, const SegmentMap& seg,
                                                     const ModelClient& model,
                                                     const std::vector<int>& class_ids,
                                                     const SurrogateConfig& cfg);

/// Same sampled vectors and model queries, weighted once per distance kind.
/// Returns one sample sequence per entry of kinds; this is the cheap way to
/// compare kernels on a fixed neighbourhood.
std::vector<std::vector<NeighbourhoodSample>> build_neighbourhood_multi(
    const PlanarImage& img, const SegmentMap& seg, const ModelClient& model,
    const std::vector<DistanceKind>& kinds, const SurrogateConfig& cfg);

/// Closed-form minimizer of
///   sum_i w_i (y_i - beta . z_i - b0)^2 + alpha * |beta|^2
/// with the intercept unpenalized; y_i is targets[class_index] of sample i.
std::pair<Eigen::VectorXd, double> weighted_ridge_fit(std::span<const NeighbourhoodSample> samples,
                                                      int class_index, double alpha);

/// One ridge fit per class over an already-built neighbourhood.
Explanation fit_explanation(std::span<const NeighbourhoodSample> samples,
                            const std::vector<int>& class_ids, double alpha, SegmentMap seg);

/// The full pipeline: neighbourhood construction plus per-class fits.
Explanation explain(const PlanarImage& img, const SegmentMap& seg, const ModelClient& model,
                    const std::vector<int>& class_ids, const SurrogateConfig& cfg);

/// JSON document for an explanation: class ids, coefficients, intercepts,
/// inline segment labels, and a config echo.
nlohmann::json explanation_to_json(const Explanation& expl, const SurrogateConfig& cfg);

}  // namespace psx
