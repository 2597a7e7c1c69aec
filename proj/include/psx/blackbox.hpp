#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "psx/image.hpp"

namespace psx {

/// Normalized class probabilities from the black-box.
struct ClassProbabilities {
  std::vector<double> probs;

  int class_count() const { return static_cast<int>(probs.size()); }
  void validate() const;
};

/// The black-box model f. Implementations must be safe to call concurrently.
class ModelClient {
 public:
  virtual ~ModelClient() = default;
  virtual ClassProbabilities predict(const PlanarImage& img) const = 0;
  virtual int class_count() const = 0;
  virtual std::string describe() const = 0;
};

/// Mean intensity of each cell in a fixed 4x4 grid (16 values, row-major
/// cells, averaged over channels). Needs at least 4x4 pixels.
Eigen::VectorXd cell_mean_features(const PlanarImage& img);

/// Deterministic stand-in classifier: softmax of a seeded random linear map
/// over the 4x4 cell-mean features.
class ToyModel final : public ModelClient {
 public:
  ToyModel(int class_count, std::uint64_t seed);

  /// Explicit linear map, for planting known structure in tests: weights is
  /// class_count x 16, bias has one entry per class.
  ToyModel(Eigen::MatrixXd weights, Eigen::VectorXd bias);

  ClassProbabilities predict(const PlanarImage& img) const override;
  int class_count() const override { return static_cast<int>(weights_.rows()); }
  std::string describe() const override;

  const Eigen::MatrixXd& weights() const { return weights_; }
  const Eigen::VectorXd& bias() const { return bias_; }

 private:
  Eigen::MatrixXd weights_;  // class_count x 16
  Eigen::VectorXd bias_;
  std::uint64_t seed_ = 0;
  bool seeded_ = false;
};

/// One-shot toy prediction without constructing a client.
ClassProbabilities toy_predict(const PlanarImage& img, int class_count, std::uint64_t seed);

/// HTTP client for an external model server speaking
///   POST /predict {"image_png_b64": "..."} -> {"probs": [p0, p1, ...]}.
/// In-flight requests are bounded and each request carries a timeout.
class HttpModel final : public ModelClient {
 public:
  explicit HttpModel(std::string endpoint, int class_count, double timeout_seconds = 30.0,
                     int max_inflight = 8);
  ~HttpModel() override;

  ClassProbabilities predict(const PlanarImage& img) const override;
  int class_count() const override { return class_count_; }
  std::string describe() const override { return "external:" + endpoint_; }

 private:
  std::string endpoint_;
  int class_count_;
  double timeout_seconds_;
  struct Limiter;
  std::unique_ptr<Limiter> limiter_;
};

/// Name of the environment variable holding the default external endpoint.
inline constexpr const char* kModelUrlEnv = "PSX_MODEL_URL";

/// "toy" -> ToyModel; an http(s) URL -> HttpModel; "external" -> HttpModel at
/// $PSX_MODEL_URL.
std::unique_ptr<ModelClient> make_model_client(const std::string& spec, int class_count,
                                               std::uint64_t toy_seed);

/// Indices of the k largest probabilities, descending; ties break toward the
/// lower index.
std::vector<int> top_k(const ClassProbabilities& p, int k);

/// True iff the two top-k class sets match (order-insensitive unless ordered
/// is set).
bool top_k_agree(const ClassProbabilities& p, const ClassProbabilities& q, int k,
                 bool ordered = false);

}  // namespace psx
