#include "psx/blackbox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "psx/rng.hpp"

namespace psx {

void ClassProbabilities::validate() const {
  if (probs.size() < 2) throw ParameterError("ClassProbabilities: need at least 2 classes");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("ClassProbabilities: value outside [0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) >= 1e-6) throw ParameterError("ClassProbabilities: probabilities must sum to 1");
}

Eigen::VectorXd cell_mean_features(const PlanarImage& img) {
  const Index h = img.height(), w = img.width();
  if (h < 4 || w < 4) throw SizeError("cell_mean_features: image must be at least 4x4");
  Eigen::VectorXd f = Eigen::VectorXd::Zero(16);
  for (int a = 0; a < 4; ++a) {
    const Index r0 = a * h / 4, r1 = (a + 1) * h / 4;
    for (int b = 0; b < 4; ++b) {
      const Index c0 = b * w / 4, c1 = (b + 1) * w / 4;
      double acc = 0.0;
      for (int ch = 0; ch < img.channels(); ++ch)
        acc += img.plane(ch).block(r0, c0, r1 - r0, c1 - c0).sum();
      f(a * 4 + b) = acc / (static_cast<double>((r1 - r0) * (c1 - c0)) * img.channels());
    }
  }
  return f;
}

namespace {

ClassProbabilities softmax(const Eigen::VectorXd& logits) {
  const double m = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - m).exp();
  e /= e.sum();
  ClassProbabilities out;
  out.probs.assign(e.data(), e.data() + e.size());
  return out;
}

// Weight draws: class-major rows of the 16-column map first, then one bias
// per class, each uniform in [-1, 1) from mt19937_64(seed).
void draw_toy_parameters(int class_count, std::uint64_t seed, Eigen::MatrixXd& weights,
                         Eigen::VectorXd& bias) {
  std::mt19937_64 gen(seed);
  weights.resize(class_count, 16);
  bias.resize(class_count);
  for (int k = 0; k < class_count; ++k)
    for (int i = 0; i < 16; ++i) weights(k, i) = rng::uniform(gen, -1.0, 1.0);
  for (int k = 0; k < class_count; ++k) bias(k) = rng::uniform(gen, -1.0, 1.0);
}

}  // namespace

ToyModel::ToyModel(int class_count, std::uint64_t seed) : seed_(seed), seeded_(true) {
  if (class_count < 2) throw ParameterError("ToyModel: class_count must be >= 2");
  draw_toy_parameters(class_count, seed, weights_, bias_);
}

ToyModel::ToyModel(Eigen::MatrixXd weights, Eigen::VectorXd bias)
    : weights_(std::move(weights)), bias_(std::move(bias)) {
  if (weights_.rows() < 2 || weights_.cols() != 16 || bias_.size() != weights_.rows())
    throw ParameterError("ToyModel: weights must be class_count x 16 with matching bias");
}

ClassProbabilities ToyModel::predict(const PlanarImage& img) const {
  const Eigen::VectorXd f = cell_mean_features(img);
  return softmax(weights_ * f + bias_);
}

std::string ToyModel::describe() const {
  if (seeded_)
    return "toy:classes=" + std::to_string(class_count()) + ",seed=" + std::to_string(seed_);
  return "toy:planted,classes=" + std::to_string(class_count());
}

ClassProbabilities toy_predict(const PlanarImage& img, int class_count, std::uint64_t seed) {
  return ToyModel(class_count, seed).predict(img);
}

std::vector<int> top_k(const ClassProbabilities& p, int k) {
  if (k < 1 || k > p.class_count()) throw ParameterError("top_k: k out of range");
  std::vector<int> idx(p.probs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return p.probs[static_cast<std::size_t>(a)] >
                                              p.probs[static_cast<std::size_t>(b)]; });
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

bool top_k_agree(const ClassProbabilities& p, const ClassProbabilities& q, int k, bool ordered) {
  if (p.class_count() != q.class_count())
    throw DimensionError("top_k_agree: class counts differ");
  std::vector<int> tp = top_k(p, k), tq = top_k(q, k);
  if (!ordered) {
    std::sort(tp.begin(), tp.end());
    std::sort(tq.begin(), tq.end());
  }
  return tp == tq;
}

}  // namespace psx
