#include "psx/surrogate.hpp"

#include <Eigen/Dense>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "psx/rng.hpp"

namespace psx {

AblationMode parse_ablation_mode(const std::string& name) {
  if (name == "zero") return AblationMode::zero;
  if (name == "mean" || name == "segment_mean") return AblationMode::segment_mean;
  throw ParameterError("unknown ablation mode: " + name);
}

std::string ablation_mode_name(AblationMode mode) {
  return mode == AblationMode::zero ? "zero" : "segment_mean";
}

void SurrogateConfig::validate() const {
  if (sample_count < 2) throw ParameterError("SurrogateConfig: sample_count must be >= 2");
  if (ridge_alpha < 0.0) throw ParameterError("SurrogateConfig: ridge_alpha must be >= 0");
  kernel.validate();
  distance.validate();
}

int Explanation::index_of(int class_id) const {
  for (std::size_t i = 0; i < class_ids.size(); ++i)
    if (class_ids[i] == class_id) return static_cast<int>(i);
  return -1;
}

std::vector<InterpretableVector> sample_vectors(int segment_count, const SurrogateConfig& cfg) {
  cfg.validate();
  if (segment_count < 1) throw ParameterError("sample_vectors: segment_count must be >= 1");
  std::mt19937_64 gen(cfg.rng_seed);
  std::vector<InterpretableVector> out;
  out.reserve(static_cast<std::size_t>(cfg.sample_count));
  out.push_back(InterpretableVector::ones(static_cast<std::size_t>(segment_count)));
  for (int s = 1; s < cfg.sample_count; ++s) {
    InterpretableVector v;
    v.bits.resize(static_cast<std::size_t>(segment_count));
    for (auto& b : v.bits) b = rng::coin(gen) ? 1 : 0;
    out.push_back(std::move(v));
  }
  return out;
}

PlanarImage ablate(const PlanarImage& img, const SegmentMap& seg, const InterpretableVector& v,
                   AblationMode mode) {
  if (img.height() != seg.height() || img.width() != seg.width())
    throw DimensionError("ablate: image and segment map dims differ");
  if (v.size() != static_cast<std::size_t>(seg.segment_count))
    throw DimensionError("ablate: vector length must equal segment_count");
  if (v.all_ones()) return img;

  Eigen::MatrixXd means;
  if (mode == AblationMode::segment_mean) means = segment_means(img, seg);

  PlanarImage out = img;
  for (Index j = 0; j < img.width(); ++j)
    for (Index i = 0; i < img.height(); ++i) {
      const int id = seg.labels(i, j);
      if (v.bits[static_cast<std::size_t>(id)]) continue;
      for (int c = 0; c < img.channels(); ++c)
        out(c, i, j) = mode == AblationMode::zero ? 0.0 : means(id, c);
    }
  return out;
}

namespace {

void check_class_ids(const std::vector<int>& class_ids, int class_count) {
  if (class_ids.empty()) throw ParameterError("class_ids must be non-empty");
  std::set<int> seen;
  for (int id : class_ids) {
    if (id < 0 || id >= class_count) throw ParameterError("class id out of range");
    if (!seen.insert(id).second) throw ParameterError("class ids must be distinct");
  }
}

}  // namespace

std::vector<std::vector<NeighbourhoodSample>> build_neighbourhood_multi(
    const PlanarImage& img, const SegmentMap& seg, const ModelClient& model,
    const std::vector<DistanceKind>& kinds, const SurrogateConfig& cfg) {
  cfg.validate();
  if (kinds.empty()) throw ParameterError("build_neighbourhood_multi: no distance kinds");
  if (cfg.sample_count < seg.segment_count + 1)
    throw ParameterError("sample_count must be at least segment_count + 1");

  const std::vector<InterpretableVector> vectors = sample_vectors(seg.segment_count, cfg);
  const InterpretableVector ones = InterpretableVector::ones(vectors[0].size());

  // Perceptual kinds compare against the query image in grayscale; the
  // reference NLPD transform is computed once per kind.
  bool needs_gray = false;
  for (const auto& k : kinds) needs_gray |= k.tag != DistanceKind::Tag::cosine_binary;
  PlanarImage gray_ref;
  if (needs_gray) gray_ref = to_grayscale(img);
  std::vector<std::vector<PlanarImage>> nlpd_ref(kinds.size());
  for (std::size_t k = 0; k < kinds.size(); ++k)
    if (kinds[k].tag == DistanceKind::Tag::nlpd) nlpd_ref[k] = nlpd_transform(gray_ref, kinds[k]);

  std::vector<std::vector<NeighbourhoodSample>> out(kinds.size());
  for (auto& seq : out) seq.reserve(vectors.size());

  for (std::size_t s = 0; s < vectors.size(); ++s) {
    const PlanarImage z = ablate(img, seg, vectors[s], cfg.ablation);

    std::vector<double> targets;
    try {
      const ClassProbabilities p = model.predict(z);
      p.validate();
      targets = p.probs;
    } catch (const std::exception& e) {
      throw ModelError("model query failed at sample " + std::to_string(s) + ": " + e.what());
    }

    PlanarImage gray_z;
    if (needs_gray) gray_z = to_grayscale(z);

    for (std::size_t k = 0; k < kinds.size(); ++k) {
      double d = 0.0;
      switch (kinds[k].tag) {
        case DistanceKind::Tag::cosine_binary:
          d = cosine_distance_binary(ones, vectors[s]);
          break;
        case DistanceKind::Tag::msssim:
          d = msssim_distance(gray_ref, gray_z, kinds[k]);
          break;
        case DistanceKind::Tag::nlpd:
          d = nlpd_distance(nlpd_ref[k], gray_z, kinds[k]);
          break;
      }
      out[k].push_back({vectors[s], kernel_weight(std::max(d, 0.0), cfg.kernel), targets});
    }
  }
  return out;
}

std::vector<NeighbourhoodSample> build_neighbourhood(const PlanarImage& img, const SegmentMap& seg,
                                                     const ModelClient& model,
                                                     const std::vector<int>& class_ids,
                                                     const SurrogateConfig& cfg) {
  check_class_ids(class_ids, model.class_count());
  return std::move(build_neighbourhood_multi(img, seg, model, {cfg.distance}, cfg)[0]);
}

std::pair<Eigen::VectorXd, double> weighted_ridge_fit(std::span<const NeighbourhoodSample> samples,
                                                      int class_index, double alpha) {
  if (samples.empty()) throw ParameterError("weighted_ridge_fit: no samples");
  if (alpha < 0.0) throw ParameterError("weighted_ridge_fit: alpha must be >= 0");
  const auto d = static_cast<Index>(samples[0].vector.size());
  const auto n = static_cast<Index>(samples.size());

  Eigen::MatrixXd x(n, d + 1);  // last column carries the intercept
  Eigen::VectorXd y(n), w(n);
  for (Index i = 0; i < n; ++i) {
    const NeighbourhoodSample& s = samples[static_cast<std::size_t>(i)];
    if (static_cast<Index>(s.vector.size()) != d)
      throw DimensionError("weighted_ridge_fit: inconsistent vector lengths");
    if (class_index < 0 || class_index >= static_cast<int>(s.targets.size()))
      throw ParameterError("weighted_ridge_fit: class index out of range");
    for (Index f = 0; f < d; ++f) x(i, f) = s.vector.bits[static_cast<std::size_t>(f)];
    x(i, d) = 1.0;
    y(i) = s.targets[static_cast<std::size_t>(class_index)];
    w(i) = s.weight;
  }

  const Eigen::MatrixXd xtw = x.transpose() * w.asDiagonal();
  Eigen::MatrixXd a = xtw * x;
  a.topLeftCorner(d, d) += alpha * Eigen::MatrixXd::Identity(d, d);  // intercept unpenalized
  const Eigen::VectorXd b = xtw * y;

  Eigen::VectorXd theta;
  if (alpha == 0.0) {
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible())
      throw SingularityError("weighted_ridge_fit: singular normal equations with alpha = 0");
    theta = lu.solve(b);
  } else {
    theta = Eigen::LDLT<Eigen::MatrixXd>(a).solve(b);
  }
  return {theta.head(d), theta(d)};
}

Explanation fit_explanation(std::span<const NeighbourhoodSample> samples,
                            const std::vector<int>& class_ids, double alpha, SegmentMap seg) {
  Explanation expl;
  expl.class_ids = class_ids;
  expl.segment_map = std::move(seg);
  for (int id : class_ids) {
    auto [coef, intercept] = weighted_ridge_fit(samples, id, alpha);
    expl.coefficients.push_back(std::move(coef));
    expl.intercepts.push_back(intercept);
  }
  return expl;
}

Explanation explain(const PlanarImage& img, const SegmentMap& seg, const ModelClient& model,
                    const std::vector<int>& class_ids, const SurrogateConfig& cfg) {
  check_class_ids(class_ids, model.class_count());
  const std::vector<NeighbourhoodSample> samples =
      build_neighbourhood(img, seg, model, class_ids, cfg);
  return fit_explanation(samples, class_ids, cfg.ridge_alpha, seg);
}

nlohmann::json explanation_to_json(const Explanation& expl, const SurrogateConfig& cfg) {
  nlohmann::json doc;
  doc["class_ids"] = expl.class_ids;
  doc["intercepts"] = expl.intercepts;
  auto& coefs = doc["coefficients"] = nlohmann::json::array();
  for (const auto& c : expl.coefficients)
    coefs.push_back(std::vector<double>(c.data(), c.data() + c.size()));

  auto& seg = doc["segment_map"];
  seg["height"] = expl.segment_map.height();
  seg["width"] = expl.segment_map.width();
  seg["segment_count"] = expl.segment_map.segment_count;
  auto& labels = seg["labels"] = nlohmann::json::array();  // row-major
  for (Index i = 0; i < expl.segment_map.height(); ++i)
    for (Index j = 0; j < expl.segment_map.width(); ++j)
      labels.push_back(expl.segment_map.labels(i, j));

  auto& conf = doc["config"];
  conf["seed"] = cfg.rng_seed;
  conf["distance"] = cfg.distance.name();
  conf["kernel_width"] = cfg.kernel.width;
  conf["ridge_alpha"] = cfg.ridge_alpha;
  conf["sample_count"] = cfg.sample_count;
  conf["ablation"] = ablation_mode_name(cfg.ablation);
  return doc;
}

}  // namespace psx
