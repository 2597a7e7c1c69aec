// External model client: PNG-encodes the query image, POSTs it as base64
// JSON, and validates the returned probability vector.

#include <httplib.h>

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <semaphore>

#include "psx/blackbox.hpp"
#include "psx/image_io.hpp"

namespace psx {

namespace {

const char kBase64Chars[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_encode(const std::vector<std::uint8_t>& data) {
  std::string out;
  out.reserve((data.size() + 2) / 3 * 4);
  std::size_t i = 0;
  while (i + 3 <= data.size()) {
    const std::uint32_t v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
    out.push_back(kBase64Chars[(v >> 18) & 63]);
    out.push_back(kBase64Chars[(v >> 12) & 63]);
    out.push_back(kBase64Chars[(v >> 6) & 63]);
    out.push_back(kBase64Chars[v & 63]);
    i += 3;
  }
  if (i + 1 == data.size()) {
    const std::uint32_t v = data[i] << 16;
    out.push_back(kBase64Chars[(v >> 18) & 63]);
    out.push_back(kBase64Chars[(v >> 12) & 63]);
    out.append("==");
  } else if (i + 2 == data.size()) {
    const std::uint32_t v = (data[i] << 16) | (data[i + 1] << 8);
    out.push_back(kBase64Chars[(v >> 18) & 63]);
    out.push_back(kBase64Chars[(v >> 12) & 63]);
    out.push_back(kBase64Chars[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

}  // namespace

struct HttpModel::Limiter {
  std::counting_semaphore<> slots;
  explicit Limiter(int n) : slots(n) {}
};

HttpModel::HttpModel(std::string endpoint, int class_count, double timeout_seconds,
                     int max_inflight)
    : endpoint_(std::move(endpoint)),
      class_count_(class_count),
      timeout_seconds_(timeout_seconds),
      limiter_(std::make_unique<Limiter>(max_inflight)) {
  if (class_count_ < 2) throw ParameterError("HttpModel: class_count must be >= 2");
  if (max_inflight < 1) throw ParameterError("HttpModel: max_inflight must be >= 1");
  if (endpoint_.empty()) throw ParameterError("HttpModel: empty endpoint");
}

HttpModel::~HttpModel() = default;

ClassProbabilities HttpModel::predict(const PlanarImage& img) const {
  nlohmann::json body;
  body["image_png_b64"] = base64_encode(encode_png(img));
  const std::string payload = body.dump();

  struct Slot {
    Limiter& l;
    explicit Slot(Limiter& lim) : l(lim) { l.slots.acquire(); }
    ~Slot() { l.slots.release(); }
  } slot(*limiter_);

  httplib::Result res;
  {
    httplib::Client cli(endpoint_);
    const auto secs = static_cast<time_t>(timeout_seconds_);
    const auto usecs = static_cast<time_t>((timeout_seconds_ - static_cast<double>(secs)) * 1e6);
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);
    res = cli.Post("/predict", payload, "application/json");
  }

  if (!res) throw TransportError("model server unreachable: " + endpoint_ + " (" +
                                 httplib::to_string(res.error()) + ")");
  if (res->status != 200)
    throw ProtocolError("model server returned HTTP " + std::to_string(res->status));

  nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
  if (reply.is_discarded() || !reply.contains("probs") || !reply["probs"].is_array())
    throw ProtocolError("model server response missing \"probs\" array");

  ClassProbabilities out;
  for (const auto& v : reply["probs"]) {
    if (!v.is_number()) throw ProtocolError("non-numeric probability in model response");
    out.probs.push_back(v.get<double>());
  }
  if (out.class_count() != class_count_)
    throw ProtocolError("model server returned " + std::to_string(out.class_count()) +
                        " probabilities, expected " + std::to_string(class_count_));
  try {
    out.validate();
  } catch (const ParameterError& e) {
    throw ProtocolError(std::string("invalid probability vector from model server: ") + e.what());
  }
  return out;
}

std::unique_ptr<ModelClient> make_model_client(const std::string& spec, int class_count,
                                               std::uint64_t toy_seed) {
  if (spec == "toy" || spec.empty()) return std::make_unique<ToyModel>(class_count, toy_seed);
  if (spec == "external") {
    const char* url = std::getenv(kModelUrlEnv);
    if (!url || !*url)
      throw ParameterError(std::string("model \"external\" requires ") + kModelUrlEnv);
    return std::make_unique<HttpModel>(url, class_count);
  }
  if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0)
    return std::make_unique<HttpModel>(spec, class_count);
  throw ParameterError("unknown model spec: " + spec);
}

}  // namespace psx
