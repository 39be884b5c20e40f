/*
 * Copyright 2026 The FedMark Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fedmark/watermark/verify.h"

#include <charconv>
#include <cmath>
#include <cstring>
#include <istream>
#include <mutex>
#include <ostream>

#include <nlohmann/json.hpp>
#include <sodium.h>

#include "fedmark/common/error.h"
#include "fedmark/common/random.h"
#include "fedmark/watermark/threshold.h"

namespace fedmark::wm {
namespace {

void EnsureSodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw Error("libsodium initialisation failed");
  });
}

}  // namespace

ModelApi MakeModelApi(nn::ModelParams model) {
  nn::ValidateModel(model);
  return [model = std::move(model)](std::span<const float> image) {
    return nn::PredictOne(model, image);
  };
}

std::string ReportToJson(const VerificationReport& report) {
  nlohmann::json j;
  j["accuracy"] = report.accuracy;
  j["gamma"] = report.gamma;
  j["n_s"] = report.subset_size;
  j["verdict"] = report.verified ? "verified" : "unverified";
  j["epsilon"] = report.epsilon;
  return j.dump();
}

VerificationReport Verify(const ModelApi& api, const data::Dataset& subset, double gamma) {
  if (subset.empty()) throw InputError("verification subset is empty");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InputError("gamma must be in (0, 1]");
  VerificationReport report;
  report.gamma = gamma;
  report.subset_size = subset.size();
  std::size_t correct = 0;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    int answer;
    try {
      answer = api(subset.image(i));
    } catch (const TransportError&) {
      throw;
    } catch (const std::exception& e) {
      throw TransportError(std::string("model API failed: ") + e.what());
    }
    ++report.queries;
    if (answer < 0 || answer >= subset.num_classes()) {
      throw TransportError("model API returned label " + std::to_string(answer) +
                           " outside the class range");
    }
    correct += answer == subset.label(i) ? 1 : 0;
  }
  report.accuracy = static_cast<double>(correct) / static_cast<double>(subset.size());
  report.verified = report.accuracy >= gamma;
  const int n = static_cast<int>(subset.size());
  const int needed = static_cast<int>(std::ceil(gamma * n - 1e-9));
  report.epsilon = subset.num_classes() >= 2 ? BinomialUpperTail(n, needed, subset.num_classes())
                                             : 1.0;
  return report;
}

data::Dataset BalancedSubset(const data::Dataset& source, std::size_t per_class,
                             std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> by_class(source.num_classes());
  for (std::size_t i = 0; i < source.size(); ++i) by_class[source.label(i)].push_back(i);
  Rng rng(DeriveSeed(seed, {0x737562736574ULL}));
  std::vector<std::size_t> chosen;
  for (auto& members : by_class) {
    if (members.empty()) continue;
    if (members.size() < per_class) {
      throw InputError("class has fewer samples than the balanced subset needs");
    }
    Shuffle(std::span<std::size_t>(members), rng);
    chosen.insert(chosen.end(), members.begin(), members.begin() + per_class);
  }
  return source.Subset(chosen);
}

std::string EncodeImageLine(std::span<const float> image) {
  EnsureSodium();
  std::vector<unsigned char> raw(image.size() * 4);
  for (std::size_t i = 0; i < image.size(); ++i) {
    std::uint32_t bits;
    std::memcpy(&bits, &image[i], 4);
    for (int b = 0; b < 4; ++b) raw[i * 4 + b] = static_cast<unsigned char>(bits >> (8 * b));
  }
  const int variant = sodium_base64_VARIANT_ORIGINAL;
  std::string out(sodium_base64_ENCODED_LEN(raw.size(), variant), '\0');
  sodium_bin2base64(out.data(), out.size(), raw.data(), raw.size(), variant);
  out.resize(std::strlen(out.c_str()));
  return out;
}

std::vector<float> DecodeImageLine(std::string_view line) {
  EnsureSodium();
  std::vector<unsigned char> raw(line.size() / 4 * 3 + 3);
  std::size_t len = 0;
  if (sodium_base642bin(raw.data(), raw.size(), line.data(), line.size(), nullptr, &len, nullptr,
                        sodium_base64_VARIANT_ORIGINAL) != 0 ||
      len % 4 != 0) {
    throw InputError("malformed base64 image line");
  }
  std::vector<float> image(len / 4);
  for (std::size_t i = 0; i < image.size(); ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(raw[i * 4 + b]) << (8 * b);
    std::memcpy(&image[i], &bits, 4);
  }
  return image;
}

ModelApi MakeStreamApi(std::istream& responses, std::ostream& requests) {
  return [&responses, &requests](std::span<const float> image) {
    requests << EncodeImageLine(image) << '\n';
    requests.flush();
    if (!requests) throw TransportError("model endpoint request stream failed");
    std::string line;
    if (!std::getline(responses, line)) throw TransportError("model endpoint closed the stream");
    int label = 0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), label);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      throw TransportError("model endpoint answered '" + line + "'");
    }
    return label;
  };
}

std::size_t ServeModelStream(const ModelApi& api, std::size_t pixels, std::istream& requests,
                             std::ostream& responses) {
  std::size_t answered = 0;
  std::string line;
  while (std::getline(requests, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    try {
      const auto image = DecodeImageLine(line);
      if (image.size() != pixels) throw InputError("image has the wrong pixel count");
      responses << api(image) << '\n';
      ++answered;
    } catch (const std::exception& e) {
      responses << "ERR " << e.what() << '\n';
    }
    responses.flush();
  }
  return answered;
}

}  // namespace fedmark::wm
