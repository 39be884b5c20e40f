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

#ifndef FEDMARK_WATERMARK_VERIFY_H_
#define FEDMARK_WATERMARK_VERIFY_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fedmark/data/dataset.h"
#include "fedmark/nn/model.h"

namespace fedmark::wm {

// Black-box classification oracle: image in, predicted label out. Must be
// deterministic for a fixed underlying model. Failures are reported by
// throwing.
using ModelApi = std::function<int(std::span<const float> image)>;

// Wraps a model as an oracle. The parameters are moved into the closure and
// are unreachable through the returned object.
ModelApi MakeModelApi(nn::ModelParams model);

struct VerificationReport {
  double accuracy = 0.0;
  double gamma = 0.0;
  std::size_t subset_size = 0;
  bool verified = false;
  // P[Binomial(n_s, 1/k) >= ceil(gamma * n_s)]: false-positive rate of this
  // decision rule against a random guesser.
  double epsilon = 1.0;
  std::size_t queries = 0;
};

// {"accuracy":..,"gamma":..,"n_s":..,"verdict":"verified"|"unverified","epsilon":..}
std::string ReportToJson(const VerificationReport& report);

// Queries `api` once per subset sample and compares against the trigger
// labels; verified iff accuracy >= gamma. InputError on an empty subset or
// gamma outside (0, 1]. Any API failure aborts with TransportError and no
// verdict.
VerificationReport Verify(const ModelApi& api, const data::Dataset& subset, double gamma);

// Class-balanced sample of `per_class` images per label (without
// replacement). InputError if some present label has fewer samples.
data::Dataset BalancedSubset(const data::Dataset& source, std::size_t per_class,
                             std::uint64_t seed);

// Line-delimited adapter for external endpoints. A request is one line with
// the base64 of the image's float32 little-endian CHW pixels; the response
// is one line holding the decimal label.
std::string EncodeImageLine(std::span<const float> image);
std::vector<float> DecodeImageLine(std::string_view line);

// Oracle that writes requests to `requests` and reads answers from
// `responses`. EOF, a malformed answer or a stream failure is
// TransportError.
ModelApi MakeStreamApi(std::istream& responses, std::ostream& requests);

// Answers requests until EOF. A malformed request gets an "ERR <reason>"
// line, which clients treat as a transport failure. Returns the number of
// requests answered.
std::size_t ServeModelStream(const ModelApi& api, std::size_t pixels, std::istream& requests,
                             std::ostream& responses);

}  // namespace fedmark::wm

#endif  // FEDMARK_WATERMARK_VERIFY_H_
