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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fedmark/attacks/attacks.h"
#include "fedmark/common/error.h"
#include "fedmark/nn/train.h"

namespace fedmark::attacks {
namespace {

// Zeroes the `count` smallest-magnitude entries of values[begin, end).
void ZeroSmallest(std::vector<float>& values, std::size_t begin, std::size_t end,
                  std::size_t count) {
  if (count == 0) return;
  std::vector<std::size_t> order(end - begin);
  std::iota(order.begin(), order.end(), begin);
  auto smaller = [&values](std::size_t a, std::size_t b) {
    const float ma = std::fabs(values[a]);
    const float mb = std::fabs(values[b]);
    return ma != mb ? ma < mb : a < b;
  };
  if (count < order.size()) {
    std::nth_element(order.begin(), order.begin() + count, order.end(), smaller);
  }
  for (std::size_t i = 0; i < count && i < order.size(); ++i) values[order[i]] = 0.0f;
}

void QuantiseRange(std::vector<float>& values, std::size_t begin, std::size_t end, int bits) {
  if (begin == end) return;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin() + begin, values.begin() + end);
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (lo == hi) return;
  const long top = (1L << bits) - 1;
  const double step = (hi - lo) / static_cast<double>(top);
  for (std::size_t i = begin; i < end; ++i) {
    long level = std::lround((values[i] - lo) / step);
    level = std::clamp(level, 0L, top);
    if (level == 0) {
      values[i] = static_cast<float>(lo);
    } else if (level == top) {
      values[i] = static_cast<float>(hi);
    } else {
      values[i] = static_cast<float>(lo + static_cast<double>(level) * step);
    }
  }
}

}  // namespace

nn::ModelParams FineTune(const nn::ModelParams& model, const data::Dataset& data,
                         float learning_rate, int epochs, std::uint64_t seed, int batch_size) {
  if (data.empty()) throw InputError("fine-tuning dataset is empty");
  if (!(learning_rate >= 0.0f)) throw InputError("fine-tuning rate must be >= 0");
  if (epochs < 0) throw InputError("fine-tuning epochs must be >= 0");
  if (epochs == 0 || learning_rate == 0.0f) return model;
  nn::TrainOptions options;
  options.learning_rate = learning_rate;
  options.epochs = epochs;
  options.batch_size = batch_size;
  options.seed = seed;
  const nn::Gradient delta = nn::TrainLocal(model, data, options);
  return nn::ApplyDelta(model, delta.values, 1.0);
}

nn::ModelParams Prune(const nn::ModelParams& model, double rate, PruneScope scope) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw InputError("prune rate must be in [0, 1]");
  nn::ModelParams out = model;
  if (scope == PruneScope::kGlobal) {
    const std::size_t d = out.values.size();
    ZeroSmallest(out.values, 0, d,
                 static_cast<std::size_t>(std::floor(rate * static_cast<double>(d))));
    return out;
  }
  for (const auto& layer : model.arch.plan()) {
    if (!layer.has_params()) continue;
    const std::size_t d = layer.params();
    ZeroSmallest(out.values, layer.offset, layer.offset + d,
                 static_cast<std::size_t>(std::floor(rate * static_cast<double>(d))));
  }
  return out;
}

nn::ModelParams Quantise(const nn::ModelParams& model, int bits) {
  if (bits < 2 || bits > 8) throw InputError("quantisation bits must be in [2, 8]");
  nn::ModelParams out = model;
  for (const auto& layer : model.arch.plan()) {
    if (!layer.has_params()) continue;
    QuantiseRange(out.values, layer.offset, layer.offset + layer.params(), bits);
  }
  return out;
}

std::string VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kCase1Robust:
      return "case1_robust";
    case Verdict::kCase2Robust:
      return "case2_robust";
    case Verdict::kBroken:
      return "broken";
  }
  return "unknown";
}

Verdict RobustnessVerdict(const AttackOutcome& outcome, double gamma, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("drop threshold must be in (0, 1)");
  const double drop = outcome.test_before - outcome.test_after;
  if (drop > delta) return Verdict::kCase2Robust;
  if (outcome.wm_after >= gamma) return Verdict::kCase1Robust;
  return Verdict::kBroken;
}

}  // namespace fedmark::attacks
