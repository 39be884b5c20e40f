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

#include "fedmark/nn/train.h"

#include <algorithm>

#include "engine.h"
#include "fedmark/common/error.h"
#include "fedmark/common/random.h"

namespace fedmark::nn {

std::uint64_t EpochSeed(std::uint64_t seed, int epoch) {
  return Mix64(seed + static_cast<std::uint64_t>(epoch));
}

std::vector<Batch> ShuffledBatches(const data::Dataset& dataset, int batch_size,
                                   std::uint64_t epoch_seed) {
  if (batch_size <= 0) throw InputError("batch size must be positive");
  Rng rng(epoch_seed);
  const auto order = ShuffledIndices(dataset.size(), rng);
  std::vector<Batch> batches;
  batches.reserve((order.size() + batch_size - 1) / batch_size);
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(batch_size));
    Batch batch;
    batch.reserve(end - start);
    for (std::size_t i = start; i < end; ++i) {
      batch.push_back({dataset.image(order[i]).data(), dataset.label(order[i])});
    }
    batches.push_back(std::move(batch));
  }
  return batches;
}

Gradient TrainOnBatches(const ModelParams& model, std::span<const Batch> batches,
                        float learning_rate) {
  if (model.values.size() != model.arch.parameter_count()) {
    throw DimensionError("model parameter count does not match architecture");
  }
  std::vector<float> params = model.values;
  std::vector<float> grad(params.size());
  internal::Engine<float> engine(model.arch);
  std::vector<const float*> images;
  std::vector<int> labels;
  for (const Batch& batch : batches) {
    if (batch.empty()) continue;
    images.clear();
    labels.clear();
    for (const SampleRef& s : batch) {
      images.push_back(s.image);
      labels.push_back(s.label);
    }
    engine.Forward(params, images);
    engine.Backward(params, labels, grad);
    for (std::size_t i = 0; i < params.size(); ++i) params[i] -= learning_rate * grad[i];
  }
  Gradient delta{std::vector<float>(params.size())};
  for (std::size_t i = 0; i < params.size(); ++i) delta.values[i] = model.values[i] - params[i];
  return delta;
}

Gradient TrainLocal(const ModelParams& model, const data::Dataset& dataset,
                    const TrainOptions& options) {
  if (dataset.empty()) throw InputError("local training on an empty dataset");
  if (options.epochs < 1) throw InputError("local epochs must be >= 1");
  if (!(options.learning_rate >= 0.0f)) throw InputError("learning rate must be non-negative");
  if (dataset.shape() != model.arch.input_shape()) {
    throw DimensionError("dataset shape does not match model input shape");
  }
  std::vector<Batch> all;
  for (int e = 0; e < options.epochs; ++e) {
    auto epoch = ShuffledBatches(dataset, options.batch_size, EpochSeed(options.seed, e));
    std::move(epoch.begin(), epoch.end(), std::back_inserter(all));
  }
  return TrainOnBatches(model, all, options.learning_rate);
}

ModelParams ApplyDelta(const ModelParams& model, std::span<const float> delta, double scale) {
  if (delta.size() != model.values.size()) {
    throw DimensionError("delta length does not match model");
  }
  ModelParams out = model;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    out.values[i] = static_cast<float>(static_cast<double>(model.values[i]) -
                                       scale * static_cast<double>(delta[i]));
  }
  return out;
}

template <typename T>
double LossAndGradient(const Architecture& arch, std::span<const T> params, const Batch& batch,
                       std::span<T> grad) {
  if (batch.empty()) throw InputError("empty batch");
  internal::Engine<T> engine(arch);
  std::vector<const float*> images;
  std::vector<int> labels;
  for (const SampleRef& s : batch) {
    images.push_back(s.image);
    labels.push_back(s.label);
  }
  engine.Forward(params, images);
  return engine.Backward(params, labels, grad);
}

template <typename T>
double Loss(const Architecture& arch, std::span<const T> params, const Batch& batch) {
  if (batch.empty()) throw InputError("empty batch");
  internal::Engine<T> engine(arch);
  std::vector<const float*> images;
  std::vector<int> labels;
  for (const SampleRef& s : batch) {
    images.push_back(s.image);
    labels.push_back(s.label);
  }
  engine.Forward(params, images);
  return engine.MeanLoss(labels);
}

template double LossAndGradient<float>(const Architecture&, std::span<const float>,
                                       const Batch&, std::span<float>);
template double LossAndGradient<double>(const Architecture&, std::span<const double>,
                                        const Batch&, std::span<double>);
template double Loss<float>(const Architecture&, std::span<const float>, const Batch&);
template double Loss<double>(const Architecture&, std::span<const double>, const Batch&);

}  // namespace fedmark::nn
