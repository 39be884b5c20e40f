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

#ifndef FEDMARK_NN_TRAIN_H_
#define FEDMARK_NN_TRAIN_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fedmark/data/dataset.h"
#include "fedmark/nn/model.h"

namespace fedmark::nn {

// Accumulated parameter delta M_before - M_after of one local-training call.
// The learning rate is already folded in.
struct Gradient {
  std::vector<float> values;

  bool operator==(const Gradient&) const = default;
};

// A borrowed training sample. `image` must outlive the batch.
struct SampleRef {
  const float* image = nullptr;
  int label = 0;
};
using Batch = std::vector<SampleRef>;

inline constexpr int kDefaultBatchSize = 32;

struct TrainOptions {
  float learning_rate = 0.01f;
  int epochs = 1;
  int batch_size = kDefaultBatchSize;
  std::uint64_t seed = 0;
};

// Seed of the shuffle used for epoch `epoch` of a call seeded with `seed`.
// Defined so that epoch e of seed s uses the same order as epoch 0 of seed
// s + e.
std::uint64_t EpochSeed(std::uint64_t seed, int epoch);

// One epoch of mini-batches over a Fisher-Yates permutation of the dataset.
// The final batch may be short.
std::vector<Batch> ShuffledBatches(const data::Dataset& dataset, int batch_size,
                                   std::uint64_t epoch_seed);

// Plain mini-batch SGD over the given batches, in order, starting at `model`.
// Returns model - result; `model` is not modified.
Gradient TrainOnBatches(const ModelParams& model, std::span<const Batch> batches,
                        float learning_rate);

// `epochs` epochs of shuffled mini-batch SGD with cross-entropy loss.
// Throws InputError on empty data or non-positive epochs / batch size.
Gradient TrainLocal(const ModelParams& model, const data::Dataset& dataset,
                    const TrainOptions& options);

// Applies `model - scale * delta` and returns the result.
ModelParams ApplyDelta(const ModelParams& model, std::span<const float> delta, double scale);

// Mean softmax cross-entropy over `batch` and its gradient with respect to
// `params` (written to `grad`, same length). Instantiated for float and
// double; the double instantiation exists for finite-difference checks.
template <typename T>
double LossAndGradient(const Architecture& arch, std::span<const T> params,
                       const Batch& batch, std::span<T> grad);

// Mean loss only.
template <typename T>
double Loss(const Architecture& arch, std::span<const T> params, const Batch& batch);

}  // namespace fedmark::nn

#endif  // FEDMARK_NN_TRAIN_H_
