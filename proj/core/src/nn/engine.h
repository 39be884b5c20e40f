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

#ifndef FEDMARK_SRC_NN_ENGINE_H_
#define FEDMARK_SRC_NN_ENGINE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "fedmark/nn/model.h"

namespace fedmark::nn::internal {

// Batched forward/backward evaluator. Buffers are reused across calls, so a
// single Engine must not be shared between threads.
template <typename T>
class Engine {
 public:
  explicit Engine(const Architecture& arch);

  // Runs the network on `images` (each of input_shape().pixels() floats).
  void Forward(std::span<const T> params, std::span<const float* const> images);

  // Logits of the last Forward call, row-major batch x k.
  std::span<const T> logits() const { return acts_.back(); }
  std::size_t batch() const { return batch_; }

  // Mean cross-entropy of the last Forward call against `labels`; writes the
  // gradient of that mean into `grad`.
  double Backward(std::span<const T> params, std::span<const int> labels, std::span<T> grad);

  double MeanLoss(std::span<const int> labels) const;

 private:
  const Architecture& arch_;
  std::size_t batch_ = 0;
  // acts_[l] is the input of layer l; acts_.back() holds the logits.
  std::vector<std::vector<T>> acts_;
  // im2col buffers for conv layers, maxpool argmax indices otherwise.
  std::vector<std::vector<T>> cols_;
  std::vector<std::vector<std::size_t>> argmax_;
  std::vector<T> delta_;
  std::vector<T> delta_next_;
  std::vector<T> scratch_;
};

}  // namespace fedmark::nn::internal

#endif  // FEDMARK_SRC_NN_ENGINE_H_
