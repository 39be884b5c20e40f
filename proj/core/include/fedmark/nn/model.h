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

#ifndef FEDMARK_NN_MODEL_H_
#define FEDMARK_NN_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fedmark/data/dataset.h"

namespace fedmark::nn {

enum class LayerKind { kConv, kDense, kMaxPool, kRelu };

// One layer descriptor. `size` is the output channel count (conv), output
// feature count (dense) or window (max-pool, which also uses it as stride).
struct LayerSpec {
  LayerKind kind = LayerKind::kRelu;
  int size = 0;
  int kernel = 0;
  int stride = 1;

  static LayerSpec Conv(int out_channels, int kernel, int stride = 1) {
    return {LayerKind::kConv, out_channels, kernel, stride};
  }
  static LayerSpec Dense(int out_features) { return {LayerKind::kDense, out_features, 0, 1}; }
  static LayerSpec MaxPool(int window) { return {LayerKind::kMaxPool, window, 0, window}; }
  static LayerSpec Relu() { return {LayerKind::kRelu, 0, 0, 1}; }

  bool operator==(const LayerSpec&) const = default;
};

// A layer with resolved geometry and its slice of the flat parameter vector.
// Weights precede biases; conv weights are [out][in][ky][kx], dense weights
// are [out][in].
struct LayerPlan {
  LayerSpec spec;
  data::ImageShape in;
  data::ImageShape out;
  std::size_t offset = 0;
  std::size_t weights = 0;
  std::size_t biases = 0;
  int fan_in = 0;

  std::size_t params() const { return weights + biases; }
  bool has_params() const { return params() > 0; }
};

// Validated, ordered layer stack. Dense layers flatten their input; the
// final layer's output size is the class count k.
class Architecture {
 public:
  Architecture() = default;
  // Throws ConfigError on an empty stack, a zero-size layer or a kernel /
  // window that does not fit its input.
  Architecture(std::vector<LayerSpec> layers, data::ImageShape input);

  // conv(6,5) relu pool(2) conv(16,5) relu pool(2) dense(64) relu dense(k)
  static Architecture LenetMini(data::ImageShape input, int num_classes);
  // A single dense layer: multinomial logistic regression.
  static Architecture SoftmaxRegression(data::ImageShape input, int num_classes);
  // Named presets: "lenet-mini", "softmax", "mlp".
  static Architecture FromName(const std::string& name, data::ImageShape input,
                               int num_classes);

  const std::vector<LayerSpec>& layers() const { return layers_; }
  const std::vector<LayerPlan>& plan() const { return plan_; }
  const data::ImageShape& input_shape() const { return input_; }
  std::size_t parameter_count() const { return parameter_count_; }
  int num_classes() const { return num_classes_; }
  std::string Describe() const;

  bool operator==(const Architecture& other) const {
    return layers_ == other.layers_ && input_ == other.input_;
  }

 private:
  std::vector<LayerSpec> layers_;
  data::ImageShape input_;
  std::vector<LayerPlan> plan_;
  std::size_t parameter_count_ = 0;
  int num_classes_ = 0;
};

// The model M: a flat float vector laid out per Architecture::plan().
struct ModelParams {
  Architecture arch;
  std::vector<float> values;

  bool operator==(const ModelParams&) const = default;
};

// He initialisation: weights ~ N(0, 2 / fan_in), biases 0. Deterministic in
// (arch, seed).
ModelParams InitModel(const Architecture& arch, std::uint64_t seed);

// Row-major batch x k score matrix.
struct Logits {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> values;

  std::span<const float> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
};

// Logits for `count` images stored contiguously (CHW each). The input must
// match the model's input shape (DimensionError otherwise).
Logits Forward(const ModelParams& model, std::span<const float> images, std::size_t count);
Logits Forward(const ModelParams& model, const data::Dataset& dataset);

// argmax with ties resolved to the lowest class index.
int ArgMax(std::span<const float> scores);
std::vector<int> Predict(const ModelParams& model, const data::Dataset& dataset);
int PredictOne(const ModelParams& model, std::span<const float> image);

// Fraction of samples whose predicted class equals the label. Empty data is
// InputError.
double Evaluate(const ModelParams& model, const data::Dataset& dataset);

// Checks values.size() against the architecture and that every value is
// finite; throws DimensionError / InputError.
void ValidateModel(const ModelParams& model);

}  // namespace fedmark::nn

#endif  // FEDMARK_NN_MODEL_H_
