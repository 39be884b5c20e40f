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

#include "fedmark/nn/model.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "engine.h"
#include "fedmark/common/error.h"
#include "fedmark/common/random.h"

namespace fedmark::nn {
namespace {

std::string LayerName(const LayerSpec& s) {
  switch (s.kind) {
    case LayerKind::kConv:
      return "conv" + std::to_string(s.size) + "k" + std::to_string(s.kernel) +
             (s.stride != 1 ? "s" + std::to_string(s.stride) : "");
    case LayerKind::kDense:
      return "dense" + std::to_string(s.size);
    case LayerKind::kMaxPool:
      return "pool" + std::to_string(s.size);
    case LayerKind::kRelu:
      return "relu";
  }
  return "?";
}

}  // namespace

Architecture::Architecture(std::vector<LayerSpec> layers, data::ImageShape input)
    : layers_(std::move(layers)), input_(input) {
  if (layers_.empty()) throw ConfigError("architecture has no layers");
  if (input.height <= 0 || input.width <= 0 || input.channels <= 0) {
    throw ConfigError("architecture input shape must be positive");
  }
  data::ImageShape cur = input;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const LayerSpec& s = layers_[i];
    LayerPlan p;
    p.spec = s;
    p.in = cur;
    p.offset = offset;
    const std::string where = "layer " + std::to_string(i) + " (" + LayerName(s) + ")";
    switch (s.kind) {
      case LayerKind::kConv: {
        if (s.size <= 0 || s.kernel <= 0 || s.stride <= 0) {
          throw ConfigError(where + ": zero-size convolution");
        }
        if (s.kernel > cur.height || s.kernel > cur.width) {
          throw ConfigError(where + ": kernel larger than input");
        }
        p.out = {(cur.height - s.kernel) / s.stride + 1, (cur.width - s.kernel) / s.stride + 1,
                 s.size};
        p.fan_in = cur.channels * s.kernel * s.kernel;
        p.weights = static_cast<std::size_t>(s.size) * p.fan_in;
        p.biases = static_cast<std::size_t>(s.size);
        break;
      }
      case LayerKind::kDense: {
        if (s.size <= 0) throw ConfigError(where + ": zero-size dense layer");
        p.out = {1, 1, s.size};
        p.fan_in = static_cast<int>(cur.pixels());
        p.weights = static_cast<std::size_t>(s.size) * p.fan_in;
        p.biases = static_cast<std::size_t>(s.size);
        break;
      }
      case LayerKind::kMaxPool: {
        if (s.size <= 0) throw ConfigError(where + ": zero-size pooling window");
        if (s.size > cur.height || s.size > cur.width) {
          throw ConfigError(where + ": pooling window larger than input");
        }
        p.out = {cur.height / s.size, cur.width / s.size, cur.channels};
        break;
      }
      case LayerKind::kRelu:
        p.out = cur;
        break;
    }
    offset += p.params();
    cur = p.out;
    plan_.push_back(p);
  }
  parameter_count_ = offset;
  num_classes_ = static_cast<int>(cur.pixels());
  if (parameter_count_ == 0) throw ConfigError("architecture has no parameters");
}

Architecture Architecture::LenetMini(data::ImageShape input, int num_classes) {
  return Architecture({LayerSpec::Conv(6, 5), LayerSpec::Relu(), LayerSpec::MaxPool(2),
                       LayerSpec::Conv(16, 5), LayerSpec::Relu(), LayerSpec::MaxPool(2),
                       LayerSpec::Dense(64), LayerSpec::Relu(), LayerSpec::Dense(num_classes)},
                      input);
}

Architecture Architecture::SoftmaxRegression(data::ImageShape input, int num_classes) {
  return Architecture({LayerSpec::Dense(num_classes)}, input);
}

Architecture Architecture::FromName(const std::string& name, data::ImageShape input,
                                    int num_classes) {
  if (name == "lenet-mini") return LenetMini(input, num_classes);
  if (name == "softmax") return SoftmaxRegression(input, num_classes);
  if (name == "mlp") {
    return Architecture({LayerSpec::Dense(64), LayerSpec::Relu(), LayerSpec::Dense(num_classes)},
                        input);
  }
  throw ConfigError("unknown architecture '" + name + "'");
}

std::string Architecture::Describe() const {
  std::ostringstream os;
  os << input_.height << "x" << input_.width << "x" << input_.channels;
  for (const auto& s : layers_) os << "-" << LayerName(s);
  return os.str();
}

ModelParams InitModel(const Architecture& arch, std::uint64_t seed) {
  ModelParams model{arch, std::vector<float>(arch.parameter_count(), 0.0f)};
  Rng rng(DeriveSeed(seed, {0x696e6974ULL}));
  for (const LayerPlan& p : arch.plan()) {
    if (!p.has_params()) continue;
    std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / p.fan_in));
    for (std::size_t i = 0; i < p.weights; ++i) {
      model.values[p.offset + i] = static_cast<float>(dist(rng));
    }
  }
  return model;
}

void ValidateModel(const ModelParams& model) {
  if (model.values.size() != model.arch.parameter_count()) {
    throw DimensionError("model has " + std::to_string(model.values.size()) +
                         " values, architecture needs " +
                         std::to_string(model.arch.parameter_count()));
  }
  for (float v : model.values) {
    if (!std::isfinite(v)) throw InputError("model contains a non-finite parameter");
  }
}

Logits Forward(const ModelParams& model, std::span<const float> images, std::size_t count) {
  const std::size_t pixels = model.arch.input_shape().pixels();
  if (images.size() != count * pixels) {
    throw DimensionError("input size does not match model input shape");
  }
  if (model.values.size() != model.arch.parameter_count()) {
    throw DimensionError("model parameter count does not match architecture");
  }
  const std::size_t k = static_cast<std::size_t>(model.arch.num_classes());
  Logits out{count, k, std::vector<float>(count * k)};
  internal::Engine<float> engine(model.arch);
  // One sample per pass keeps each logit row independent of the batch.
  for (std::size_t i = 0; i < count; ++i) {
    const float* image = images.data() + i * pixels;
    engine.Forward(model.values, std::span<const float* const>(&image, 1));
    const auto logits = engine.logits();
    std::copy(logits.begin(), logits.end(), out.values.begin() + i * k);
  }
  return out;
}

Logits Forward(const ModelParams& model, const data::Dataset& dataset) {
  if (dataset.shape() != model.arch.input_shape()) {
    throw DimensionError("dataset shape does not match model input shape");
  }
  return Forward(model, dataset.pixels(), dataset.size());
}

int ArgMax(std::span<const float> scores) {
  int best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = static_cast<int>(c);
  }
  return best;
}

std::vector<int> Predict(const ModelParams& model, const data::Dataset& dataset) {
  const Logits logits = Forward(model, dataset);
  std::vector<int> out(logits.rows);
  for (std::size_t i = 0; i < logits.rows; ++i) out[i] = ArgMax(logits.row(i));
  return out;
}

int PredictOne(const ModelParams& model, std::span<const float> image) {
  const Logits logits = Forward(model, image, 1);
  return ArgMax(logits.row(0));
}

double Evaluate(const ModelParams& model, const data::Dataset& dataset) {
  if (dataset.empty()) throw InputError("cannot evaluate on an empty dataset");
  const auto predicted = Predict(model, dataset);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    correct += predicted[i] == dataset.label(i) ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

}  // namespace fedmark::nn
