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

#include "support/generators.h"

#include <random>

#include "fedmark/common/random.h"

namespace fedmark::testing {

data::Dataset RandomDataset(const data::ImageShape& shape, int num_classes, std::size_t count,
                            std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<float> pixel(0.0f, 1.0f);
  data::Dataset out(shape, num_classes);
  std::vector<float> image(shape.pixels());
  for (std::size_t i = 0; i < count; ++i) {
    for (float& v : image) v = pixel(rng);
    out.Add(image, static_cast<int>(UniformBelow(rng, num_classes)));
  }
  return out;
}

nn::Architecture RandomSmallArch(std::uint64_t seed) {
  Rng rng(seed);
  const int side = 5 + static_cast<int>(UniformBelow(rng, 4));
  const int channels = 1 + static_cast<int>(UniformBelow(rng, 2));
  const int kernel = 2 + static_cast<int>(UniformBelow(rng, 2));
  const int stride = 1 + static_cast<int>(UniformBelow(rng, 2));
  const int filters = 2 + static_cast<int>(UniformBelow(rng, 2));
  const int hidden = 3 + static_cast<int>(UniformBelow(rng, 4));
  const int classes = 2 + static_cast<int>(UniformBelow(rng, 3));
  using nn::LayerSpec;
  std::vector<LayerSpec> layers{LayerSpec::Conv(filters, kernel, stride), LayerSpec::Relu()};
  const int conv_out = (side - kernel) / stride + 1;
  if (conv_out >= 2) layers.push_back(LayerSpec::MaxPool(2));
  layers.push_back(LayerSpec::Dense(hidden));
  layers.push_back(LayerSpec::Relu());
  layers.push_back(LayerSpec::Dense(classes));
  return nn::Architecture(layers, {side, side, channels});
}

nn::ModelParams RandomModel(const nn::Architecture& arch, std::uint64_t seed, float scale) {
  Rng rng(seed);
  std::uniform_real_distribution<float> value(-scale, scale);
  nn::ModelParams m{arch, std::vector<float>(arch.parameter_count())};
  for (float& v : m.values) v = value(rng);
  return m;
}

nn::Batch AllSamples(const data::Dataset& dataset) {
  nn::Batch batch;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    batch.push_back({dataset.image(i).data(), dataset.label(i)});
  }
  return batch;
}

}  // namespace fedmark::testing
