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

#include "fedmark/data/synth.h"

#include <algorithm>
#include <random>
#include <vector>

#include "fedmark/common/error.h"
#include "fedmark/common/random.h"
#include "fedmark/data/transform.h"

namespace fedmark::data {
namespace {

constexpr int kPrototypeGrid = 6;

}  // namespace

Dataset SynthDataset(int num_classes, int per_class, ImageShape shape,
                     std::uint64_t seed, std::uint64_t split) {
  if (num_classes < 2) throw InputError("synthetic dataset needs k >= 2");
  if (per_class < 1) throw InputError("synthetic dataset needs per_class >= 1");
  if (shape.height <= 0 || shape.width <= 0 || shape.channels <= 0) {
    throw InputError("synthetic image dimensions must be positive");
  }

  const ImageShape coarse{std::min(kPrototypeGrid, shape.height),
                          std::min(kPrototypeGrid, shape.width), shape.channels};
  Rng proto_rng(DeriveSeed(seed, {0x70726f746fULL}));
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  std::vector<std::vector<float>> prototypes;
  prototypes.reserve(num_classes);
  for (int c = 0; c < num_classes; ++c) {
    std::vector<float> grid(coarse.pixels());
    for (float& v : grid) v = unit(proto_rng);
    prototypes.push_back(ResizeImage(grid, coarse, shape.height, shape.width));
  }

  Rng noise_rng(DeriveSeed(seed, {0x6e6f697365ULL, split}));
  std::normal_distribution<float> noise(0.0f, kSynthNoiseSigma);
  Dataset out(shape, num_classes);
  out.Reserve(static_cast<std::size_t>(num_classes) * per_class);
  std::vector<float> image(shape.pixels());
  for (int i = 0; i < per_class; ++i) {
    for (int c = 0; c < num_classes; ++c) {
      const auto& proto = prototypes[c];
      for (std::size_t p = 0; p < image.size(); ++p) {
        image[p] = std::clamp(proto[p] + noise(noise_rng), 0.0f, 1.0f);
      }
      out.Add(image, c);
    }
  }
  return out;
}

}  // namespace fedmark::data
