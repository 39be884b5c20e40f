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

#include "fedmark/data/transform.h"

#include <algorithm>
#include <cmath>

#include "fedmark/common/error.h"

namespace fedmark::data {
namespace {

struct Tap {
  int lo;
  int hi;
  float frac;
};

std::vector<Tap> Taps(int src, int dst) {
  std::vector<Tap> taps(static_cast<std::size_t>(dst));
  for (int i = 0; i < dst; ++i) {
    if (dst == 1 || src == 1) {
      taps[i] = {0, 0, 0.0f};
      continue;
    }
    const double pos = static_cast<double>(i) * (src - 1) / (dst - 1);
    const int lo = std::min(static_cast<int>(std::floor(pos)), src - 1);
    const int hi = std::min(lo + 1, src - 1);
    taps[i] = {lo, hi, static_cast<float>(pos - lo)};
  }
  return taps;
}

}  // namespace

std::vector<float> ResizeImage(std::span<const float> image, const ImageShape& from,
                               int height, int width) {
  if (height <= 0 || width <= 0) throw InputError("resize target must be positive");
  if (image.size() != from.pixels()) throw DimensionError("image does not match shape");
  if (height == from.height && width == from.width) {
    return std::vector<float>(image.begin(), image.end());
  }
  const auto rows = Taps(from.height, height);
  const auto cols = Taps(from.width, width);
  std::vector<float> out(static_cast<std::size_t>(height) * width * from.channels);
  const std::size_t in_plane = static_cast<std::size_t>(from.height) * from.width;
  const std::size_t out_plane = static_cast<std::size_t>(height) * width;
  for (int c = 0; c < from.channels; ++c) {
    const float* src = image.data() + c * in_plane;
    float* dst = out.data() + c * out_plane;
    for (int y = 0; y < height; ++y) {
      const Tap& ty = rows[y];
      for (int x = 0; x < width; ++x) {
        const Tap& tx = cols[x];
        const float a = src[ty.lo * from.width + tx.lo];
        const float b = src[ty.lo * from.width + tx.hi];
        const float c0 = src[ty.hi * from.width + tx.lo];
        const float d = src[ty.hi * from.width + tx.hi];
        const float top = a + (b - a) * tx.frac;
        const float bottom = c0 + (d - c0) * tx.frac;
        dst[y * width + x] = top + (bottom - top) * ty.frac;
      }
    }
  }
  return out;
}

Dataset ResizeTo(const Dataset& dataset, int height, int width) {
  if (height <= 0 || width <= 0) throw InputError("resize target must be positive");
  const ImageShape& from = dataset.shape();
  if (height == from.height && width == from.width) return dataset;
  Dataset out(ImageShape{height, width, from.channels}, dataset.num_classes());
  out.Reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out.Add(ResizeImage(dataset.image(i), from, height, width), dataset.label(i));
  }
  return out;
}

}  // namespace fedmark::data
