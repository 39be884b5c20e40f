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
#include <numbers>

#include "fedmark/attacks/attacks.h"
#include "fedmark/common/error.h"
#include "fedmark/common/random.h"
#include "fedmark/data/transform.h"

namespace fedmark::attacks {
namespace {

float At(std::span<const float> img, int h, int w, int r, int c) {
  r = std::clamp(r, 0, h - 1);
  c = std::clamp(c, 0, w - 1);
  return img[static_cast<std::size_t>(r) * w + c];
}

// Bilinear sample with zero outside the image.
float Sample(std::span<const float> img, int h, int w, double y, double x) {
  const int y0 = static_cast<int>(std::floor(y));
  const int x0 = static_cast<int>(std::floor(x));
  const double fy = y - y0;
  const double fx = x - x0;
  auto px = [&](int r, int c) -> double {
    if (r < 0 || r >= h || c < 0 || c >= w) return 0.0;
    return img[static_cast<std::size_t>(r) * w + c];
  };
  const double top = px(y0, x0) * (1 - fx) + px(y0, x0 + 1) * fx;
  const double bottom = px(y0 + 1, x0) * (1 - fx) + px(y0 + 1, x0 + 1) * fx;
  return static_cast<float>(top * (1 - fy) + bottom * fy);
}

std::vector<double> GaussianKernel(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[i + radius];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable Gaussian blur with edge replication.
void Blur(std::vector<double>& field, int h, int w, const std::vector<double>& kernel) {
  const int radius = static_cast<int>(kernel.size() / 2);
  std::vector<double> tmp(field.size());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[i + radius] * field[static_cast<std::size_t>(r) * w + std::clamp(c + i, 0, w - 1)];
      }
      tmp[static_cast<std::size_t>(r) * w + c] = acc;
    }
  }
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[i + radius] * tmp[static_cast<std::size_t>(std::clamp(r + i, 0, h - 1)) * w + c];
      }
      field[static_cast<std::size_t>(r) * w + c] = acc;
    }
  }
}

double Uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

bool AffineIsIdentity(const PstParams& p) {
  return p.rotation_deg == 0.0 && p.translation == 0.0 && p.scale_min == 1.0 &&
         p.scale_max == 1.0;
}

void StridedMedian(std::span<float> plane, int h, int w, int stride) {
  const std::vector<float> source(plane.begin(), plane.end());
  const std::vector<float> med = MedianFilter3(source, h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (r % stride == 0 || c % stride == 0) {
        plane[static_cast<std::size_t>(r) * w + c] = med[static_cast<std::size_t>(r) * w + c];
      }
    }
  }
}

}  // namespace

PstParams PstParams::Identity() {
  PstParams p;
  p.resize_scale = 1.0;
  p.filter_stride = 0;
  p.rotation_deg = 0.0;
  p.translation = 0.0;
  p.scale_min = 1.0;
  p.scale_max = 1.0;
  p.elastic_alpha = 0.0;
  return p;
}

void ValidatePstParams(const PstParams& p) {
  if (!(p.resize_scale > 0.0 && p.resize_scale <= 4.0)) {
    throw ConfigError("pst resize scale must be in (0, 4]");
  }
  if (p.filter_stride < 0) throw ConfigError("pst filter stride must be >= 0");
  if (!(p.rotation_deg >= 0.0 && p.rotation_deg <= 180.0)) {
    throw ConfigError("pst rotation must be in [0, 180] degrees");
  }
  if (!(p.translation >= 0.0 && p.translation < 1.0)) {
    throw ConfigError("pst translation must be in [0, 1)");
  }
  if (!(p.scale_min > 0.0 && p.scale_min <= p.scale_max && p.scale_max <= 4.0)) {
    throw ConfigError("pst scale range must satisfy 0 < min <= max <= 4");
  }
  if (!(p.elastic_alpha >= 0.0) || !std::isfinite(p.elastic_alpha)) {
    throw ConfigError("pst elastic alpha must be >= 0");
  }
  if (p.elastic_alpha > 0.0 && !(p.elastic_sigma > 0.0)) {
    throw ConfigError("pst elastic sigma must be positive");
  }
}

std::vector<float> MedianFilter3(std::span<const float> image, int height, int width) {
  if (image.size() != static_cast<std::size_t>(height) * width) {
    throw DimensionError("median filter input does not match its size");
  }
  std::vector<float> out(image.size());
  float window[9];
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      int n = 0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) window[n++] = At(image, height, width, r + dr, c + dc);
      }
      std::nth_element(window, window + 4, window + 9);
      out[static_cast<std::size_t>(r) * width + c] = window[4];
    }
  }
  return out;
}

data::Dataset PstTransform(const data::Dataset& dataset, const PstParams& params) {
  ValidatePstParams(params);
  const data::ImageShape shape = dataset.shape();
  const int h = shape.height;
  const int w = shape.width;
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  data::Dataset out = dataset;
  const bool resize = params.resize_scale != 1.0;
  const bool affine = !AffineIsIdentity(params);
  const bool elastic = params.elastic_alpha > 0.0;
  const std::vector<double> kernel =
      elastic ? GaussianKernel(params.elastic_sigma) : std::vector<double>{};
  const double cy = (h - 1) / 2.0;
  const double cx = (w - 1) / 2.0;

  for (std::size_t i = 0; i < out.size(); ++i) {
    Rng rng(DeriveSeed(params.seed, {static_cast<std::uint64_t>(i)}));
    std::span<float> img = out.mutable_image(i);
    if (resize) {
      const int sh = std::max(1, static_cast<int>(std::lround(h * params.resize_scale)));
      const int sw = std::max(1, static_cast<int>(std::lround(w * params.resize_scale)));
      const auto small = data::ResizeImage(img, shape, sh, sw);
      const auto back = data::ResizeImage(small, {sh, sw, shape.channels}, h, w);
      std::copy(back.begin(), back.end(), img.begin());
    }
    if (params.filter_stride > 0) {
      for (int ch = 0; ch < shape.channels; ++ch) {
        StridedMedian(img.subspan(ch * plane, plane), h, w, params.filter_stride);
      }
    }
    if (affine) {
      const double angle = Uniform(rng, -params.rotation_deg, params.rotation_deg) *
                           std::numbers::pi / 180.0;
      const double ty = Uniform(rng, -params.translation, params.translation) * h;
      const double tx = Uniform(rng, -params.translation, params.translation) * w;
      const double s = Uniform(rng, params.scale_min, params.scale_max);
      const double cs = std::cos(angle);
      const double sn = std::sin(angle);
      const std::vector<float> src(img.begin(), img.end());
      for (int ch = 0; ch < shape.channels; ++ch) {
        std::span<const float> sp(src.data() + ch * plane, plane);
        for (int r = 0; r < h; ++r) {
          for (int c = 0; c < w; ++c) {
            const double dy = r - cy - ty;
            const double dx = c - cx - tx;
            const double sy = (-sn * dx + cs * dy) / s + cy;
            const double sx = (cs * dx + sn * dy) / s + cx;
            img[ch * plane + static_cast<std::size_t>(r) * w + c] = Sample(sp, h, w, sy, sx);
          }
        }
      }
    }
    if (elastic) {
      std::vector<double> fy(plane);
      std::vector<double> fx(plane);
      for (std::size_t p = 0; p < plane; ++p) {
        fy[p] = Uniform(rng, -1.0, 1.0);
        fx[p] = Uniform(rng, -1.0, 1.0);
      }
      Blur(fy, h, w, kernel);
      Blur(fx, h, w, kernel);
      const std::vector<float> src(img.begin(), img.end());
      for (int ch = 0; ch < shape.channels; ++ch) {
        std::span<const float> sp(src.data() + ch * plane, plane);
        for (int r = 0; r < h; ++r) {
          for (int c = 0; c < w; ++c) {
            const std::size_t p = static_cast<std::size_t>(r) * w + c;
            img[ch * plane + p] = Sample(sp, h, w, r + params.elastic_alpha * fy[p],
                                         c + params.elastic_alpha * fx[p]);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace fedmark::attacks
