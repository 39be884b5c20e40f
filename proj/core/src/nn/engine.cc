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

#include "engine.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Core>

#include "fedmark/common/error.h"

namespace fedmark::nn::internal {
namespace {

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapMat = Eigen::Map<Mat<T>>;
template <typename T>
using ConstMapMat = Eigen::Map<const Mat<T>>;

struct ConvGeom {
  int cin, h, w, k, s, cout, ho, wo;
  std::size_t positions() const { return static_cast<std::size_t>(ho) * wo; }
  std::size_t rows() const { return static_cast<std::size_t>(cin) * k * k; }
};

ConvGeom Geometry(const LayerPlan& p) {
  return {p.in.channels, p.in.height, p.in.width, p.spec.kernel, p.spec.stride,
          p.out.channels, p.out.height, p.out.width};
}

template <typename T>
void Im2Col(const ConvGeom& g, const T* in, std::size_t batch, T* cols) {
  const std::size_t bp = batch * g.positions();
  const std::size_t in_pixels = static_cast<std::size_t>(g.cin) * g.h * g.w;
  for (int ci = 0; ci < g.cin; ++ci) {
    for (int ky = 0; ky < g.k; ++ky) {
      for (int kx = 0; kx < g.k; ++kx) {
        T* dst = cols + ((static_cast<std::size_t>(ci) * g.k + ky) * g.k + kx) * bp;
        for (std::size_t b = 0; b < batch; ++b) {
          const T* src = in + b * in_pixels + static_cast<std::size_t>(ci) * g.h * g.w;
          for (int oy = 0; oy < g.ho; ++oy) {
            const T* row = src + static_cast<std::size_t>(oy * g.s + ky) * g.w + kx;
            for (int ox = 0; ox < g.wo; ++ox) *dst++ = row[ox * g.s];
          }
        }
      }
    }
  }
}

template <typename T>
void Col2Im(const ConvGeom& g, const T* cols, std::size_t batch, T* in_grad) {
  const std::size_t bp = batch * g.positions();
  const std::size_t in_pixels = static_cast<std::size_t>(g.cin) * g.h * g.w;
  for (int ci = 0; ci < g.cin; ++ci) {
    for (int ky = 0; ky < g.k; ++ky) {
      for (int kx = 0; kx < g.k; ++kx) {
        const T* src = cols + ((static_cast<std::size_t>(ci) * g.k + ky) * g.k + kx) * bp;
        for (std::size_t b = 0; b < batch; ++b) {
          T* dst = in_grad + b * in_pixels + static_cast<std::size_t>(ci) * g.h * g.w;
          for (int oy = 0; oy < g.ho; ++oy) {
            T* row = dst + static_cast<std::size_t>(oy * g.s + ky) * g.w + kx;
            for (int ox = 0; ox < g.wo; ++ox) row[ox * g.s] += *src++;
          }
        }
      }
    }
  }
}

}  // namespace

template <typename T>
Engine<T>::Engine(const Architecture& arch) : arch_(arch) {
  const std::size_t n = arch.plan().size();
  acts_.resize(n + 1);
  cols_.resize(n);
  argmax_.resize(n);
}

template <typename T>
void Engine<T>::Forward(std::span<const T> params, std::span<const float* const> images) {
  if (params.size() != arch_.parameter_count()) {
    throw DimensionError("parameter vector length does not match architecture");
  }
  batch_ = images.size();
  const std::size_t in_pixels = arch_.input_shape().pixels();
  auto& input = acts_[0];
  input.resize(batch_ * in_pixels);
  for (std::size_t b = 0; b < batch_; ++b) {
    std::copy(images[b], images[b] + in_pixels, input.begin() + b * in_pixels);
  }

  const auto& plan = arch_.plan();
  for (std::size_t l = 0; l < plan.size(); ++l) {
    const LayerPlan& p = plan[l];
    const std::vector<T>& in = acts_[l];
    std::vector<T>& out = acts_[l + 1];
    out.resize(batch_ * p.out.pixels());
    const T* weights = params.data() + p.offset;
    const T* bias = weights + p.weights;
    switch (p.spec.kind) {
      case LayerKind::kConv: {
        const ConvGeom g = Geometry(p);
        const std::size_t positions = g.positions();
        const std::size_t bp = batch_ * positions;
        cols_[l].resize(g.rows() * bp);
        Im2Col(g, in.data(), batch_, cols_[l].data());
        scratch_.resize(static_cast<std::size_t>(g.cout) * bp);
        MapMat<T> y(scratch_.data(), g.cout, static_cast<Eigen::Index>(bp));
        y.noalias() = ConstMapMat<T>(weights, g.cout, static_cast<Eigen::Index>(g.rows())) *
                      ConstMapMat<T>(cols_[l].data(), static_cast<Eigen::Index>(g.rows()),
                                     static_cast<Eigen::Index>(bp));
        for (std::size_t b = 0; b < batch_; ++b) {
          for (int co = 0; co < g.cout; ++co) {
            const T* src = scratch_.data() + co * bp + b * positions;
            T* dst = out.data() + (b * g.cout + co) * positions;
            for (std::size_t q = 0; q < positions; ++q) dst[q] = src[q] + bias[co];
          }
        }
        break;
      }
      case LayerKind::kDense: {
        const auto fan_in = static_cast<Eigen::Index>(p.in.pixels());
        const auto fan_out = static_cast<Eigen::Index>(p.out.pixels());
        const auto rows = static_cast<Eigen::Index>(batch_);
        MapMat<T> y(out.data(), rows, fan_out);
        y.noalias() = ConstMapMat<T>(in.data(), rows, fan_in) *
                      ConstMapMat<T>(weights, fan_out, fan_in).transpose();
        for (Eigen::Index r = 0; r < rows; ++r) {
          for (Eigen::Index c = 0; c < fan_out; ++c) y(r, c) += bias[c];
        }
        break;
      }
      case LayerKind::kMaxPool: {
        const int win = p.spec.size;
        const int h = p.in.height, w = p.in.width;
        auto& arg = argmax_[l];
        arg.resize(out.size());
        std::size_t o = 0;
        for (std::size_t b = 0; b < batch_; ++b) {
          for (int c = 0; c < p.in.channels; ++c) {
            const std::size_t plane = (b * p.in.channels + c) * static_cast<std::size_t>(h) * w;
            for (int oy = 0; oy < p.out.height; ++oy) {
              for (int ox = 0; ox < p.out.width; ++ox, ++o) {
                std::size_t best = plane + static_cast<std::size_t>(oy * win) * w + ox * win;
                for (int dy = 0; dy < win; ++dy) {
                  for (int dx = 0; dx < win; ++dx) {
                    const std::size_t idx =
                        plane + static_cast<std::size_t>(oy * win + dy) * w + ox * win + dx;
                    if (in[idx] > in[best]) best = idx;
                  }
                }
                arg[o] = best;
                out[o] = in[best];
              }
            }
          }
        }
        break;
      }
      case LayerKind::kRelu:
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = in[i] > T(0) ? in[i] : T(0);
        break;
    }
  }
}

template <typename T>
double Engine<T>::MeanLoss(std::span<const int> labels) const {
  const std::size_t k = static_cast<std::size_t>(arch_.num_classes());
  const auto& logits = acts_.back();
  double total = 0.0;
  for (std::size_t b = 0; b < batch_; ++b) {
    const T* row = logits.data() + b * k;
    const double peak = static_cast<double>(*std::max_element(row, row + k));
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) sum += std::exp(static_cast<double>(row[c]) - peak);
    total += peak + std::log(sum) - static_cast<double>(row[labels[b]]);
  }
  return batch_ ? total / static_cast<double>(batch_) : 0.0;
}

template <typename T>
double Engine<T>::Backward(std::span<const T> params, std::span<const int> labels,
                           std::span<T> grad) {
  if (labels.size() != batch_) throw DimensionError("label count does not match batch");
  if (grad.size() != params.size()) throw DimensionError("gradient buffer length mismatch");
  const std::size_t k = static_cast<std::size_t>(arch_.num_classes());
  const auto& logits = acts_.back();
  const double inv_batch = 1.0 / static_cast<double>(batch_);

  // d(mean loss)/d(logits) = (softmax - onehot) / B
  double total = 0.0;
  delta_.resize(logits.size());
  for (std::size_t b = 0; b < batch_; ++b) {
    const T* row = logits.data() + b * k;
    const double peak = static_cast<double>(*std::max_element(row, row + k));
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) sum += std::exp(static_cast<double>(row[c]) - peak);
    total += peak + std::log(sum) - static_cast<double>(row[labels[b]]);
    for (std::size_t c = 0; c < k; ++c) {
      const double prob = std::exp(static_cast<double>(row[c]) - peak) / sum;
      const double target = static_cast<int>(c) == labels[b] ? 1.0 : 0.0;
      delta_[b * k + c] = static_cast<T>((prob - target) * inv_batch);
    }
  }

  const auto& plan = arch_.plan();
  for (std::size_t l = plan.size(); l-- > 0;) {
    const LayerPlan& p = plan[l];
    const std::vector<T>& in = acts_[l];
    const T* weights = params.data() + p.offset;
    T* dweights = grad.data() + p.offset;
    T* dbias = dweights + p.weights;
    const bool need_input_grad = l > 0;
    switch (p.spec.kind) {
      case LayerKind::kConv: {
        const ConvGeom g = Geometry(p);
        const std::size_t positions = g.positions();
        const std::size_t bp = batch_ * positions;
        scratch_.resize(static_cast<std::size_t>(g.cout) * bp);
        for (std::size_t b = 0; b < batch_; ++b) {
          for (int co = 0; co < g.cout; ++co) {
            const T* src = delta_.data() + (b * g.cout + co) * positions;
            std::copy(src, src + positions, scratch_.data() + co * bp + b * positions);
          }
        }
        ConstMapMat<T> dy(scratch_.data(), g.cout, static_cast<Eigen::Index>(bp));
        ConstMapMat<T> cols(cols_[l].data(), static_cast<Eigen::Index>(g.rows()),
                            static_cast<Eigen::Index>(bp));
        MapMat<T>(dweights, g.cout, static_cast<Eigen::Index>(g.rows())).noalias() =
            dy * cols.transpose();
        for (int co = 0; co < g.cout; ++co) dbias[co] = dy.row(co).sum();
        if (need_input_grad) {
          std::vector<T> dcols(g.rows() * bp);
          MapMat<T>(dcols.data(), static_cast<Eigen::Index>(g.rows()),
                    static_cast<Eigen::Index>(bp))
              .noalias() =
              ConstMapMat<T>(weights, g.cout, static_cast<Eigen::Index>(g.rows())).transpose() *
              dy;
          delta_next_.assign(in.size(), T(0));
          Col2Im(g, dcols.data(), batch_, delta_next_.data());
        }
        break;
      }
      case LayerKind::kDense: {
        const auto fan_in = static_cast<Eigen::Index>(p.in.pixels());
        const auto fan_out = static_cast<Eigen::Index>(p.out.pixels());
        const auto rows = static_cast<Eigen::Index>(batch_);
        ConstMapMat<T> dy(delta_.data(), rows, fan_out);
        MapMat<T>(dweights, fan_out, fan_in).noalias() =
            dy.transpose() * ConstMapMat<T>(in.data(), rows, fan_in);
        for (Eigen::Index c = 0; c < fan_out; ++c) dbias[c] = dy.col(c).sum();
        if (need_input_grad) {
          delta_next_.resize(in.size());
          MapMat<T>(delta_next_.data(), rows, fan_in).noalias() =
              dy * ConstMapMat<T>(weights, fan_out, fan_in);
        }
        break;
      }
      case LayerKind::kMaxPool: {
        if (need_input_grad) {
          delta_next_.assign(in.size(), T(0));
          const auto& arg = argmax_[l];
          for (std::size_t o = 0; o < arg.size(); ++o) delta_next_[arg[o]] += delta_[o];
        }
        break;
      }
      case LayerKind::kRelu: {
        if (need_input_grad) {
          delta_next_.resize(in.size());
          for (std::size_t i = 0; i < in.size(); ++i) {
            delta_next_[i] = in[i] > T(0) ? delta_[i] : T(0);
          }
        }
        break;
      }
    }
    if (need_input_grad) std::swap(delta_, delta_next_);
  }
  return total * inv_batch;
}

template class Engine<float>;
template class Engine<double>;

}  // namespace fedmark::nn::internal
