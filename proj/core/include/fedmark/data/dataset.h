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

#ifndef FEDMARK_DATA_DATASET_H_
#define FEDMARK_DATA_DATASET_H_

#include <cstddef>
#include <span>
#include <vector>

namespace fedmark::data {

// Image geometry. Pixels are stored channel-major (CHW).
struct ImageShape {
  int height = 0;
  int width = 0;
  int channels = 1;

  std::size_t pixels() const {
    return static_cast<std::size_t>(height) * width * channels;
  }
  bool operator==(const ImageShape&) const = default;
};

// A labelled image collection with contiguous storage. Every image has the
// same shape, every pixel is in [0, 1] and every label is in [0, k).
class Dataset {
 public:
  Dataset() = default;
  Dataset(ImageShape shape, int num_classes);

  const ImageShape& shape() const { return shape_; }
  int num_classes() const { return num_classes_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

  std::span<const float> image(std::size_t i) const {
    return {pixels_.data() + i * shape_.pixels(), shape_.pixels()};
  }
  std::span<float> mutable_image(std::size_t i) {
    return {pixels_.data() + i * shape_.pixels(), shape_.pixels()};
  }
  int label(std::size_t i) const { return labels_[i]; }

  const std::vector<float>& pixels() const { return pixels_; }
  const std::vector<int>& labels() const { return labels_; }

  void Reserve(std::size_t n);
  // Throws DimensionError on a shape mismatch and InputError on a label
  // outside [0, k).
  void Add(std::span<const float> image, int label);
  void Append(const Dataset& other);
  Dataset Subset(std::span<const std::size_t> indices) const;

  bool operator==(const Dataset&) const = default;

 private:
  ImageShape shape_;
  int num_classes_ = 0;
  std::vector<float> pixels_;
  std::vector<int> labels_;
};

}  // namespace fedmark::data

#endif  // FEDMARK_DATA_DATASET_H_
