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

#include "fedmark/data/dataset.h"

#include <string>

#include "fedmark/common/error.h"

namespace fedmark::data {

Dataset::Dataset(ImageShape shape, int num_classes)
    : shape_(shape), num_classes_(num_classes) {
  if (shape.height <= 0 || shape.width <= 0 || shape.channels <= 0) {
    throw InputError("dataset image dimensions must be positive");
  }
  if (num_classes < 1) throw InputError("dataset needs at least one class");
}

void Dataset::Reserve(std::size_t n) {
  pixels_.reserve(n * shape_.pixels());
  labels_.reserve(n);
}

void Dataset::Add(std::span<const float> image, int label) {
  if (image.size() != shape_.pixels()) {
    throw DimensionError("image has " + std::to_string(image.size()) +
                         " pixels, dataset expects " +
                         std::to_string(shape_.pixels()));
  }
  if (label < 0 || label >= num_classes_) {
    throw InputError("label " + std::to_string(label) + " outside [0, " +
                     std::to_string(num_classes_) + ")");
  }
  pixels_.insert(pixels_.end(), image.begin(), image.end());
  labels_.push_back(label);
}

void Dataset::Append(const Dataset& other) {
  if (other.empty()) return;
  if (other.shape_ != shape_) throw DimensionError("appending dataset of a different shape");
  if (other.num_classes_ > num_classes_) {
    throw InputError("appending dataset with more classes");
  }
  pixels_.insert(pixels_.end(), other.pixels_.begin(), other.pixels_.end());
  labels_.insert(labels_.end(), other.labels_.begin(), other.labels_.end());
}

Dataset Dataset::Subset(std::span<const std::size_t> indices) const {
  Dataset out(shape_, num_classes_);
  out.Reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) throw InputError("subset index out of range");
    out.Add(image(i), label(i));
  }
  return out;
}

}  // namespace fedmark::data
