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

#ifndef FEDMARK_DATA_TRANSFORM_H_
#define FEDMARK_DATA_TRANSFORM_H_

#include <span>
#include <vector>

#include "fedmark/data/dataset.h"

namespace fedmark::data {

// Bilinear resampling of one CHW image with corner alignment: output corners
// land exactly on input corners, so corner pixels are preserved.
std::vector<float> ResizeImage(std::span<const float> image, const ImageShape& from,
                               int height, int width);

// Resizes every image of the dataset; labels are unchanged. Resizing to the
// current size returns an identical copy. Non-positive targets are
// InputError.
Dataset ResizeTo(const Dataset& dataset, int height, int width);

}  // namespace fedmark::data

#endif  // FEDMARK_DATA_TRANSFORM_H_
