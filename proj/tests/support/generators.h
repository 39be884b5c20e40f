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

#ifndef FEDMARK_TESTS_SUPPORT_GENERATORS_H_
#define FEDMARK_TESTS_SUPPORT_GENERATORS_H_

#include <cstdint>
#include <vector>

#include "fedmark/data/dataset.h"
#include "fedmark/nn/model.h"
#include "fedmark/nn/train.h"

namespace fedmark::testing {

// Uniform [0, 1) pixels, uniform labels.
data::Dataset RandomDataset(const data::ImageShape& shape, int num_classes, std::size_t count,
                            std::uint64_t seed);

// Random small architecture exercising conv (stride 1 or 2), max-pool, relu
// and dense layers. Input sizes stay tiny so finite differences are cheap.
nn::Architecture RandomSmallArch(std::uint64_t seed);

// Parameters drawn uniformly from [-scale, scale].
nn::ModelParams RandomModel(const nn::Architecture& arch, std::uint64_t seed, float scale = 0.5f);

// Batch view over every sample of `dataset`.
nn::Batch AllSamples(const data::Dataset& dataset);

}  // namespace fedmark::testing

#endif  // FEDMARK_TESTS_SUPPORT_GENERATORS_H_
