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

#ifndef FEDMARK_DATA_SYNTH_H_
#define FEDMARK_DATA_SYNTH_H_

#include <cstdint>

#include "fedmark/data/dataset.h"

namespace fedmark::data {

inline constexpr float kSynthNoiseSigma = 0.1f;

// Desk-scale stand-in for an image classification task. Each class owns a
// smooth random prototype (a coarse uniform grid, bilinearly upsampled)
// derived from `seed`; samples are prototype + N(0, 0.1) pixel noise, clipped
// to [0, 1]. `split` selects an independent noise stream over the same
// prototypes, so split 0 and split 1 form a train/test pair.
//
// Samples are emitted class-interleaved: sample i has label i % k.
Dataset SynthDataset(int num_classes, int per_class, ImageShape shape,
                     std::uint64_t seed, std::uint64_t split = 0);

}  // namespace fedmark::data

#endif  // FEDMARK_DATA_SYNTH_H_
