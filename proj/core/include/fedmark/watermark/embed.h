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

#ifndef FEDMARK_WATERMARK_EMBED_H_
#define FEDMARK_WATERMARK_EMBED_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fedmark/data/dataset.h"
#include "fedmark/nn/model.h"
#include "fedmark/nn/train.h"

namespace fedmark::wm {

// Trigger samples per batch when the configuration leaves it unset:
// max(1, batch_size / 4).
int DefaultInjectionCount(int batch_size);

// One epoch of batches for the initiator. The shard is shuffled exactly as
// nn::ShuffledBatches would and cut into runs of batch_size - injection
// samples; each batch then receives `injection` trigger samples taken
// round-robin from `trigger`, starting at `cursor` (advanced in place, so
// consecutive epochs continue the rotation). With an empty trigger this is
// nn::ShuffledBatches(shard, batch_size, epoch_seed).
//
// InputError on an empty shard or injection >= batch_size.
std::vector<nn::Batch> MixBatches(const data::Dataset& shard, const data::Dataset& trigger,
                                  int batch_size, int injection, std::uint64_t epoch_seed,
                                  std::size_t& cursor);

// Local training of the initiator on shard + trigger: `options.epochs`
// epochs of MixBatches followed by plain SGD. Returns the accumulated delta.
nn::Gradient TrainWithTrigger(const nn::ModelParams& model, const data::Dataset& shard,
                              const data::Dataset& trigger, const nn::TrainOptions& options,
                              int injection);

}  // namespace fedmark::wm

#endif  // FEDMARK_WATERMARK_EMBED_H_
