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

#include "fedmark/watermark/embed.h"

#include <algorithm>

#include "fedmark/common/error.h"
#include "fedmark/common/random.h"

namespace fedmark::wm {

int DefaultInjectionCount(int batch_size) { return std::max(1, batch_size / 4); }

std::vector<nn::Batch> MixBatches(const data::Dataset& shard, const data::Dataset& trigger,
                                  int batch_size, int injection, std::uint64_t epoch_seed,
                                  std::size_t& cursor) {
  if (shard.empty()) throw InputError("initiator shard is empty");
  if (trigger.empty()) return nn::ShuffledBatches(shard, batch_size, epoch_seed);
  if (injection < 1 || injection >= batch_size) {
    throw InputError("trigger injection count must be in [1, batch_size)");
  }
  if (trigger.shape() != shard.shape()) throw DimensionError("trigger and shard shapes differ");

  Rng rng(epoch_seed);
  const auto order = ShuffledIndices(shard.size(), rng);
  const std::size_t run = static_cast<std::size_t>(batch_size - injection);
  std::vector<nn::Batch> batches;
  batches.reserve((order.size() + run - 1) / run);
  for (std::size_t start = 0; start < order.size(); start += run) {
    const std::size_t end = std::min(order.size(), start + run);
    nn::Batch batch;
    batch.reserve(end - start + injection);
    for (std::size_t i = start; i < end; ++i) {
      batch.push_back({shard.image(order[i]).data(), shard.label(order[i])});
    }
    for (int j = 0; j < injection; ++j) {
      const std::size_t t = cursor++ % trigger.size();
      batch.push_back({trigger.image(t).data(), trigger.label(t)});
    }
    batches.push_back(std::move(batch));
  }
  cursor %= trigger.size();
  return batches;
}

nn::Gradient TrainWithTrigger(const nn::ModelParams& model, const data::Dataset& shard,
                              const data::Dataset& trigger, const nn::TrainOptions& options,
                              int injection) {
  if (options.epochs < 1) throw InputError("local epochs must be >= 1");
  std::size_t cursor = 0;
  std::vector<nn::Batch> all;
  for (int e = 0; e < options.epochs; ++e) {
    auto epoch = MixBatches(shard, trigger, options.batch_size, injection,
                            nn::EpochSeed(options.seed, e), cursor);
    std::move(epoch.begin(), epoch.end(), std::back_inserter(all));
  }
  return nn::TrainOnBatches(model, all, options.learning_rate);
}

}  // namespace fedmark::wm
