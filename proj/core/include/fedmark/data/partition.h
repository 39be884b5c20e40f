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

#ifndef FEDMARK_DATA_PARTITION_H_
#define FEDMARK_DATA_PARTITION_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fedmark/data/dataset.h"

namespace fedmark::data {

enum class PartitionKind { kIid, kDirichlet, kPathological };

struct PartitionSpec {
  PartitionKind kind = PartitionKind::kIid;
  int num_clients = 1;
  // Dirichlet concentration, used by kDirichlet.
  double alpha = 0.5;
  // Parts (hence distinct labels) per client, used by kPathological.
  int labels_per_client = 2;
  std::uint64_t seed = 0;
};

PartitionKind ParsePartitionKind(const std::string& name);
std::string PartitionKindName(PartitionKind kind);

// Disjoint client shards covering the input exactly.
struct ClientShards {
  std::vector<Dataset> shards;
  // indices[i] are the positions in the source dataset held by client i.
  std::vector<std::vector<std::size_t>> indices;

  std::size_t count(std::size_t client) const { return shards[client].size(); }
};

// Splits a dataset among spec.num_clients clients.
//
//  * kIid: uniform random disjoint split; shard sizes differ by at most one.
//  * kDirichlet: per class, client proportions ~ Dir(alpha); floor counts are
//    assigned and the remainder is dealt round-robin. Draws are repeated
//    until every client holds at least one sample.
//  * kPathological: the label-sorted data is cut into t*N parts that never
//    straddle a label boundary; each client takes t random parts, so it sees
//    at most t labels.
//
// Throws InputError when the dataset is too small for the request.
ClientShards Partition(const Dataset& dataset, const PartitionSpec& spec);

}  // namespace fedmark::data

#endif  // FEDMARK_DATA_PARTITION_H_
