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

#include "fedmark/data/partition.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fedmark/common/error.h"
#include "fedmark/common/random.h"

namespace fedmark::data {
namespace {

constexpr int kDirichletMaxDraws = 1000;

std::vector<std::vector<std::size_t>> IndicesByClass(const Dataset& dataset) {
  std::vector<std::vector<std::size_t>> by_class(dataset.num_classes());
  for (std::size_t i = 0; i < dataset.size(); ++i) by_class[dataset.label(i)].push_back(i);
  return by_class;
}

std::vector<std::vector<std::size_t>> SplitIid(const Dataset& dataset, int n, Rng& rng) {
  const auto order = ShuffledIndices(dataset.size(), rng);
  std::vector<std::vector<std::size_t>> out(n);
  const std::size_t base = dataset.size() / n;
  const std::size_t extra = dataset.size() % n;
  std::size_t pos = 0;
  for (int c = 0; c < n; ++c) {
    const std::size_t len = base + (static_cast<std::size_t>(c) < extra ? 1 : 0);
    out[c].assign(order.begin() + pos, order.begin() + pos + len);
    pos += len;
  }
  return out;
}

std::vector<std::vector<std::size_t>> SplitDirichlet(const Dataset& dataset, int n,
                                                     double alpha, Rng& rng) {
  const auto by_class = IndicesByClass(dataset);
  std::gamma_distribution<double> gamma(alpha, 1.0);
  for (int draw = 0; draw < kDirichletMaxDraws; ++draw) {
    std::vector<std::vector<std::size_t>> out(n);
    std::size_t cursor = 0;
    for (const auto& members : by_class) {
      if (members.empty()) continue;
      std::vector<std::size_t> order = members;
      Shuffle(std::span<std::size_t>(order), rng);
      std::vector<double> p(n);
      double total = 0.0;
      for (double& v : p) total += (v = gamma(rng));
      if (!(total > 0.0)) {
        std::fill(p.begin(), p.end(), 1.0);
        total = n;
      }
      std::size_t pos = 0;
      for (int c = 0; c < n; ++c) {
        const auto take = static_cast<std::size_t>(std::floor(p[c] / total * order.size()));
        const std::size_t len = std::min(take, order.size() - pos);
        out[c].insert(out[c].end(), order.begin() + pos, order.begin() + pos + len);
        pos += len;
      }
      for (; pos < order.size(); ++pos) out[cursor++ % n].push_back(order[pos]);
    }
    if (std::all_of(out.begin(), out.end(), [](const auto& s) { return !s.empty(); })) {
      return out;
    }
  }
  throw InputError("Dirichlet partition left a client empty after repeated draws");
}

std::vector<std::vector<std::size_t>> SplitPathological(const Dataset& dataset, int n,
                                                         int t, Rng& rng) {
  const auto by_class = IndicesByClass(dataset);
  std::vector<std::size_t> present;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    if (!by_class[c].empty()) present.push_back(c);
  }
  const std::size_t parts = static_cast<std::size_t>(t) * n;
  if (parts < present.size()) {
    throw InputError("pathological partition needs t*N >= number of labels present");
  }
  if (parts > dataset.size()) throw InputError("dataset too small for t*N parts");

  // Parts per class: one each, the rest by largest remainder, capped by the
  // class size.
  const std::size_t spare = parts - present.size();
  std::vector<std::size_t> alloc(present.size(), 1);
  std::vector<double> remainder(present.size());
  std::size_t given = 0;
  for (std::size_t i = 0; i < present.size(); ++i) {
    const double quota = static_cast<double>(spare) * by_class[present[i]].size() /
                         static_cast<double>(dataset.size());
    const auto whole = std::min(static_cast<std::size_t>(quota),
                                by_class[present[i]].size() - 1);
    alloc[i] += whole;
    given += whole;
    remainder[i] = quota - std::floor(quota);
  }
  while (given < spare) {
    std::size_t best = present.size();
    for (std::size_t i = 0; i < present.size(); ++i) {
      if (alloc[i] >= by_class[present[i]].size()) continue;
      if (best == present.size() || remainder[i] > remainder[best]) best = i;
    }
    alloc[best] += 1;
    remainder[best] = -1.0;
    ++given;
  }

  std::vector<std::vector<std::size_t>> part_list;
  part_list.reserve(parts);
  for (std::size_t i = 0; i < present.size(); ++i) {
    const auto& members = by_class[present[i]];
    const std::size_t base = members.size() / alloc[i];
    const std::size_t extra = members.size() % alloc[i];
    std::size_t pos = 0;
    for (std::size_t p = 0; p < alloc[i]; ++p) {
      const std::size_t len = base + (p < extra ? 1 : 0);
      part_list.emplace_back(members.begin() + pos, members.begin() + pos + len);
      pos += len;
    }
  }
  auto order = ShuffledIndices(part_list.size(), rng);
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t p = 0; p < order.size(); ++p) {
    const auto& part = part_list[order[p]];
    auto& dst = out[p / t];
    dst.insert(dst.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace

PartitionKind ParsePartitionKind(const std::string& name) {
  if (name == "iid") return PartitionKind::kIid;
  if (name == "dirichlet" || name == "dn-iid") return PartitionKind::kDirichlet;
  if (name == "pathological" || name == "pn-iid") return PartitionKind::kPathological;
  throw ConfigError("unknown partition kind '" + name + "'");
}

std::string PartitionKindName(PartitionKind kind) {
  switch (kind) {
    case PartitionKind::kIid:
      return "iid";
    case PartitionKind::kDirichlet:
      return "dirichlet";
    case PartitionKind::kPathological:
      return "pathological";
  }
  return "unknown";
}

ClientShards Partition(const Dataset& dataset, const PartitionSpec& spec) {
  if (spec.num_clients < 1) throw InputError("partition needs at least one client");
  if (dataset.size() < static_cast<std::size_t>(spec.num_clients)) {
    throw InputError("dataset of " + std::to_string(dataset.size()) +
                     " samples is too small for " + std::to_string(spec.num_clients) +
                     " shards");
  }
  Rng rng(DeriveSeed(spec.seed, {0x7061727469ULL}));
  ClientShards out;
  switch (spec.kind) {
    case PartitionKind::kIid:
      out.indices = SplitIid(dataset, spec.num_clients, rng);
      break;
    case PartitionKind::kDirichlet:
      if (!(spec.alpha > 0.0)) throw InputError("Dirichlet alpha must be positive");
      out.indices = SplitDirichlet(dataset, spec.num_clients, spec.alpha, rng);
      break;
    case PartitionKind::kPathological:
      if (spec.labels_per_client < 1 || spec.labels_per_client > dataset.num_classes()) {
        throw InputError("labels per client must be in [1, k]");
      }
      out.indices =
          SplitPathological(dataset, spec.num_clients, spec.labels_per_client, rng);
      break;
  }
  out.shards.reserve(out.indices.size());
  for (const auto& idx : out.indices) out.shards.push_back(dataset.Subset(idx));
  return out;
}

}  // namespace fedmark::data
