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

#include <algorithm>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "fedmark/common/error.h"
#include "fedmark/data/partition.h"
#include "fedmark/data/synth.h"

namespace fedmark::data {
namespace {

// Checks disjointness, exact coverage and shard contents for any kind.
void ExpectExactCover(const Dataset& d, const ClientShards& cs, int clients) {
  ASSERT_EQ(cs.shards.size(), static_cast<std::size_t>(clients));
  ASSERT_EQ(cs.indices.size(), static_cast<std::size_t>(clients));
  std::vector<std::size_t> all;
  for (int c = 0; c < clients; ++c) {
    ASSERT_EQ(cs.indices[c].size(), cs.shards[c].size());
    EXPECT_EQ(cs.count(c), cs.shards[c].size());
    for (std::size_t j = 0; j < cs.indices[c].size(); ++j) {
      const std::size_t src = cs.indices[c][j];
      ASSERT_EQ(cs.shards[c].label(j), d.label(src));
      ASSERT_TRUE(std::equal(cs.shards[c].image(j).begin(), cs.shards[c].image(j).end(),
                             d.image(src).begin()));
    }
    all.insert(all.end(), cs.indices[c].begin(), cs.indices[c].end());
  }
  std::sort(all.begin(), all.end());
  ASSERT_EQ(all.size(), d.size());
  for (std::size_t i = 0; i < all.size(); ++i) ASSERT_EQ(all[i], i);
}

TEST(Partition, IidThousandOverHundredGivesTenEach) {
  const Dataset d = SynthDataset(10, 100, {4, 4, 1}, 1);
  const auto cs = Partition(d, {PartitionKind::kIid, 100, 0.5, 2, 7});
  ExpectExactCover(d, cs, 100);
  for (const auto& s : cs.shards) EXPECT_EQ(s.size(), 10u);
}

TEST(Partition, CoverageHoldsForAllKindsAndSeeds) {
  const Dataset d = SynthDataset(10, 37, {3, 3, 1}, 2);
  for (auto kind : {PartitionKind::kIid, PartitionKind::kDirichlet, PartitionKind::kPathological}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      for (int clients : {1, 3, 10, 17}) {
        SCOPED_TRACE(PartitionKindName(kind) + " seed " + std::to_string(seed) + " N " +
                     std::to_string(clients));
        const int t = std::max(2, (10 + clients - 1) / clients);
        ExpectExactCover(d, Partition(d, {kind, clients, 0.5, t, seed}), clients);
      }
    }
  }
}

TEST(Partition, IidSizesDifferByAtMostOne) {
  const Dataset d = SynthDataset(7, 13, {2, 2, 1}, 3);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto cs = Partition(d, {PartitionKind::kIid, 8, 0.5, 2, seed});
    std::size_t lo = d.size(), hi = 0;
    for (const auto& s : cs.shards) {
      lo = std::min(lo, s.size());
      hi = std::max(hi, s.size());
    }
    EXPECT_LE(hi - lo, 1u);
  }
}

TEST(Partition, PathologicalBoundsDistinctLabels) {
  const Dataset d = SynthDataset(10, 60, {2, 2, 1}, 4);
  for (int t : {1, 2, 3}) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      for (int clients : {5, 10, 20}) {
        if (t * clients < 10) continue;
        const auto cs = Partition(d, {PartitionKind::kPathological, clients, 0.5, t, seed});
        for (const auto& s : cs.shards) {
          std::set<int> labels(s.labels().begin(), s.labels().end());
          EXPECT_LE(labels.size(), static_cast<std::size_t>(t));
        }
      }
    }
  }
}

TEST(Partition, DirichletShardsAreNonEmptyAndSkewed) {
  const Dataset d = SynthDataset(10, 100, {2, 2, 1}, 5);
  const auto cs = Partition(d, {PartitionKind::kDirichlet, 10, 0.1, 2, 9});
  double max_share = 0.0;
  for (const auto& s : cs.shards) {
    ASSERT_FALSE(s.empty());
    std::vector<int> h(10, 0);
    for (int y : s.labels()) ++h[y];
    max_share = std::max(max_share, *std::max_element(h.begin(), h.end()) / double(s.size()));
  }
  EXPECT_GT(max_share, 0.5);
}

TEST(Partition, IidHistogramsMatchGlobalByChiSquare) {
  const Dataset d = SynthDataset(10, 2000, {1, 1, 1}, 6);
  const auto cs = Partition(d, {PartitionKind::kIid, 4, 0.5, 2, 1});
  for (const auto& s : cs.shards) {
    std::vector<double> h(10, 0.0);
    for (int y : s.labels()) ++h[y];
    double chi2 = 0.0;
    const double expected = s.size() / 10.0;
    for (double o : h) chi2 += (o - expected) * (o - expected) / expected;
    // 9 degrees of freedom; 27.88 is the 0.999 quantile.
    EXPECT_LT(chi2, 27.88);
  }
}

TEST(Partition, TooSmallDatasetIsInputError) {
  const Dataset d = SynthDataset(2, 2, {2, 2, 1}, 1);
  EXPECT_THROW(Partition(d, {PartitionKind::kIid, 5, 0.5, 2, 0}), InputError);
  EXPECT_THROW(Partition(d, {PartitionKind::kDirichlet, 5, 0.5, 2, 0}), InputError);
  const Dataset ten = SynthDataset(10, 1, {2, 2, 1}, 1);
  EXPECT_THROW(Partition(ten, {PartitionKind::kPathological, 2, 0.5, 2, 0}), InputError);
}

TEST(Partition, KindNamesRoundTrip) {
  for (auto kind : {PartitionKind::kIid, PartitionKind::kDirichlet, PartitionKind::kPathological}) {
    EXPECT_EQ(ParsePartitionKind(PartitionKindName(kind)), kind);
  }
  EXPECT_THROW(ParsePartitionKind("random"), Error);
}

}  // namespace
}  // namespace fedmark::data
