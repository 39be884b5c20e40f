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

#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "fedmark/common/error.h"
#include "fedmark/trigger/trigger.h"
#include "support/oracles.h"
#include "support/trigger_props.h"

namespace fedmark::trigger {
namespace {

TEST(ValidatePatchParams, Examples) {
  EXPECT_TRUE(ValidatePatchParams(10, 4, 4, 32, 32));
  const auto few_cells = ValidatePatchParams(10, 3, 3, 32, 32);
  EXPECT_FALSE(few_cells);
  EXPECT_NE(few_cells.violation.find("k"), std::string::npos);
  const auto too_fine = ValidatePatchParams(10, 40, 40, 32, 32);
  EXPECT_FALSE(too_fine);
  EXPECT_FALSE(too_fine.violation.empty());
  EXPECT_NE(too_fine.violation, few_cells.violation);
}

TEST(KeyGen, FullPermutationWhenKEqualsCells) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto key = KeyGen(4, 2, 2, seed);
    std::set<int> cells(key.location_key.begin(), key.location_key.end());
    EXPECT_EQ(cells, (std::set<int>{0, 1, 2, 3}));
  }
}

TEST(KeyGen, SatisfiesInvariantsAndIsDeterministic) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto key = KeyGen(10, 4, 4, seed);
    EXPECT_NO_THROW(ValidateKey(key, 28, 28));
    EXPECT_EQ(key, KeyGen(10, 4, 4, seed));
    std::vector<std::uint16_t> ck = key.class_key;
    std::sort(ck.begin(), ck.end());
    for (int c = 0; c < 10; ++c) EXPECT_EQ(ck[c], c);
  }
  EXPECT_THROW(KeyGen(10, 3, 3, 1), ConfigError);
}

TEST(KeyGen, LocationKeysAreUniformOverOrderedPairs) {
  constexpr int kSeeds = 10000;
  std::map<std::pair<int, int>, int> counts;
  for (int seed = 0; seed < kSeeds; ++seed) {
    const auto key = KeyGen(2, 2, 2, seed);
    ++counts[{key.location_key[0], key.location_key[1]}];
  }
  ASSERT_EQ(counts.size(), 12u);
  // Pearson chi-square with 11 degrees of freedom; 31.26 is the 0.999 quantile.
  const double expected = kSeeds / 12.0;
  double chi2 = 0.0;
  for (const auto& [pair, n] : counts) chi2 += (n - expected) * (n - expected) / expected;
  EXPECT_LT(chi2, 31.26);
}

TEST(ValidateKey, RejectsBrokenKeys) {
  SecretKey key = KeyGen(3, 2, 2, 1);
  SecretKey dup = key;
  dup.location_key[1] = dup.location_key[0];
  EXPECT_THROW(ValidateKey(dup, 8, 8), ConfigError);
  SecretKey range = key;
  range.location_key[0] = 4;
  EXPECT_THROW(ValidateKey(range, 8, 8), ConfigError);
  SecretKey perm = key;
  perm.class_key = {0, 0, 1};
  EXPECT_THROW(ValidateKey(perm, 8, 8), ConfigError);
  EXPECT_THROW(ValidateKey(key, 1, 1), ConfigError);
}

TEST(TrigCons, SizeIsKTimesT) {
  const auto key = KeyGen(10, 4, 4, 3);
  EXPECT_EQ(TrigCons(key, 10, {28, 28, 1}, 5).size(), 100u);
}

TEST(TrigCons, SmallestInstance) {
  SecretKey key{2, 2, 2, {3, 1}, {1, 0}};
  const auto set = TrigCons(key, 1, {32, 32, 1}, 9);
  ASSERT_EQ(set.size(), 2u);
  EXPECT_EQ(set.samples.label(0), 1);
  EXPECT_EQ(set.samples.label(1), 0);
  auto in_cell = [](int cell, int y, int x) { return (y / 16) * 2 + x / 16 == cell; };
  int nonzero_first = 0;
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) {
      const float a = set.samples.image(0)[y * 32 + x];
      const float b = set.samples.image(1)[y * 32 + x];
      if (!in_cell(3, y, x)) {
        EXPECT_EQ(a, 0.0f);
      }
      if (!in_cell(3, y, x) && !in_cell(1, y, x)) {
        EXPECT_EQ(b, 0.0f);
      }
      if (in_cell(3, y, x)) {
        EXPECT_EQ(a, b);
        nonzero_first += a != 0.0f;
      }
    }
  }
  EXPECT_GT(nonzero_first, 200);
  const auto cell = CellGeometry(key, {32, 32, 1}, 3);
  EXPECT_EQ(cell.row, 16);
  EXPECT_EQ(cell.col, 16);
  EXPECT_EQ(cell.height, 16);
  EXPECT_EQ(cell.width, 16);
}

TEST(TrigCons, PatternStatistics) {
  const auto key = KeyGen(1, 1, 1, 0);
  const auto set = TrigCons(key, 50, {32, 32, 1}, 4);
  double sum = 0.0;
  std::size_t n = 0;
  for (float v : set.samples.pixels()) {
    ASSERT_GE(v, 0.0f);
    ASSERT_LE(v, 1.0f);
    sum += v;
    ++n;
  }
  EXPECT_NEAR(sum / n, kPatternMean, 0.01);
}

TEST(TrigCons, BitReproducible) {
  const auto key = KeyGen(5, 3, 3, 2);
  EXPECT_EQ(TrigCons(key, 4, {20, 20, 3}, 8).samples, TrigCons(key, 4, {20, 20, 3}, 8).samples);
  EXPECT_NE(TrigCons(key, 4, {20, 20, 3}, 8).samples, TrigCons(key, 4, {20, 20, 3}, 9).samples);
}

TEST(TrigCons, RejectsInvalidParameters) {
  const auto key = KeyGen(10, 4, 4, 1);
  EXPECT_THROW(TrigCons(key, 0, {28, 28, 1}, 1), ConfigError);
  EXPECT_THROW(TrigCons(key, 1, {3, 3, 1}, 1), ConfigError);
}

TEST(TrigCons, InvariantsHoldForRandomTuples) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto tuple = testing::RandomTriggerTuple(seed);
    const auto set =
        TrigCons(tuple.key, tuple.patterns_per_class, tuple.shape, tuple.pattern_seed);
    ASSERT_EQ(testing::TriggerInvariantViolation(tuple, set), "") << "seed " << seed;
  }
}

TEST(KeyspaceSize, Examples) {
  EXPECT_EQ(KeyspaceSize(1, 1), 1);
  EXPECT_EQ(KeyspaceSize(2, 2), 4);
  EXPECT_EQ(KeyspaceSize(3, 4), 144);
  EXPECT_EQ(testing::EnumeratedKeyspace(3, 4), 144u);
  EXPECT_EQ(KeyspaceSize(10, 16).str(), testing::FactorialKeyspace(10, 16));
  EXPECT_THROW(KeyspaceSize(5, 4), InputError);
}

TEST(KeyspaceSize, MatchesEnumerationOnSmallGrids) {
  for (int m = 1; m <= 6; ++m) {
    for (int k = 1; k <= m; ++k) {
      EXPECT_EQ(KeyspaceSize(k, m), testing::EnumeratedKeyspace(k, m)) << k << "," << m;
      EXPECT_EQ(KeyspaceSize(k, m).str(), testing::FactorialKeyspace(k, m));
    }
  }
}

TEST(ForgeProbability, Examples) {
  EXPECT_DOUBLE_EQ(ForgeProbability(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(ForgeProbability(2, 1), 0.25);
  EXPECT_NEAR(ForgeProbability(10, 1000), 1e-13, 1e-26);
}

TEST(KeyFile, RoundTripAndCorruption) {
  const StoredKey stored{KeyGen(10, 4, 4, 6), 0x0123456789abcdefull};
  const auto bytes = EncodeKey(stored);
  EXPECT_EQ(bytes.size(), 4u + 1 + 6 + 40 + 8);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "FMSK");
  EXPECT_EQ(DecodeKey(bytes), stored);
  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(DecodeKey(bad), FormatError);
  auto truncated = bytes;
  truncated.pop_back();
  EXPECT_THROW(DecodeKey(truncated), FormatError);

  const auto path = std::filesystem::temp_directory_path() / "fedmark_trigger_test.fmsk";
  SaveKey(stored, path);
  EXPECT_EQ(LoadKey(path), stored);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace fedmark::trigger
