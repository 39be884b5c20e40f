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

#include <gtest/gtest.h>

#include "fedmark/common/error.h"
#include "fedmark/watermark/threshold.h"
#include "support/oracles.h"
#include "support/simulation.h"

namespace fedmark::wm {
namespace {

TEST(ComputeThreshold, Examples) {
  EXPECT_FALSE(ComputeThreshold(10, 1, 0.05).possible);
  const auto one = ComputeThreshold(10, 1, 0.2);
  ASSERT_TRUE(one.possible);
  EXPECT_EQ(one.min_correct, 1);
  EXPECT_DOUBLE_EQ(one.gamma, 1.0);
  EXPECT_DOUBLE_EQ(one.false_positive, 0.1);

  const auto hundred = ComputeThreshold(10, 100, 1e-9);
  ASSERT_TRUE(hundred.possible);
  EXPECT_EQ(hundred.min_correct, testing::ExactMinCorrect(100, 10, 1e-9));
  EXPECT_DOUBLE_EQ(hundred.gamma, hundred.min_correct / 100.0);
  EXPECT_LE(hundred.false_positive, 1e-9);
  EXPECT_GT(BinomialUpperTail(100, hundred.min_correct - 1, 10), 1e-9);
}

TEST(ComputeThreshold, AgreesWithEnumerationOracle) {
  for (int k : {2, 3, 10}) {
    for (double eps : {0.2, 0.05, 1e-3, 1e-6}) {
      for (int n = 1; n <= 20; ++n) {
        const int want = testing::BruteForceMinCorrect(n, k, eps);
        const auto got = ComputeThreshold(k, n, eps);
        if (want < 0) {
          EXPECT_FALSE(got.possible) << k << " " << n << " " << eps;
        } else {
          ASSERT_TRUE(got.possible) << k << " " << n << " " << eps;
          EXPECT_EQ(got.min_correct, want) << k << " " << n << " " << eps;
        }
      }
    }
  }
}

TEST(ComputeThreshold, AgreesWithExactSummationAtLargerSizes) {
  for (int n : {50, 100, 200, 1000}) {
    for (double eps : {1e-3, 1e-9, std::ldexp(1.0, -32)}) {
      const auto got = ComputeThreshold(10, n, eps);
      ASSERT_TRUE(got.possible);
      EXPECT_EQ(got.min_correct, testing::ExactMinCorrect(n, 10, eps)) << n << " " << eps;
    }
  }
}

TEST(BinomialUpperTail, MatchesExactRationals) {
  for (int n : {1, 5, 20, 100}) {
    for (int d = 0; d <= n; d += std::max(1, n / 7)) {
      const double want = testing::ExactUpperTail(n, d, 10);
      EXPECT_NEAR(BinomialUpperTail(n, d, 10), want, 1e-14 * std::max(want, 1e-300)) << n << " " << d;
    }
  }
  EXPECT_DOUBLE_EQ(BinomialUpperTail(4, 0, 2), 1.0);
  EXPECT_DOUBLE_EQ(BinomialUpperTail(4, 4, 2), 1.0 / 16);
  EXPECT_DOUBLE_EQ(BinomialUpperTail(4, 5, 2), 0.0);
}

TEST(ComputeThreshold, MonotoneInSizeAndEpsilon) {
  for (int k : {2, 10}) {
    // d* never decreases with n and grows by at most one per extra sample.
    int previous_d = -1;
    for (int n = 1; n <= 300; ++n) {
      const auto t = ComputeThreshold(k, n, 1e-4);
      if (!t.possible) continue;
      if (previous_d >= 0) {
        EXPECT_GE(t.min_correct, previous_d) << n;
        EXPECT_LE(t.min_correct, previous_d + 1) << n;
      }
      previous_d = t.min_correct;
    }
    EXPECT_LT(ComputeThreshold(k, 300, 1e-4).gamma, ComputeThreshold(k, 30, 1e-4).gamma);
    double previous = 2.0;
    for (double eps : {1e-12, 1e-9, 1e-6, 1e-3, 0.01, 0.1, 0.4}) {
      const auto t = ComputeThreshold(k, 60, eps);
      ASSERT_TRUE(t.possible);
      EXPECT_LE(t.gamma, previous);
      previous = t.gamma;
    }
  }
}

TEST(ComputeThreshold, InputErrors) {
  EXPECT_THROW(ComputeThreshold(1, 10, 0.1), InputError);
  EXPECT_THROW(ComputeThreshold(10, 0, 0.1), InputError);
  EXPECT_THROW(ComputeThreshold(10, 10, 0.0), InputError);
  EXPECT_THROW(ComputeThreshold(10, 10, 1.0), InputError);
}

TEST(ComputeThreshold, RandomGuesserRarelyPasses) {
  constexpr int kTrials = 20000;
  for (const auto& [k, n, eps] : {std::tuple{2, 20, 0.05}, std::tuple{10, 10, 0.05},
                                  std::tuple{2, 20, 1e-3}}) {
    const auto t = ComputeThreshold(k, n, eps);
    ASSERT_TRUE(t.possible);
    const double rate = testing::RandomGuesserPassRate(k, n, t.gamma, kTrials, 99);
    EXPECT_LE(rate, eps + 3 * std::sqrt(eps * (1 - eps) / kTrials)) << k << " " << n;
    EXPECT_NEAR(rate, t.false_positive, 4 * std::sqrt(t.false_positive / kTrials) + 1e-9);
  }
}

}  // namespace
}  // namespace fedmark::wm
