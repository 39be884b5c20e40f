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
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "fedmark/attacks/attacks.h"
#include "fedmark/common/error.h"
#include "fedmark/nn/model.h"
#include "fedmark/watermark/verify.h"
#include "support/generators.h"

namespace fedmark::attacks {
namespace {

nn::ModelParams FourParams(std::vector<float> values) {
  return {nn::Architecture::SoftmaxRegression({1, 1, 1}, 2), std::move(values)};
}

TEST(FineTune, DegenerateSettingsReturnModel) {
  const auto arch = nn::Architecture::LenetMini({16, 16, 1}, 3);
  const auto m = nn::InitModel(arch, 1);
  const auto d = testing::RandomDataset({16, 16, 1}, 3, 30, 2);
  EXPECT_EQ(FineTune(m, d, 0.01f, 0, 1), m);
  EXPECT_EQ(FineTune(m, d, 0.0f, 5, 1), m);
  EXPECT_NE(FineTune(m, d, 0.01f, 1, 1), m);
  EXPECT_EQ(FineTune(m, d, 0.01f, 2, 7), FineTune(m, d, 0.01f, 2, 7));
  EXPECT_THROW(FineTune(m, data::Dataset({16, 16, 1}, 3), 0.01f, 1, 1), InputError);
  EXPECT_THROW(FineTune(m, d, -0.1f, 1, 1), InputError);
}

TEST(Prune, Examples) {
  const auto m = FourParams({0.1f, -0.5f, 0.02f, 0.3f});
  EXPECT_EQ(Prune(m, 0.5).values, (std::vector<float>{0.0f, -0.5f, 0.0f, 0.3f}));
  EXPECT_EQ(Prune(m, 0.0).values, m.values);
  EXPECT_EQ(Prune(m, 1.0).values, std::vector<float>(4, 0.0f));
  EXPECT_THROW(Prune(m, 1.5), InputError);
  EXPECT_THROW(Prune(m, -0.1), InputError);
}

TEST(Prune, TiesGoToLowerIndex) {
  const auto m = FourParams({0.2f, -0.2f, 0.2f, 0.9f});
  EXPECT_EQ(Prune(m, 0.5).values, (std::vector<float>{0.0f, 0.0f, 0.2f, 0.9f}));
}

TEST(Prune, PerLayerScope) {
  const nn::Architecture arch({nn::LayerSpec::Dense(1), nn::LayerSpec::Dense(1)}, {1, 1, 1});
  const nn::ModelParams m{arch, {0.01f, 0.02f, 5.0f, 6.0f}};
  EXPECT_EQ(Prune(m, 0.5, PruneScope::kGlobal).values,
            (std::vector<float>{0.0f, 0.0f, 5.0f, 6.0f}));
  EXPECT_EQ(Prune(m, 0.5, PruneScope::kPerLayer).values,
            (std::vector<float>{0.0f, 0.02f, 0.0f, 6.0f}));
}

TEST(Prune, IdempotentAndComposable) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto arch = testing::RandomSmallArch(seed);
    const auto m = testing::RandomModel(arch, seed);
    const double r1 = (seed % 5) * 0.1, r2 = r1 + 0.3;
    const auto once = Prune(m, r1);
    EXPECT_EQ(Prune(once, r1), once);
    EXPECT_EQ(Prune(once, r2), Prune(m, r2));
    const auto twice = Prune(m, r2);
    const std::size_t zeros = std::count(twice.values.begin(), twice.values.end(), 0.0f);
    EXPECT_GE(zeros, static_cast<std::size_t>(r2 * m.values.size()));
  }
}

TEST(Quantise, Examples) {
  const auto q = Quantise(FourParams({0.0f, 1.0f, 0.4f, 0.7f}), 2);
  EXPECT_FLOAT_EQ(q.values[0], 0.0f);
  EXPECT_FLOAT_EQ(q.values[1], 1.0f);
  EXPECT_FLOAT_EQ(q.values[2], 1.0f / 3);
  EXPECT_FLOAT_EQ(q.values[3], 2.0f / 3);
  const auto constant = FourParams({0.25f, 0.25f, 0.25f, 0.25f});
  EXPECT_EQ(Quantise(constant, 3), constant);
  EXPECT_THROW(Quantise(constant, 1), InputError);
  EXPECT_THROW(Quantise(constant, 9), InputError);
}

TEST(Quantise, LevelCountAndIdempotence) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto arch = testing::RandomSmallArch(seed);
    const auto m = testing::RandomModel(arch, seed);
    for (int bits = 2; bits <= 8; ++bits) {
      const auto q = Quantise(m, bits);
      for (const auto& p : arch.plan()) {
        if (!p.has_params()) continue;
        const auto begin = q.values.begin() + p.offset;
        const std::set<float> levels(begin, begin + p.params());
        EXPECT_LE(levels.size(), std::size_t{1} << bits);
        const auto [lo, hi] = std::minmax_element(m.values.begin() + p.offset,
                                                  m.values.begin() + p.offset + p.params());
        EXPECT_EQ(*levels.begin(), *lo);
        EXPECT_EQ(*levels.rbegin(), *hi);
      }
      EXPECT_EQ(Quantise(q, bits), q) << "seed " << seed << " bits " << bits;
    }
  }
}

TEST(Attacks, LeaveInputModelUntouched) {
  const auto arch = nn::Architecture::LenetMini({16, 16, 1}, 3);
  const auto m = nn::InitModel(arch, 1);
  const auto copy = m;
  const auto d = testing::RandomDataset({16, 16, 1}, 3, 20, 2);
  FineTune(m, d, 0.05f, 1, 1);
  Prune(m, 0.3);
  Quantise(m, 4);
  EXPECT_EQ(m, copy);
  const auto dcopy = d;
  PstTransform(d, PstParams{});
  EXPECT_EQ(d, dcopy);
}

TEST(MedianFilter3, ConstantAndSpike) {
  const std::vector<float> constant(25, 0.7f);
  EXPECT_EQ(MedianFilter3(constant, 5, 5), constant);
  std::vector<float> spike(25, 0.0f);
  spike[12] = 1.0f;
  EXPECT_EQ(MedianFilter3(spike, 5, 5), std::vector<float>(25, 0.0f));
  EXPECT_THROW(MedianFilter3(spike, 4, 5), DimensionError);
}

TEST(PstTransform, IdentityParamsAreIdentity) {
  const auto d = testing::RandomDataset({16, 16, 3}, 4, 10, 1);
  EXPECT_EQ(PstTransform(d, PstParams::Identity()), d);
}

TEST(PstTransform, DefaultsPreserveShapeAndLabels) {
  const auto d = testing::RandomDataset({28, 28, 1}, 10, 20, 1);
  const auto out = PstTransform(d, PstParams{});
  EXPECT_EQ(out.shape(), d.shape());
  EXPECT_EQ(out.labels(), d.labels());
  EXPECT_NE(out.pixels(), d.pixels());
  EXPECT_EQ(out, PstTransform(d, PstParams{}));
  for (float v : out.pixels()) {
    EXPECT_GE(v, 0.0f);
    EXPECT_LE(v, 1.0f);
  }
}

TEST(PstTransform, RangeValidation) {
  auto bad = [](auto mutate) {
    PstParams p;
    mutate(p);
    EXPECT_THROW(ValidatePstParams(p), ConfigError);
  };
  EXPECT_NO_THROW(ValidatePstParams(PstParams{}));
  EXPECT_NO_THROW(ValidatePstParams(PstParams::Identity()));
  bad([](PstParams& p) { p.resize_scale = 0.0; });
  bad([](PstParams& p) { p.filter_stride = -1; });
  bad([](PstParams& p) { p.rotation_deg = 200; });
  bad([](PstParams& p) { p.translation = 1.0; });
  bad([](PstParams& p) { p.scale_min = 1.2; });
  bad([](PstParams& p) { p.elastic_alpha = -1; });
  bad([](PstParams& p) { p.elastic_sigma = 0; });
}

TEST(ForgeRandomTrigger, ExhaustiveSmallKeyspaceIsNearChance) {
  const data::ImageShape shape{16, 16, 1};
  const auto api = wm::MakeModelApi(nn::InitModel(nn::Architecture::LenetMini(shape, 2), 4));
  ForgeSpec spec;
  spec.num_classes = 2;
  spec.mu = 1;
  spec.nu = 2;
  spec.shape = shape;
  spec.attempts = 4;
  spec.seed = 3;
  const auto result = ForgeRandomTrigger(api, spec);
  EXPECT_TRUE(result.exhaustive);
  EXPECT_EQ(result.attempts, 4u);
  EXPECT_GE(result.best_accuracy, 0.4);
  EXPECT_LE(result.best_accuracy, 0.8);

  spec.exclude = result.best_key;
  const auto without = ForgeRandomTrigger(api, spec);
  EXPECT_EQ(without.attempts, 3u);
  EXPECT_NE(without.best_key, result.best_key);
}

TEST(ForgeRandomTrigger, SingleAttemptIsReproducible) {
  const data::ImageShape shape{16, 16, 1};
  const auto api = wm::MakeModelApi(nn::InitModel(nn::Architecture::LenetMini(shape, 10), 4));
  ForgeSpec spec;
  spec.shape = shape;
  spec.attempts = 1;
  spec.seed = 8;
  const auto a = ForgeRandomTrigger(api, spec);
  const auto b = ForgeRandomTrigger(api, spec);
  EXPECT_FALSE(a.exhaustive);
  EXPECT_EQ(a.best_accuracy, b.best_accuracy);
  EXPECT_EQ(a.best_key, b.best_key);
  spec.attempts = 0;
  EXPECT_THROW(ForgeRandomTrigger(api, spec), InputError);
}

AttackOutcome Outcome(double wm_after, double test_before, double test_after) {
  return {"prune", "0.5", 1.0, wm_after, test_before, test_after, std::nullopt};
}

TEST(RobustnessVerdict, Examples) {
  EXPECT_EQ(RobustnessVerdict(Outcome(0.99, 0.90, 0.895), 0.5), Verdict::kCase1Robust);
  EXPECT_EQ(RobustnessVerdict(Outcome(0.191, 0.90, 0.30), 0.5), Verdict::kCase2Robust);
  EXPECT_EQ(RobustnessVerdict(Outcome(0.05, 0.90, 0.89), 0.5), Verdict::kBroken);
  EXPECT_EQ(VerdictName(Verdict::kCase1Robust), "case1_robust");
  EXPECT_EQ(VerdictName(Verdict::kCase2Robust), "case2_robust");
  EXPECT_EQ(VerdictName(Verdict::kBroken), "broken");
  EXPECT_THROW(RobustnessVerdict(Outcome(0.5, 0.9, 0.9), 0.5, 0.0), InputError);
  EXPECT_THROW(RobustnessVerdict(Outcome(0.5, 0.9, 0.9), 0.5, 1.0), InputError);
}

TEST(WriteSweepCsv, Format) {
  std::ostringstream out;
  const std::vector<AttackOutcome> rows{Outcome(0.75, 0.9, 0.85)};
  WriteSweepCsv(out, rows);
  EXPECT_EQ(out.str(), "attack,param,wm_acc,test_acc\nprune,0.5,0.750000,0.850000\n");
}

}  // namespace
}  // namespace fedmark::attacks
