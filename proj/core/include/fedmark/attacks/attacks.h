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

#ifndef FEDMARK_ATTACKS_ATTACKS_H_
#define FEDMARK_ATTACKS_ATTACKS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fedmark/data/dataset.h"
#include "fedmark/nn/model.h"
#include "fedmark/trigger/trigger.h"
#include "fedmark/watermark/verify.h"

namespace fedmark::attacks {

// Centralized SGD continuation. epochs == 0 or learning_rate == 0 returns
// the model unchanged. InputError on an empty dataset or a negative rate.
nn::ModelParams FineTune(const nn::ModelParams& model, const data::Dataset& data,
                         float learning_rate, int epochs, std::uint64_t seed,
                         int batch_size = 32);

enum class PruneScope { kGlobal, kPerLayer };

// Zeroes the floor(rate * d) smallest-magnitude parameters (biases
// included); ties go to the lower index. With kPerLayer the rule is applied
// to each parameterised layer separately. InputError unless 0 <= rate <= 1.
nn::ModelParams Prune(const nn::ModelParams& model, double rate,
                      PruneScope scope = PruneScope::kGlobal);

// Snaps every parameter of each layer (weights and biases together) to the
// nearest of 2^bits evenly spaced levels between the layer's min and max.
// Both endpoints are kept exactly; a constant layer is unchanged.
// InputError unless 2 <= bits <= 8.
nn::ModelParams Quantise(const nn::ModelParams& model, int bits);

struct PstParams {
  // Down/up resize factor; 1 disables the step.
  double resize_scale = 0.9;
  // Median-filter every filter_stride-th row and column; 0 disables.
  int filter_stride = 2;
  double rotation_deg = 10.0;
  // Maximum shift as a fraction of the image side.
  double translation = 0.1;
  double scale_min = 0.9;
  double scale_max = 1.1;
  // Elastic displacement magnitude in pixels; 0 disables.
  double elastic_alpha = 8.0;
  double elastic_sigma = 4.0;
  std::uint64_t seed = 0;

  static PstParams Identity();
};

// ConfigError when a field is outside its documented range.
void ValidatePstParams(const PstParams& params);

// 3 x 3 median (edge-replicated) of a single-channel image.
std::vector<float> MedianFilter3(std::span<const float> image, int height, int width);

// Resize, strided median filter, random affine, elastic distortion. Labels
// are kept and the output shape equals the input shape.
data::Dataset PstTransform(const data::Dataset& dataset, const PstParams& params);

struct ForgeSpec {
  int num_classes = 10;
  int mu = 4;
  int nu = 4;
  data::ImageShape shape;
  int patterns_per_class = 10;
  std::size_t attempts = 1000;
  std::uint64_t seed = 0;
  // Never tried when set.
  std::optional<trigger::SecretKey> exclude;
};

struct ForgeResult {
  double best_accuracy = 0.0;
  std::size_t attempts = 0;
  // True when the attempts covered the whole keyspace.
  bool exhaustive = false;
  trigger::SecretKey best_key;
};

// Builds candidate trigger sets from random keys and patterns and scores
// the API against their labels. When `attempts` covers the keyspace every
// key is tried once instead. InputError if attempts == 0.
ForgeResult ForgeRandomTrigger(const wm::ModelApi& api, const ForgeSpec& spec);

enum class Verdict { kCase1Robust, kCase2Robust, kBroken };
std::string VerdictName(Verdict v);

inline constexpr double kDefaultDropThreshold = 0.10;

struct AttackOutcome {
  std::string attack;
  std::string param;
  double wm_before = 0.0;
  double wm_after = 0.0;
  double test_before = 0.0;
  double test_after = 0.0;
  std::optional<nn::ModelParams> model;
};

// Case 1 if verification still passes and the test accuracy drop is at
// most delta; case 2 if the drop exceeds delta; broken otherwise.
// InputError unless 0 < delta < 1.
Verdict RobustnessVerdict(const AttackOutcome& outcome, double gamma,
                          double delta = kDefaultDropThreshold);

// attack,param,wm_acc,test_acc
void WriteSweepCsv(std::ostream& out, std::span<const AttackOutcome> rows);

}  // namespace fedmark::attacks

#endif  // FEDMARK_ATTACKS_ATTACKS_H_
