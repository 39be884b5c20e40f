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

#ifndef FEDMARK_HARNESS_CONFIG_H_
#define FEDMARK_HARNESS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "fedmark/attacks/attacks.h"
#include "fedmark/data/dataset.h"
#include "fedmark/data/partition.h"
#include "fedmark/fl/config.h"

namespace fedmark::harness {

struct DatasetConfig {
  // "synth" or "mnist".
  std::string source = "synth";
  std::filesystem::path train_images;
  std::filesystem::path train_labels;
  std::filesystem::path test_images;
  std::filesystem::path test_labels;
  int num_classes = 10;
  int train_per_class = 6000;
  int test_per_class = 1000;
  data::ImageShape shape{28, 28, 1};
  // Fraction of the training data withheld from the clients; it is the
  // attacker's fine-tuning set.
  double holdout = 0.1;
};

struct TriggerConfig {
  int mu = 4;
  int nu = 4;
  int patterns_per_class = 10;
  // Fresh patterns (same key) from which the verification subset is drawn.
  int verify_patterns_per_class = 20;
  int verify_per_class = 10;
};

struct WatermarkConfig {
  double epsilon = 0x1.0p-32;
  std::optional<double> gamma;
};

struct AttackConfig {
  std::vector<double> prune_rates{0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
  attacks::PruneScope prune_scope = attacks::PruneScope::kGlobal;
  std::vector<int> quant_bits{2, 3, 4, 5, 6, 7, 8};
  int finetune_epochs = 30;
  float finetune_lr = 0.01f;
  bool pst = true;
  attacks::PstParams pst_params;
  std::size_t forge_attempts = 1000;
  double drop_threshold = attacks::kDefaultDropThreshold;
};

// Every seed used by a run. Unset entries in the file are derived from
// `master`.
struct SeedTuple {
  std::uint64_t master = 1;
  std::uint64_t data = 0;
  std::uint64_t partition = 0;
  std::uint64_t fl = 0;
  std::uint64_t key = 0;
  std::uint64_t pattern = 0;
  std::uint64_t verify = 0;
  std::uint64_t attack = 0;

  // "master=..;data=..;..." in field order.
  std::string ToString() const;
};

struct ExperimentConfig {
  DatasetConfig dataset;
  data::PartitionSpec partition;
  std::string model = "lenet-mini";
  fl::FlConfig fl;
  TriggerConfig trigger;
  WatermarkConfig watermark;
  AttackConfig attack;
  SeedTuple seeds;
  std::filesystem::path out_dir = "fedmark-out";
};

// Parses INI text ("[section]" headers, "key = value" lines, ';' or '#'
// comments). Unknown sections or keys, malformed values and violated
// constraints are ConfigError.
boost::property_tree::ptree ParseIni(const std::string& text);
boost::property_tree::ptree ReadIniFile(const std::filesystem::path& path);

// Sets "section.key" to `value`, as a command-line override would.
void SetOverride(boost::property_tree::ptree& tree, const std::string& dotted_key,
                 const std::string& value);

ExperimentConfig BuildConfig(const boost::property_tree::ptree& tree);

// Structural checks plus existence of referenced files.
void ValidateExperiment(const ExperimentConfig& config);

// The canonical INI text of a config; BuildConfig(ParseIni(ToIni(c)))
// reproduces c.
std::string ToIni(const ExperimentConfig& config);

}  // namespace fedmark::harness

#endif  // FEDMARK_HARNESS_CONFIG_H_
