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

#ifndef FEDMARK_HARNESS_EXPERIMENT_H_
#define FEDMARK_HARNESS_EXPERIMENT_H_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fedmark/attacks/attacks.h"
#include "fedmark/common/error.h"
#include "fedmark/data/dataset.h"
#include "fedmark/data/partition.h"
#include "fedmark/fl/federation.h"
#include "fedmark/harness/config.h"
#include "fedmark/nn/model.h"
#include "fedmark/trigger/trigger.h"
#include "fedmark/watermark/threshold.h"
#include "fedmark/watermark/verify.h"

namespace fedmark::harness {

// A pipeline stage failed. The message names the stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error("stage '" + stage + "' failed: " + what), stage_(std::move(stage)) {}

  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct ExperimentData {
  // Data distributed to the clients.
  data::Dataset pool;
  // Withheld benign data, used by the fine-tuning attacker.
  data::Dataset holdout;
  data::Dataset test;
  std::shared_ptr<const data::ClientShards> shards;
};

// Loads or synthesises the data, splits off the holdout and partitions the
// rest.
ExperimentData LoadExperimentData(const ExperimentConfig& config);

struct WatermarkMaterial {
  trigger::StoredKey key;
  // D_s, trained into the initiator's batches.
  trigger::TriggerSet trigger;
  // Class-balanced subset of fresh patterns under the same key.
  data::Dataset verify_subset;
  wm::Threshold threshold;
  double gamma = 1.0;
};

// ConfigError when no threshold exists for the subset size and no gamma
// override is configured.
WatermarkMaterial MakeWatermark(const ExperimentConfig& config, const data::ImageShape& shape,
                                int num_classes);

// Same, from a persisted key instead of the configured key seed.
WatermarkMaterial MakeWatermark(const ExperimentConfig& config, const trigger::StoredKey& key,
                                const data::ImageShape& shape);

struct FlRun {
  nn::ModelParams model;
  std::vector<fl::RoundMetrics> history;
};

// Runs the federation; `trigger` null gives the clean baseline. `wm_eval`
// is only used for per-round metrics, which are also passed to `on_round`
// as each round completes.
FlRun TrainFederated(const ExperimentConfig& config, const ExperimentData& data,
                     const data::Dataset* trigger, const data::Dataset* wm_eval,
                     const std::function<void(const fl::RoundMetrics&)>& on_round = {});

struct AttackRow {
  attacks::AttackOutcome outcome;
  attacks::Verdict verdict = attacks::Verdict::kBroken;
};

// The configured fine-tune / prune / quantise / PST grid against `model`.
// Grid points run in parallel; rows come back in grid order.
std::vector<AttackRow> RunAttackGrid(const ExperimentConfig& config, const nn::ModelParams& model,
                                     const ExperimentData& data,
                                     const WatermarkMaterial& watermark);

// attack,param,wm_acc,test_acc,verdict,seeds
std::string AttacksCsv(const std::vector<AttackRow>& rows, const SeedTuple& seeds);

// round,test_acc,wm_acc,selected_clients,seeds
std::string RoundsCsv(const std::vector<fl::RoundMetrics>& rows, const SeedTuple& seeds);

struct ExperimentSummary {
  SeedTuple seeds;
  double gamma = 1.0;
  int subset_size = 0;
  // Effectiveness: watermarked model on the verification subset.
  wm::VerificationReport watermarked;
  double train_trigger_acc = 0.0;
  // False positives: clean model on the same subset.
  wm::VerificationReport clean;
  double clean_test_acc = 0.0;
  double wm_test_acc = 0.0;
  std::vector<AttackRow> attacks;
  std::optional<attacks::ForgeResult> forge;
  double forge_gamma = 1.0;
  std::optional<std::string> failed_stage;
  std::string error;

  double delta_test_acc() const { return clean_test_acc - wm_test_acc; }
};

std::string SummaryToJson(const ExperimentSummary& summary);

// Clean baseline, watermarked run, evaluation, attack grid and forging.
// Writes config.ini, clean_rounds.csv, wm_rounds.csv, timing.csv,
// attacks.csv, summary.json, key.fmsk and both models under
// config.out_dir. On failure the partial summary is still written and
// StageError is thrown.
ExperimentSummary RunExperiment(const ExperimentConfig& config);

struct SweepRow {
  int mu = 0;
  int nu = 0;
  int patch_height = 0;
  int patch_width = 0;
  std::optional<ExperimentSummary> summary;
  std::string error;
};

// RunExperiment per (mu, nu) setting with shared seeds, each in
// out_dir/mu<mu>_nu<nu>. Failed settings are recorded and the sweep moves
// on. Writes out_dir/patch_sweep.csv.
std::vector<SweepRow> SweepPatchParams(const ExperimentConfig& config,
                                       const std::vector<std::pair<int, int>>& settings);

}  // namespace fedmark::harness

#endif  // FEDMARK_HARNESS_EXPERIMENT_H_
