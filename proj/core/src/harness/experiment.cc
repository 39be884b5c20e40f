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

#include "fedmark/harness/experiment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>

#include <nlohmann/json.hpp>

#include "fedmark/common/error.h"
#include "fedmark/common/parallel.h"
#include "fedmark/common/random.h"
#include "fedmark/data/io.h"
#include "fedmark/data/synth.h"
#include "fedmark/fl/metrics.h"
#include "fedmark/he/keys.h"
#include "fedmark/nn/serialize.h"

namespace fedmark::harness {
namespace {

constexpr std::uint64_t kHoldoutTag = 0x686f6c64;
constexpr std::uint64_t kHeTag = 0x6865;
constexpr std::uint64_t kFreshPatternTag = 0x66726573;
constexpr std::uint64_t kFineTuneTag = 0x6674;
constexpr std::uint64_t kForgeTag = 0x666f7267;

std::string Fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string Param(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

nlohmann::json ReportJson(const wm::VerificationReport& r) {
  return nlohmann::json::parse(wm::ReportToJson(r));
}

}  // namespace

std::string RoundsCsv(const std::vector<fl::RoundMetrics>& rows, const SeedTuple& seeds) {
  std::string out = fl::RoundsCsvHeader(false) + ",seeds\n";
  for (const auto& m : rows) out += fl::RoundsCsvRow(m, false) + "," + seeds.ToString() + "\n";
  return out;
}

std::string AttacksCsv(const std::vector<AttackRow>& rows, const SeedTuple& seeds) {
  std::string out = "attack,param,wm_acc,test_acc,verdict,seeds\n";
  for (const auto& row : rows) {
    const auto& o = row.outcome;
    out += o.attack + "," + o.param + "," + Fixed(o.wm_after) + "," + Fixed(o.test_after) + "," +
           attacks::VerdictName(row.verdict) + "," + seeds.ToString() + "\n";
  }
  return out;
}

ExperimentData LoadExperimentData(const ExperimentConfig& config) {
  const auto& d = config.dataset;
  data::Dataset train;
  ExperimentData out;
  if (d.source == "mnist") {
    train = data::LoadIdx(d.train_images, d.train_labels);
    out.test = data::LoadIdx(d.test_images, d.test_labels);
  } else {
    train = data::SynthDataset(d.num_classes, d.train_per_class, d.shape, config.seeds.data, 0);
    out.test = data::SynthDataset(d.num_classes, d.test_per_class, d.shape, config.seeds.data, 1);
  }
  Rng rng(DeriveSeed(config.seeds.data, {kHoldoutTag}));
  auto order = ShuffledIndices(train.size(), rng);
  const auto held = static_cast<std::size_t>(std::floor(d.holdout * train.size()));
  std::vector<std::size_t> holdout_idx(order.begin(), order.begin() + held);
  std::vector<std::size_t> pool_idx(order.begin() + held, order.end());
  std::sort(holdout_idx.begin(), holdout_idx.end());
  std::sort(pool_idx.begin(), pool_idx.end());
  out.holdout = train.Subset(holdout_idx);
  out.pool = train.Subset(pool_idx);
  out.shards = std::make_shared<const data::ClientShards>(data::Partition(out.pool, config.partition));
  return out;
}

WatermarkMaterial MakeWatermark(const ExperimentConfig& config, const data::ImageShape& shape,
                                int num_classes) {
  trigger::StoredKey key;
  key.key = trigger::KeyGen(num_classes, config.trigger.mu, config.trigger.nu, config.seeds.key);
  key.pattern_seed = config.seeds.pattern;
  return MakeWatermark(config, key, shape);
}

WatermarkMaterial MakeWatermark(const ExperimentConfig& config, const trigger::StoredKey& key,
                                const data::ImageShape& shape) {
  const int num_classes = key.key.num_classes;
  WatermarkMaterial w;
  w.key = key;
  w.trigger = trigger::TrigCons(w.key.key, config.trigger.patterns_per_class, shape,
                                key.pattern_seed);
  const auto fresh = trigger::TrigCons(w.key.key, config.trigger.verify_patterns_per_class, shape,
                                       DeriveSeed(key.pattern_seed, {kFreshPatternTag}));
  w.verify_subset =
      wm::BalancedSubset(fresh.samples, config.trigger.verify_per_class, config.seeds.verify);
  w.threshold = wm::ComputeThreshold(num_classes, static_cast<int>(w.verify_subset.size()),
                                     config.watermark.epsilon);
  if (config.watermark.gamma) {
    w.gamma = *config.watermark.gamma;
  } else if (w.threshold.possible) {
    w.gamma = w.threshold.gamma;
  } else {
    throw ConfigError("no verification threshold exists for n_s = " +
                      std::to_string(w.verify_subset.size()) +
                      " at the configured epsilon; raise trigger.verify_per_class");
  }
  return w;
}

FlRun TrainFederated(const ExperimentConfig& config, const ExperimentData& data,
                     const data::Dataset* trigger, const data::Dataset* wm_eval,
                     const std::function<void(const fl::RoundMetrics&)>& on_round) {
  const auto arch =
      nn::Architecture::FromName(config.model, data.pool.shape(), data.pool.num_classes());
  auto state = fl::InitState(arch, data.shards, config.fl);
  std::optional<he::HeKeyPair> key;
  if (config.fl.secure) {
    key.emplace(he::HeKeygen(config.fl.he_scale_bits, DeriveSeed(config.seeds.fl, {kHeTag})));
  }
  fl::RoundEnv env;
  env.trigger = trigger;
  env.key = key ? &*key : nullptr;
  env.test = &data.test;
  env.wm_eval = wm_eval;
  if (on_round) env.observer = [&on_round](const fl::FlState& s) { on_round(s.history.back()); };
  state = fl::RunFederation(std::move(state), config.fl, env);
  return {std::move(state.global), std::move(state.history)};
}

std::vector<AttackRow> RunAttackGrid(const ExperimentConfig& config, const nn::ModelParams& model,
                                     const ExperimentData& data,
                                     const WatermarkMaterial& watermark) {
  const auto& a = config.attack;
  const double wm_before = nn::Evaluate(model, watermark.verify_subset);
  const double test_before = nn::Evaluate(model, data.test);

  struct Job {
    std::string attack;
    std::string param;
    std::function<std::pair<double, double>()> run;
  };
  auto on_model = [&](const nn::ModelParams& m) {
    return std::make_pair(nn::Evaluate(m, watermark.verify_subset), nn::Evaluate(m, data.test));
  };
  std::vector<Job> jobs;
  if (a.finetune_epochs > 0) {
    jobs.push_back({"finetune", std::to_string(a.finetune_epochs), [&] {
                      return on_model(attacks::FineTune(
                          model, data.holdout, a.finetune_lr, a.finetune_epochs,
                          DeriveSeed(config.seeds.attack, {kFineTuneTag}), config.fl.batch_size));
                    }});
  }
  for (double rate : a.prune_rates) {
    jobs.push_back({"prune", Param(rate),
                    [&, rate] { return on_model(attacks::Prune(model, rate, a.prune_scope)); }});
  }
  for (int bits : a.quant_bits) {
    jobs.push_back({"quantise", std::to_string(bits),
                    [&, bits] { return on_model(attacks::Quantise(model, bits)); }});
  }
  if (a.pst) {
    jobs.push_back({"pst", "default", [&] {
                      return std::make_pair(
                          nn::Evaluate(model, attacks::PstTransform(watermark.verify_subset,
                                                                    a.pst_params)),
                          nn::Evaluate(model, attacks::PstTransform(data.test, a.pst_params)));
                    }});
  }

  std::vector<AttackRow> rows(jobs.size());
  ParallelFor(jobs.size(), [&](std::size_t i) {
    auto& o = rows[i].outcome;
    o.attack = jobs[i].attack;
    o.param = jobs[i].param;
    o.wm_before = wm_before;
    o.test_before = test_before;
    std::tie(o.wm_after, o.test_after) = jobs[i].run();
    rows[i].verdict = attacks::RobustnessVerdict(o, watermark.gamma, a.drop_threshold);
  });
  return rows;
}

std::string SummaryToJson(const ExperimentSummary& s) {
  nlohmann::ordered_json j;
  j["seeds"] = s.seeds.ToString();
  j["gamma"] = s.gamma;
  j["n_s"] = s.subset_size;
  j["effectiveness"] = {{"wm_acc", s.watermarked.accuracy},
                        {"train_trigger_acc", s.train_trigger_acc},
                        {"report", ReportJson(s.watermarked)}};
  j["function_preservation"] = {{"clean_test_acc", s.clean_test_acc},
                                {"wm_test_acc", s.wm_test_acc},
                                {"delta_test_acc", s.delta_test_acc()}};
  j["false_positive"] = {{"clean_trigger_acc", s.clean.accuracy},
                         {"report", ReportJson(s.clean)}};
  auto robustness = nlohmann::ordered_json::array();
  for (const auto& row : s.attacks) {
    robustness.push_back({{"attack", row.outcome.attack},
                          {"param", row.outcome.param},
                          {"wm_acc", row.outcome.wm_after},
                          {"test_acc", row.outcome.test_after},
                          {"verdict", attacks::VerdictName(row.verdict)}});
  }
  j["robustness"] = robustness;
  if (s.forge) {
    j["ambiguity"] = {{"best_forged_acc", s.forge->best_accuracy},
                      {"attempts", s.forge->attempts},
                      {"exhaustive", s.forge->exhaustive},
                      {"gamma", s.forge_gamma},
                      {"forged", s.forge->best_accuracy >= s.forge_gamma}};
  } else {
    j["ambiguity"] = nullptr;
  }
  if (s.failed_stage) {
    j["failed_stage"] = *s.failed_stage;
    j["error"] = s.error;
  }
  return j.dump(2) + "\n";
}

ExperimentSummary RunExperiment(const ExperimentConfig& config) {
  ValidateExperiment(config);
  const auto& out = config.out_dir;
  std::filesystem::create_directories(out);
  WriteText(out / "config.ini", ToIni(config));

  ExperimentSummary summary;
  summary.seeds = config.seeds;
  auto stage = [&](const std::string& name, const std::function<void()>& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      summary.failed_stage = name;
      summary.error = e.what();
      try {
        WriteText(out / "summary.json", SummaryToJson(summary));
      } catch (const std::exception&) {
      }
      throw StageError(name, e.what());
    }
  };

  ExperimentData data;
  stage("data", [&] { data = LoadExperimentData(config); });
  const auto shape = data.pool.shape();
  const int k = data.pool.num_classes();
  WatermarkMaterial watermark;
  stage("keygen", [&] {
    watermark = MakeWatermark(config, shape, k);
    summary.gamma = watermark.gamma;
    summary.subset_size = static_cast<int>(watermark.verify_subset.size());
    trigger::SaveKey(watermark.key, out / "key.fmsk");
  });

  FlRun clean;
  FlRun marked;
  stage("clean", [&] {
    clean = TrainFederated(config, data, nullptr, &watermark.verify_subset);
    WriteText(out / "clean_rounds.csv", RoundsCsv(clean.history, config.seeds));
    nn::SaveModel(clean.model, out / "clean_model.fmmp");
  });
  stage("embed", [&] {
    marked = TrainFederated(config, data, &watermark.trigger.samples, &watermark.verify_subset);
    WriteText(out / "wm_rounds.csv", RoundsCsv(marked.history, config.seeds));
    nn::SaveModel(marked.model, out / "wm_model.fmmp");
    std::string timing = "run,round,wall_ms\n";
    for (const auto* run : {&clean, &marked}) {
      for (const auto& m : run->history) {
        timing += std::string(run == &clean ? "clean" : "watermarked") + "," +
                  std::to_string(m.round) + "," + Fixed(m.wall_ms) + "\n";
      }
    }
    WriteText(out / "timing.csv", timing);
  });
  stage("evaluate", [&] {
    summary.watermarked =
        wm::Verify(wm::MakeModelApi(marked.model), watermark.verify_subset, watermark.gamma);
    summary.clean =
        wm::Verify(wm::MakeModelApi(clean.model), watermark.verify_subset, watermark.gamma);
    summary.train_trigger_acc = nn::Evaluate(marked.model, watermark.trigger.samples);
    summary.clean_test_acc = nn::Evaluate(clean.model, data.test);
    summary.wm_test_acc = nn::Evaluate(marked.model, data.test);
  });
  stage("attacks", [&] {
    summary.attacks = RunAttackGrid(config, marked.model, data, watermark);
    WriteText(out / "attacks.csv", AttacksCsv(summary.attacks, config.seeds));
  });
  stage("forge", [&] {
    if (config.attack.forge_attempts == 0) return;
    attacks::ForgeSpec spec;
    spec.num_classes = k;
    spec.mu = config.trigger.mu;
    spec.nu = config.trigger.nu;
    spec.shape = shape;
    spec.patterns_per_class = config.trigger.patterns_per_class;
    spec.attempts = config.attack.forge_attempts;
    spec.seed = DeriveSeed(config.seeds.attack, {kForgeTag});
    spec.exclude = watermark.key.key;
    const auto threshold = wm::ComputeThreshold(
        k, k * config.trigger.patterns_per_class, config.watermark.epsilon);
    summary.forge_gamma = config.watermark.gamma ? *config.watermark.gamma
                          : threshold.possible   ? threshold.gamma
                                                 : 1.0;
    summary.forge = attacks::ForgeRandomTrigger(wm::MakeModelApi(marked.model), spec);
  });
  stage("write", [&] { WriteText(out / "summary.json", SummaryToJson(summary)); });
  return summary;
}

std::vector<SweepRow> SweepPatchParams(const ExperimentConfig& config,
                                       const std::vector<std::pair<int, int>>& settings) {
  std::vector<SweepRow> rows;
  std::filesystem::create_directories(config.out_dir);
  const data::ImageShape shape =
      config.dataset.source == "mnist" ? data::ImageShape{28, 28, 1} : config.dataset.shape;
  for (const auto& [mu, nu] : settings) {
    SweepRow row;
    row.mu = mu;
    row.nu = nu;
    row.patch_height = mu > 0 ? shape.height / mu : 0;
    row.patch_width = nu > 0 ? shape.width / nu : 0;
    ExperimentConfig c = config;
    c.trigger.mu = mu;
    c.trigger.nu = nu;
    c.out_dir = config.out_dir / ("mu" + std::to_string(mu) + "_nu" + std::to_string(nu));
    try {
      row.summary = RunExperiment(c);
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }

  std::string csv =
      "mu,nu,patch_h,patch_w,wm_acc,test_acc,delta_test_acc,clean_trigger_acc,pst_wm_acc,"
      "best_forged_acc,status,seeds\n";
  for (const auto& row : rows) {
    csv += std::to_string(row.mu) + "," + std::to_string(row.nu) + "," +
           std::to_string(row.patch_height) + "," + std::to_string(row.patch_width) + ",";
    if (row.summary) {
      const auto& s = *row.summary;
      std::string pst;
      for (const auto& a : s.attacks) {
        if (a.outcome.attack == "pst") pst = Fixed(a.outcome.wm_after);
      }
      csv += Fixed(s.watermarked.accuracy) + "," + Fixed(s.wm_test_acc) + "," +
             Fixed(s.delta_test_acc()) + "," + Fixed(s.clean.accuracy) + "," + pst + "," +
             (s.forge ? Fixed(s.forge->best_accuracy) : "") + ",ok,";
    } else {
      std::string reason = row.error;
      std::replace(reason.begin(), reason.end(), ',', ';');
      std::replace(reason.begin(), reason.end(), '\n', ' ');
      csv += ",,,,,,error: " + reason + ",";
    }
    csv += config.seeds.ToString() + "\n";
  }
  WriteText(config.out_dir / "patch_sweep.csv", csv);
  return rows;
}

}  // namespace fedmark::harness
