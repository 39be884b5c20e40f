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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fedmark/common/error.h"
#include "fedmark/harness/config.h"
#include "fedmark/harness/experiment.h"

namespace fedmark::harness {
namespace {

namespace fs = std::filesystem;

std::string ReadAll(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path TempDir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("fedmark_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

constexpr char kSmallIni[] = R"(
[dataset]
train_per_class = 30
test_per_class = 10
[fl]
clients = 4
per_round = 2
rounds = 2
client_lr = 0.05
[attacks]
finetune_epochs = 1
prune_rates = 0.1,0.5
quant_bits = 2,8
forge_attempts = 3
[seeds]
master = 42
)";

ExperimentConfig SmallConfig(const fs::path& out) {
  auto tree = ParseIni(kSmallIni);
  SetOverride(tree, "run.out", out.string());
  return BuildConfig(tree);
}

TEST(Config, DefaultsAndParsing) {
  const auto c = BuildConfig(ParseIni(kSmallIni));
  EXPECT_EQ(c.dataset.source, "synth");
  EXPECT_EQ(c.dataset.train_per_class, 30);
  EXPECT_EQ(c.fl.num_clients, 4);
  EXPECT_EQ(c.fl.clients_per_round, 2);
  EXPECT_FLOAT_EQ(c.fl.client_lr, 0.05f);
  EXPECT_EQ(c.attack.prune_rates, (std::vector<double>{0.1, 0.5}));
  EXPECT_EQ(c.attack.quant_bits, (std::vector<int>{2, 8}));
  EXPECT_EQ(c.trigger.mu, 4);
  EXPECT_EQ(c.model, "lenet-mini");
  EXPECT_EQ(c.seeds.master, 42u);
  EXPECT_NE(c.seeds.fl, 0u);
  EXPECT_NE(c.seeds.fl, c.seeds.key);

  const auto defaults = BuildConfig(ParseIni(""));
  EXPECT_EQ(defaults.fl.num_clients, 20);
  EXPECT_EQ(defaults.fl.clients_per_round, 5);
  EXPECT_EQ(defaults.fl.rounds, 40);
  EXPECT_DOUBLE_EQ(defaults.watermark.epsilon, std::ldexp(1.0, -32));
}

TEST(Config, UnknownKeysAndBadValuesAreConfigErrors) {
  EXPECT_THROW(ParseIni("[fl]\nclientz = 3\n"), ConfigError);
  EXPECT_THROW(ParseIni("[flx]\nclients = 3\n"), ConfigError);
  EXPECT_THROW(ParseIni("clients = 3\n"), ConfigError);
  EXPECT_THROW(BuildConfig(ParseIni("[fl]\nclients = many\n")), ConfigError);
  EXPECT_THROW(BuildConfig(ParseIni("[fl]\nsecure = maybe\n")), ConfigError);
  EXPECT_THROW(BuildConfig(ParseIni("[partition]\nkind = ring\n")), ConfigError);
  auto tree = ParseIni("");
  EXPECT_THROW(SetOverride(tree, "fl", "3"), ConfigError);
  EXPECT_THROW(SetOverride(tree, "fl.nope", "3"), ConfigError);
  EXPECT_THROW(ReadIniFile("/nonexistent/fedmark.ini"), ConfigError);
}

TEST(Config, OverridesWinOverFileValues) {
  auto tree = ParseIni(kSmallIni);
  SetOverride(tree, "fl.rounds", "7");
  SetOverride(tree, "trigger.mu", "6");
  const auto c = BuildConfig(tree);
  EXPECT_EQ(c.fl.rounds, 7);
  EXPECT_EQ(c.trigger.mu, 6);
}

TEST(Config, ToIniRoundTrips) {
  auto tree = ParseIni(kSmallIni);
  SetOverride(tree, "fl.lambda", "3.5");
  SetOverride(tree, "watermark.gamma", "0.4");
  SetOverride(tree, "partition.kind", "dirichlet");
  const auto c = BuildConfig(tree);
  const std::string ini = ToIni(c);
  const auto again = BuildConfig(ParseIni(ini));
  EXPECT_EQ(ToIni(again), ini);
  EXPECT_EQ(again.fl.lambda, 3.5);
  EXPECT_EQ(again.watermark.gamma, 0.4);
  EXPECT_EQ(again.seeds.ToString(), c.seeds.ToString());
}

TEST(Config, ValidationErrors) {
  auto bad = [](const std::string& key, const std::string& value) {
    auto tree = ParseIni(kSmallIni);
    SetOverride(tree, key, value);
    EXPECT_THROW(ValidateExperiment(BuildConfig(tree)), ConfigError) << key << "=" << value;
  };
  EXPECT_NO_THROW(ValidateExperiment(BuildConfig(ParseIni(kSmallIni))));
  bad("trigger.mu", "2");
  bad("trigger.mu", "40");
  bad("fl.per_round", "9");
  bad("dataset.source", "cifar");
  bad("dataset.source", "mnist");
  bad("watermark.epsilon", "0");
  bad("watermark.gamma", "1.5");
  bad("attacks.quant_bits", "1");
  bad("attacks.prune_rates", "1.2");
  bad("attacks.drop_threshold", "1");
  bad("trigger.verify_per_class", "50");
  bad("attacks.pst_elastic_sigma", "0");
}

TEST(RunExperiment, ProducesAllMetricsAndIsDeterministic) {
  const auto a_dir = TempDir("a");
  const auto b_dir = TempDir("b");
  const auto a = RunExperiment(SmallConfig(a_dir));
  RunExperiment(SmallConfig(b_dir));
  for (const char* file : {"clean_rounds.csv", "wm_rounds.csv", "attacks.csv", "summary.json",
                           "config.ini", "key.fmsk", "wm_model.fmmp", "clean_model.fmmp"}) {
    const auto bytes = ReadAll(a_dir / file);
    EXPECT_FALSE(bytes.empty()) << file;
    if (std::string(file) == "config.ini") continue;
    EXPECT_EQ(bytes, ReadAll(b_dir / file)) << file;
  }
  const auto j = nlohmann::json::parse(ReadAll(a_dir / "summary.json"));
  for (const char* key : {"effectiveness", "function_preservation", "false_positive",
                          "robustness", "ambiguity"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_FALSE(j.contains("failed_stage"));
  // finetune, two prune rates, two bit widths, pst
  EXPECT_EQ(j["robustness"].size(), 6u);
  EXPECT_EQ(a.attacks.size(), 6u);
  EXPECT_EQ(a.subset_size, 100);
  ASSERT_TRUE(a.forge.has_value());
  EXPECT_EQ(a.forge->attempts, 3u);

  const std::string rounds = ReadAll(a_dir / "wm_rounds.csv");
  EXPECT_EQ(rounds.substr(0, rounds.find('\n')),
            "round,test_acc,wm_acc,selected_clients,seeds");
  EXPECT_NE(rounds.find(a.seeds.ToString()), std::string::npos);
  const std::string attacks = ReadAll(a_dir / "attacks.csv");
  EXPECT_EQ(attacks.substr(0, attacks.find('\n')), "attack,param,wm_acc,test_acc,verdict,seeds");
  fs::remove_all(a_dir);
  fs::remove_all(b_dir);
}

TEST(RunExperiment, StageFailureKeepsPartialSummary) {
  const auto dir = TempDir("fail");
  fs::create_directories(dir / "clean_rounds.csv");  // a directory where a file must go
  try {
    RunExperiment(SmallConfig(dir));
    FAIL() << "expected a stage failure";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "clean");
  }
  const auto j = nlohmann::json::parse(ReadAll(dir / "summary.json"));
  EXPECT_EQ(j["failed_stage"], "clean");
  EXPECT_TRUE(j.contains("error"));
  fs::remove_all(dir);
}

TEST(SweepPatchParams, SingleSettingMatchesRunExperiment) {
  const auto dir = TempDir("sweep");
  auto config = SmallConfig(dir);
  config.attack.forge_attempts = 0;
  const auto rows = SweepPatchParams(config, {{4, 4}});
  ASSERT_EQ(rows.size(), 1u);
  ASSERT_TRUE(rows[0].summary.has_value());
  EXPECT_EQ(rows[0].patch_height, 7);
  config.out_dir = TempDir("single");
  const auto single = RunExperiment(config);
  EXPECT_EQ(rows[0].summary->watermarked.accuracy, single.watermarked.accuracy);
  EXPECT_EQ(rows[0].summary->wm_test_acc, single.wm_test_acc);
  EXPECT_EQ(ReadAll(dir / "mu4_nu4" / "wm_rounds.csv"), ReadAll(config.out_dir / "wm_rounds.csv"));
  const std::string table = ReadAll(dir / "patch_sweep.csv");
  EXPECT_EQ(table.substr(0, table.find(',')), "mu");
  fs::remove_all(dir);
  fs::remove_all(config.out_dir);
}

TEST(SweepPatchParams, RecordsPatchSizeAndContinuesPastFailures) {
  const auto dir = TempDir("sweep32");
  auto config = SmallConfig(dir);
  config.dataset.shape = {32, 32, 1};
  config.fl.rounds = 1;
  config.attack.prune_rates.clear();
  config.attack.quant_bits.clear();
  config.attack.finetune_epochs = 0;
  config.attack.forge_attempts = 0;
  const auto rows = SweepPatchParams(config, {{40, 40}, {16, 16}});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_FALSE(rows[0].summary.has_value());
  EXPECT_FALSE(rows[0].error.empty());
  ASSERT_TRUE(rows[1].summary.has_value()) << rows[1].error;
  EXPECT_EQ(rows[1].patch_height, 2);
  EXPECT_EQ(rows[1].patch_width, 2);
  const std::string table = ReadAll(dir / "patch_sweep.csv");
  EXPECT_NE(table.find("16,16,2,2,"), std::string::npos);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace fedmark::harness
