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

#include <csignal>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fedmark/common/error.h"
#include "fedmark/fl/metrics.h"
#include "fedmark/harness/config.h"
#include "fedmark/harness/experiment.h"
#include "fedmark/nn/serialize.h"
#include "fedmark/trigger/trigger.h"
#include "fedmark/watermark/verify.h"
#include "process_api.h"

namespace fedmark::tools {
namespace {

constexpr int kExitConfig = 2;
constexpr int kExitStage = 3;

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string dataset;
  std::string partition;
  std::vector<std::string> sets;
};

void AddCommon(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "INI experiment file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--dataset", o.dataset, "Dataset source")
      ->check(CLI::IsMember({"mnist", "synth"}));
  cmd->add_option("--partition", o.partition, "Client partition")
      ->check(CLI::IsMember({"iid", "dirichlet", "pathological"}));
  cmd->add_option("--set", o.sets, "Override a config value: section.key=value");
}

harness::ExperimentConfig LoadConfig(const CommonOptions& o) {
  boost::property_tree::ptree tree;
  if (!o.config.empty()) tree = harness::ReadIniFile(o.config);
  if (o.seed) harness::SetOverride(tree, "seeds.master", std::to_string(*o.seed));
  if (!o.out.empty()) harness::SetOverride(tree, "run.out", o.out);
  if (!o.dataset.empty()) harness::SetOverride(tree, "dataset.source", o.dataset);
  if (!o.partition.empty()) harness::SetOverride(tree, "partition.kind", o.partition);
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects section.key=value");
    harness::SetOverride(tree, s.substr(0, eq), s.substr(eq + 1));
  }
  auto config = harness::BuildConfig(tree);
  harness::ValidateExperiment(config);
  return config;
}

data::ImageShape ConfiguredShape(const harness::ExperimentConfig& c) {
  return c.dataset.source == "mnist" ? data::ImageShape{28, 28, 1} : c.dataset.shape;
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

int RunTraining(const CommonOptions& o, bool embed) {
  const auto config = LoadConfig(o);
  std::filesystem::create_directories(config.out_dir);
  const auto data = harness::LoadExperimentData(config);
  const auto watermark =
      harness::MakeWatermark(config, data.pool.shape(), data.pool.num_classes());
  std::cout << fl::RoundsCsvHeader(true) << '\n';
  auto stream = [](const fl::RoundMetrics& m) {
    std::cout << fl::RoundsCsvRow(m, true) << std::endl;
  };
  const auto run = harness::TrainFederated(
      config, data, embed ? &watermark.trigger.samples : nullptr, &watermark.verify_subset, stream);
  const std::string prefix = embed ? "wm" : "clean";
  WriteFile(config.out_dir / (prefix + "_rounds.csv"), harness::RoundsCsv(run.history, config.seeds));
  nn::SaveModel(run.model, config.out_dir / (prefix + "_model.fmmp"));
  if (embed) {
    trigger::SaveKey(watermark.key, config.out_dir / "key.fmsk");
    const auto report =
        wm::Verify(wm::MakeModelApi(run.model), watermark.verify_subset, watermark.gamma);
    std::cerr << wm::ReportToJson(report) << '\n';
  }
  return 0;
}

int RunAttack(const CommonOptions& o, const std::string& model_path, const std::string& key_path) {
  const auto config = LoadConfig(o);
  std::filesystem::create_directories(config.out_dir);
  const auto model =
      nn::LoadModel(model_path.empty() ? config.out_dir / "wm_model.fmmp" : std::filesystem::path(model_path));
  const auto key = trigger::LoadKey(key_path.empty() ? config.out_dir / "key.fmsk" : std::filesystem::path(key_path));
  const auto data = harness::LoadExperimentData(config);
  const auto watermark = harness::MakeWatermark(config, key, data.pool.shape());
  const auto rows = harness::RunAttackGrid(config, model, data, watermark);
  const std::string csv = harness::AttacksCsv(rows, config.seeds);
  WriteFile(config.out_dir / "attacks.csv", csv);
  std::cout << csv;
  return 0;
}

struct VerifyOptions {
  std::string model;
  std::string api_cmd;
  std::string serve_model;
  std::string key;
  std::optional<double> gamma;
};

int RunVerify(const CommonOptions& o, const VerifyOptions& v) {
  if (!v.serve_model.empty()) {
    const auto model = nn::LoadModel(v.serve_model);
    const std::size_t pixels = model.arch.input_shape().pixels();
    wm::ServeModelStream(wm::MakeModelApi(model), pixels, std::cin, std::cout);
    return 0;
  }
  auto config = LoadConfig(o);
  if (v.gamma) config.watermark.gamma = *v.gamma;
  const auto key = trigger::LoadKey(v.key.empty() ? config.out_dir / "key.fmsk" : std::filesystem::path(v.key));
  const auto watermark = harness::MakeWatermark(config, key, ConfiguredShape(config));
  wm::VerificationReport report;
  if (!v.api_cmd.empty()) {
    ProcessApi endpoint(v.api_cmd);
    report = wm::Verify(endpoint.api(), watermark.verify_subset, watermark.gamma);
  } else {
    const std::string path =
        v.model.empty() ? (config.out_dir / "wm_model.fmmp").string() : v.model;
    report = wm::Verify(wm::MakeModelApi(nn::LoadModel(path)), watermark.verify_subset,
                        watermark.gamma);
  }
  std::cout << wm::ReportToJson(report) << '\n';
  return 0;
}

std::vector<std::pair<int, int>> ParseSettings(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = item.find('x');
    try {
      if (x == std::string::npos) throw std::invalid_argument(item);
      std::size_t used = 0;
      const int mu = std::stoi(item.substr(0, x), &used);
      if (used != x) throw std::invalid_argument(item);
      const std::string rest = item.substr(x + 1);
      const int nu = std::stoi(rest, &used);
      if (used != rest.size()) throw std::invalid_argument(item);
      out.emplace_back(mu, nu);
    } catch (const std::exception&) {
      throw ConfigError("patch setting must look like MUxNU, got '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("no patch settings given");
  return out;
}

int RunSweep(const CommonOptions& o, const std::string& settings) {
  const auto config = LoadConfig(o);
  const auto rows = harness::SweepPatchParams(config, ParseSettings(settings));
  std::ifstream in(config.out_dir / "patch_sweep.csv");
  std::cout << in.rdbuf();
  for (const auto& row : rows) {
    if (!row.error.empty()) return kExitStage;
  }
  return 0;
}

void PrintReport(const nlohmann::json& s, std::ostream& out) {
  char line[160];
  out << "seeds: " << s.value("seeds", "") << '\n';
  std::snprintf(line, sizeof(line), "gamma %.4f over n_s = %d\n", s.value("gamma", 0.0),
                s.value("n_s", 0));
  out << line;
  if (s.contains("effectiveness")) {
    const auto& e = s["effectiveness"];
    std::snprintf(line, sizeof(line), "effectiveness          wm_acc %.4f (train trigger %.4f)\n",
                  e.value("wm_acc", 0.0), e.value("train_trigger_acc", 0.0));
    out << line;
  }
  if (s.contains("function_preservation")) {
    const auto& f = s["function_preservation"];
    std::snprintf(line, sizeof(line),
                  "function preservation  clean %.4f  watermarked %.4f  delta %+.4f\n",
                  f.value("clean_test_acc", 0.0), f.value("wm_test_acc", 0.0),
                  f.value("delta_test_acc", 0.0));
    out << line;
  }
  if (s.contains("false_positive")) {
    std::snprintf(line, sizeof(line), "false positive         clean trigger acc %.4f\n",
                  s["false_positive"].value("clean_trigger_acc", 0.0));
    out << line;
  }
  if (s.contains("robustness")) {
    out << "robustness\n";
    for (const auto& r : s["robustness"]) {
      std::snprintf(line, sizeof(line), "  %-9s %-8s wm %.4f  test %.4f  %s\n",
                    r.value("attack", "").c_str(), r.value("param", "").c_str(),
                    r.value("wm_acc", 0.0), r.value("test_acc", 0.0),
                    r.value("verdict", "").c_str());
      out << line;
    }
  }
  if (s.contains("ambiguity") && s["ambiguity"].is_object()) {
    const auto& a = s["ambiguity"];
    std::snprintf(line, sizeof(line), "ambiguity              best forged %.4f over %d attempts\n",
                  a.value("best_forged_acc", 0.0), a.value("attempts", 0));
    out << line;
  }
  if (s.contains("failed_stage")) {
    out << "FAILED at stage " << s["failed_stage"].get<std::string>() << ": "
        << s.value("error", "") << '\n';
  }
}

int RunReport(const CommonOptions& o, const std::string& from) {
  std::filesystem::path dir;
  if (from.empty()) {
    const auto config = LoadConfig(o);
    harness::RunExperiment(config);
    dir = config.out_dir;
  } else {
    dir = from;
  }
  std::ifstream in(dir / "summary.json");
  if (!in) throw ConfigError("no summary.json in " + dir.string());
  nlohmann::json summary;
  try {
    summary = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("unreadable summary.json: ") + e.what());
  }
  std::ostringstream text;
  PrintReport(summary, text);
  WriteFile(dir / "report.txt", text.str());
  std::cout << text.str();
  return summary.contains("failed_stage") ? kExitStage : 0;
}

int Main(int argc, char** argv) {
  // A dead model endpoint must surface as a transport error, not a signal.
  std::signal(SIGPIPE, SIG_IGN);
  CLI::App app{"Backdoor watermarking for federated learning"};
  app.require_subcommand(1);
  CommonOptions common;

  auto* train = app.add_subcommand("train", "Federated training without a watermark");
  AddCommon(train, common);
  auto* embed = app.add_subcommand("embed", "Federated training with the initiator's watermark");
  AddCommon(embed, common);

  std::string model_path;
  std::string key_path;
  auto* attack = app.add_subcommand("attack", "Run the removal attack grid on a model");
  AddCommon(attack, common);
  attack->add_option("--model", model_path, "Model file (default OUT/wm_model.fmmp)");
  attack->add_option("--key", key_path, "Key file (default OUT/key.fmsk)");

  VerifyOptions verify_opts;
  auto* verify = app.add_subcommand("verify", "Black-box ownership verification");
  AddCommon(verify, common);
  auto* m = verify->add_option("--model", verify_opts.model, "Model file to query");
  auto* a = verify->add_option("--api-cmd", verify_opts.api_cmd,
                               "Shell command speaking the line protocol on stdin/stdout");
  auto* s = verify->add_option("--serve-model", verify_opts.serve_model,
                               "Answer line-protocol requests on stdin with this model");
  m->excludes(a)->excludes(s);
  a->excludes(s);
  verify->add_option("--key", verify_opts.key, "Key file (default OUT/key.fmsk)");
  verify->add_option("--gamma", verify_opts.gamma, "Explicit threshold")
      ->check(CLI::Range(0.0, 1.0));

  std::string settings = "4x4,6x6,16x16";
  auto* sweep = app.add_subcommand("sweep", "Compare patch grid settings");
  AddCommon(sweep, common);
  sweep->add_option("--settings", settings, "Comma-separated MUxNU list");

  std::string from;
  auto* report = app.add_subcommand("report", "Full pipeline with a summary report");
  AddCommon(report, common);
  report->add_option("--from", from, "Render an existing output directory instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*train) return RunTraining(common, false);
    if (*embed) return RunTraining(common, true);
    if (*attack) return RunAttack(common, model_path, key_path);
    if (*verify) return RunVerify(common, verify_opts);
    if (*sweep) return RunSweep(common, settings);
    if (*report) return RunReport(common, from);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitStage;
  }
  return kExitConfig;
}

}  // namespace
}  // namespace fedmark::tools

int main(int argc, char** argv) { return fedmark::tools::Main(argc, argv); }
