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

#include "fedmark/harness/config.h"

#include <charconv>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "fedmark/common/error.h"
#include "fedmark/common/random.h"
#include "fedmark/nn/model.h"
#include "fedmark/trigger/trigger.h"

namespace fedmark::harness {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& Schema() {
  static const std::map<std::string, std::set<std::string>> schema = {
      {"dataset",
       {"source", "train_images", "train_labels", "test_images", "test_labels", "classes",
        "train_per_class", "test_per_class", "height", "width", "channels", "holdout"}},
      {"partition", {"kind", "alpha", "labels_per_client"}},
      {"model", {"arch"}},
      {"fl",
       {"clients", "per_round", "client_lr", "server_lr", "local_epochs", "batch_size", "rounds",
        "lambda", "initiator", "secure", "he_scale_bits", "injection"}},
      {"trigger", {"mu", "nu", "patterns", "verify_patterns", "verify_per_class"}},
      {"watermark", {"epsilon", "gamma"}},
      {"attacks",
       {"prune_rates", "prune_scope", "quant_bits", "finetune_epochs", "finetune_lr", "pst",
        "pst_resize_scale", "pst_filter_stride", "pst_rotation_deg", "pst_translation",
        "pst_scale_min", "pst_scale_max", "pst_elastic_alpha", "pst_elastic_sigma",
        "forge_attempts", "drop_threshold"}},
      {"seeds", {"master", "data", "partition", "fl", "key", "pattern", "verify", "attack"}},
      {"run", {"out"}},
  };
  return schema;
}

void CheckKnown(const std::string& section, const std::string& key) {
  const auto& schema = Schema();
  const auto it = schema.find(section);
  if (it == schema.end()) throw ConfigError("unknown config section [" + section + "]");
  if (!it->second.contains(key)) {
    throw ConfigError("unknown config key '" + key + "' in [" + section + "]");
  }
}

std::string Trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& raw) {
  const std::string text = Trim(raw);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("config key '" + key + "' has malformed value '" + raw + "'");
  }
  return value;
}

bool ParseBool(const std::string& key, const std::string& raw) {
  const std::string v = Trim(raw);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "' expects a boolean, got '" + raw + "'");
}

template <typename T>
std::vector<T> ParseList(const std::string& key, const std::string& raw) {
  std::vector<T> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (Trim(item).empty()) continue;
    out.push_back(ParseNumber<T>(key, item));
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> Raw(const std::string& dotted) const {
    const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(dotted, '.'));
    return v ? std::optional<std::string>(Trim(*v)) : std::nullopt;
  }

  template <typename T>
  void Number(const std::string& dotted, T& field) const {
    if (auto v = Raw(dotted)) field = ParseNumber<T>(dotted, *v);
  }
  void Text(const std::string& dotted, std::string& field) const {
    if (auto v = Raw(dotted)) field = *v;
  }
  void Path(const std::string& dotted, std::filesystem::path& field) const {
    if (auto v = Raw(dotted)) field = *v;
  }
  void Bool(const std::string& dotted, bool& field) const {
    if (auto v = Raw(dotted)) field = ParseBool(dotted, *v);
  }
  template <typename T>
  void OptionalNumber(const std::string& dotted, std::optional<T>& field) const {
    if (auto v = Raw(dotted); v && !v->empty()) field = ParseNumber<T>(dotted, *v);
  }
  template <typename T>
  void List(const std::string& dotted, std::vector<T>& field) const {
    if (auto v = Raw(dotted)) field = ParseList<T>(dotted, *v);
  }

 private:
  const pt::ptree& tree_;
};

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <typename T>
std::string JoinList(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ",";
    if constexpr (std::is_floating_point_v<T>) {
      out += Num(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

}  // namespace

std::string SeedTuple::ToString() const {
  return "master=" + std::to_string(master) + ";data=" + std::to_string(data) +
         ";partition=" + std::to_string(partition) + ";fl=" + std::to_string(fl) +
         ";key=" + std::to_string(key) + ";pattern=" + std::to_string(pattern) +
         ";verify=" + std::to_string(verify) + ";attack=" + std::to_string(attack);
}

pt::ptree ParseIni(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("config key '" + section + "' must live inside a section");
    }
    for (const auto& [key, value] : body) CheckKnown(section, key);
  }
  return tree;
}

pt::ptree ReadIniFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseIni(ss.str());
}

void SetOverride(pt::ptree& tree, const std::string& dotted_key, const std::string& value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos || dotted_key.find('.', dot + 1) != std::string::npos) {
    throw ConfigError("override key must look like section.key, got '" + dotted_key + "'");
  }
  CheckKnown(dotted_key.substr(0, dot), dotted_key.substr(dot + 1));
  tree.put(pt::ptree::path_type(dotted_key, '.'), value);
}

ExperimentConfig BuildConfig(const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    for (const auto& [key, value] : body) CheckKnown(section, key);
  }
  const Reader r(tree);
  ExperimentConfig c;

  auto& d = c.dataset;
  r.Text("dataset.source", d.source);
  r.Path("dataset.train_images", d.train_images);
  r.Path("dataset.train_labels", d.train_labels);
  r.Path("dataset.test_images", d.test_images);
  r.Path("dataset.test_labels", d.test_labels);
  r.Number("dataset.classes", d.num_classes);
  r.Number("dataset.train_per_class", d.train_per_class);
  r.Number("dataset.test_per_class", d.test_per_class);
  r.Number("dataset.height", d.shape.height);
  r.Number("dataset.width", d.shape.width);
  r.Number("dataset.channels", d.shape.channels);
  r.Number("dataset.holdout", d.holdout);

  if (auto kind = r.Raw("partition.kind")) {
    try {
      c.partition.kind = data::ParsePartitionKind(*kind);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  r.Number("partition.alpha", c.partition.alpha);
  r.Number("partition.labels_per_client", c.partition.labels_per_client);

  r.Text("model.arch", c.model);

  auto& f = c.fl;
  f.num_clients = 20;
  f.clients_per_round = 5;
  f.rounds = 40;
  r.Number("fl.clients", f.num_clients);
  r.Number("fl.per_round", f.clients_per_round);
  r.Number("fl.client_lr", f.client_lr);
  r.Number("fl.server_lr", f.server_lr);
  r.Number("fl.local_epochs", f.local_epochs);
  r.Number("fl.batch_size", f.batch_size);
  r.Number("fl.rounds", f.rounds);
  r.OptionalNumber("fl.lambda", f.lambda);
  r.Number("fl.initiator", f.initiator);
  r.Bool("fl.secure", f.secure);
  r.Number("fl.he_scale_bits", f.he_scale_bits);
  r.Number("fl.injection", f.injection);
  c.partition.num_clients = f.num_clients;

  r.Number("trigger.mu", c.trigger.mu);
  r.Number("trigger.nu", c.trigger.nu);
  r.Number("trigger.patterns", c.trigger.patterns_per_class);
  r.Number("trigger.verify_patterns", c.trigger.verify_patterns_per_class);
  r.Number("trigger.verify_per_class", c.trigger.verify_per_class);

  r.Number("watermark.epsilon", c.watermark.epsilon);
  r.OptionalNumber("watermark.gamma", c.watermark.gamma);

  auto& a = c.attack;
  r.List("attacks.prune_rates", a.prune_rates);
  if (auto scope = r.Raw("attacks.prune_scope")) {
    if (*scope == "global") {
      a.prune_scope = attacks::PruneScope::kGlobal;
    } else if (*scope == "per-layer") {
      a.prune_scope = attacks::PruneScope::kPerLayer;
    } else {
      throw ConfigError("attacks.prune_scope must be global or per-layer");
    }
  }
  r.List("attacks.quant_bits", a.quant_bits);
  r.Number("attacks.finetune_epochs", a.finetune_epochs);
  r.Number("attacks.finetune_lr", a.finetune_lr);
  r.Bool("attacks.pst", a.pst);
  r.Number("attacks.pst_resize_scale", a.pst_params.resize_scale);
  r.Number("attacks.pst_filter_stride", a.pst_params.filter_stride);
  r.Number("attacks.pst_rotation_deg", a.pst_params.rotation_deg);
  r.Number("attacks.pst_translation", a.pst_params.translation);
  r.Number("attacks.pst_scale_min", a.pst_params.scale_min);
  r.Number("attacks.pst_scale_max", a.pst_params.scale_max);
  r.Number("attacks.pst_elastic_alpha", a.pst_params.elastic_alpha);
  r.Number("attacks.pst_elastic_sigma", a.pst_params.elastic_sigma);
  r.Number("attacks.forge_attempts", a.forge_attempts);
  r.Number("attacks.drop_threshold", a.drop_threshold);

  auto& s = c.seeds;
  r.Number("seeds.master", s.master);
  auto derived = [&](const char* name, std::uint64_t tag, std::uint64_t& field) {
    field = DeriveSeed(s.master, {tag});
    r.Number(std::string("seeds.") + name, field);
  };
  derived("data", 1, s.data);
  derived("partition", 2, s.partition);
  derived("fl", 3, s.fl);
  derived("key", 4, s.key);
  derived("pattern", 5, s.pattern);
  derived("verify", 6, s.verify);
  derived("attack", 7, s.attack);
  c.partition.seed = s.partition;
  f.seed = s.fl;
  a.pst_params.seed = s.attack;

  r.Path("run.out", c.out_dir);
  return c;
}

void ValidateExperiment(const ExperimentConfig& c) {
  const auto& d = c.dataset;
  if (d.source == "mnist") {
    for (const auto* p : {&d.train_images, &d.train_labels, &d.test_images, &d.test_labels}) {
      if (p->empty()) throw ConfigError("mnist source needs all four idx paths");
      if (!std::filesystem::exists(*p)) throw ConfigError("missing data file " + p->string());
    }
  } else if (d.source == "synth") {
    if (d.num_classes < 2) throw ConfigError("dataset.classes must be at least 2");
    if (d.train_per_class < 1 || d.test_per_class < 1) {
      throw ConfigError("synthetic per-class counts must be positive");
    }
    if (d.shape.height < 1 || d.shape.width < 1 || d.shape.channels < 1) {
      throw ConfigError("image dimensions must be positive");
    }
  } else {
    throw ConfigError("dataset.source must be synth or mnist, got '" + d.source + "'");
  }
  if (!(d.holdout >= 0.0 && d.holdout < 1.0)) throw ConfigError("holdout must be in [0, 1)");
  if (c.partition.alpha <= 0.0) throw ConfigError("partition.alpha must be positive");
  if (c.partition.labels_per_client < 1) throw ConfigError("labels_per_client must be >= 1");

  fl::ValidateConfig(c.fl);

  const data::ImageShape shape =
      d.source == "mnist" ? data::ImageShape{28, 28, 1} : d.shape;
  const int k = d.source == "mnist" ? 10 : d.num_classes;
  try {
    nn::Architecture::FromName(c.model, shape, k);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const auto check = trigger::ValidatePatchParams(k, c.trigger.mu, c.trigger.nu, shape.height,
                                                  shape.width);
  if (!check) throw ConfigError(check.violation);
  if (c.trigger.mu > shape.height || c.trigger.nu > shape.width) {
    throw ConfigError("patch grid is finer than the image");
  }
  if (c.trigger.patterns_per_class < 1) throw ConfigError("trigger.patterns must be >= 1");
  if (c.trigger.verify_per_class < 1 ||
      c.trigger.verify_per_class > c.trigger.verify_patterns_per_class) {
    throw ConfigError("trigger.verify_per_class must be in [1, verify_patterns]");
  }
  if (!(c.watermark.epsilon > 0.0 && c.watermark.epsilon < 1.0)) {
    throw ConfigError("watermark.epsilon must be in (0, 1)");
  }
  if (c.watermark.gamma && !(*c.watermark.gamma > 0.0 && *c.watermark.gamma <= 1.0)) {
    throw ConfigError("watermark.gamma must be in (0, 1]");
  }
  for (double rate : c.attack.prune_rates) {
    if (!(rate >= 0.0 && rate <= 1.0)) throw ConfigError("prune rates must be in [0, 1]");
  }
  for (int bits : c.attack.quant_bits) {
    if (bits < 2 || bits > 8) throw ConfigError("quantisation bits must be in [2, 8]");
  }
  if (c.attack.finetune_epochs < 0) throw ConfigError("finetune_epochs must be >= 0");
  if (!(c.attack.finetune_lr >= 0.0f)) throw ConfigError("finetune_lr must be >= 0");
  if (!(c.attack.drop_threshold > 0.0 && c.attack.drop_threshold < 1.0)) {
    throw ConfigError("drop_threshold must be in (0, 1)");
  }
  attacks::ValidatePstParams(c.attack.pst_params);
}

std::string ToIni(const ExperimentConfig& c) {
  std::ostringstream o;
  const auto& d = c.dataset;
  o << "[dataset]\nsource = " << d.source << "\n";
  if (!d.train_images.empty()) o << "train_images = " << d.train_images.string() << "\n";
  if (!d.train_labels.empty()) o << "train_labels = " << d.train_labels.string() << "\n";
  if (!d.test_images.empty()) o << "test_images = " << d.test_images.string() << "\n";
  if (!d.test_labels.empty()) o << "test_labels = " << d.test_labels.string() << "\n";
  o << "classes = " << d.num_classes << "\ntrain_per_class = " << d.train_per_class
    << "\ntest_per_class = " << d.test_per_class << "\nheight = " << d.shape.height
    << "\nwidth = " << d.shape.width << "\nchannels = " << d.shape.channels
    << "\nholdout = " << Num(d.holdout) << "\n\n";
  o << "[partition]\nkind = " << data::PartitionKindName(c.partition.kind)
    << "\nalpha = " << Num(c.partition.alpha)
    << "\nlabels_per_client = " << c.partition.labels_per_client << "\n\n";
  o << "[model]\narch = " << c.model << "\n\n";
  const auto& f = c.fl;
  o << "[fl]\nclients = " << f.num_clients << "\nper_round = " << f.clients_per_round
    << "\nclient_lr = " << Num(f.client_lr) << "\nserver_lr = " << Num(f.server_lr)
    << "\nlocal_epochs = " << f.local_epochs << "\nbatch_size = " << f.batch_size
    << "\nrounds = " << f.rounds << "\n";
  if (f.lambda) o << "lambda = " << Num(*f.lambda) << "\n";
  o << "initiator = " << f.initiator << "\nsecure = " << (f.secure ? "true" : "false")
    << "\nhe_scale_bits = " << f.he_scale_bits << "\ninjection = " << f.injection << "\n\n";
  o << "[trigger]\nmu = " << c.trigger.mu << "\nnu = " << c.trigger.nu
    << "\npatterns = " << c.trigger.patterns_per_class
    << "\nverify_patterns = " << c.trigger.verify_patterns_per_class
    << "\nverify_per_class = " << c.trigger.verify_per_class << "\n\n";
  o << "[watermark]\nepsilon = " << Num(c.watermark.epsilon) << "\n";
  if (c.watermark.gamma) o << "gamma = " << Num(*c.watermark.gamma) << "\n";
  const auto& a = c.attack;
  const auto& p = a.pst_params;
  o << "\n[attacks]\nprune_rates = " << JoinList(a.prune_rates) << "\nprune_scope = "
    << (a.prune_scope == attacks::PruneScope::kGlobal ? "global" : "per-layer")
    << "\nquant_bits = " << JoinList(a.quant_bits)
    << "\nfinetune_epochs = " << a.finetune_epochs
    << "\nfinetune_lr = " << Num(a.finetune_lr) << "\npst = " << (a.pst ? "true" : "false")
    << "\npst_resize_scale = " << Num(p.resize_scale)
    << "\npst_filter_stride = " << p.filter_stride
    << "\npst_rotation_deg = " << Num(p.rotation_deg)
    << "\npst_translation = " << Num(p.translation) << "\npst_scale_min = " << Num(p.scale_min)
    << "\npst_scale_max = " << Num(p.scale_max)
    << "\npst_elastic_alpha = " << Num(p.elastic_alpha)
    << "\npst_elastic_sigma = " << Num(p.elastic_sigma)
    << "\nforge_attempts = " << a.forge_attempts
    << "\ndrop_threshold = " << Num(a.drop_threshold) << "\n\n";
  const auto& s = c.seeds;
  o << "[seeds]\nmaster = " << s.master << "\ndata = " << s.data
    << "\npartition = " << s.partition << "\nfl = " << s.fl << "\nkey = " << s.key
    << "\npattern = " << s.pattern << "\nverify = " << s.verify << "\nattack = " << s.attack
    << "\n\n";
  o << "[run]\nout = " << c.out_dir.string() << "\n";
  return o.str();
}

}  // namespace fedmark::harness
