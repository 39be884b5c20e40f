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

#include "fedmark/fl/federation.h"

#include <algorithm>
#include <chrono>
#include <string>

#include "fedmark/common/error.h"
#include "fedmark/common/parallel.h"
#include "fedmark/common/random.h"
#include "fedmark/fl/server.h"
#include "fedmark/he/evaluator.h"
#include "fedmark/watermark/embed.h"

namespace fedmark::fl {
namespace {

constexpr std::uint64_t kInitTag = 0x696e6974;
constexpr std::uint64_t kSelectTag = 0x73656c;
constexpr std::uint64_t kLocalTag = 0x6c6f63;
constexpr std::uint64_t kNonceTag = 0x6e6f6e;

}  // namespace

he::Ciphertext SecureTransmit(const nn::Gradient& grad, bool is_initiator, double lambda,
                              const he::HeKeyPair& key, std::uint64_t nonce) {
  if (!(lambda >= 1.0)) throw InputError("lambda must be >= 1");
  if (!is_initiator) return he::Encrypt(key, std::span<const float>(grad.values), nonce);
  std::vector<double> scaled(grad.values.begin(), grad.values.end());
  for (double& v : scaled) v *= lambda;
  return he::Encrypt(key, std::span<const double>(scaled), nonce);
}

nn::ModelParams ApplyGlobal(const nn::ModelParams& model, std::span<const double> g, double rho) {
  if (g.size() != model.values.size()) {
    throw DimensionError("global gradient has " + std::to_string(g.size()) +
                         " entries, model has " + std::to_string(model.values.size()));
  }
  nn::ModelParams out = model;
  for (std::size_t i = 0; i < g.size(); ++i) {
    out.values[i] = static_cast<float>(static_cast<double>(model.values[i]) - rho * g[i]);
  }
  return out;
}

nn::ModelParams ApplyGlobal(const nn::ModelParams& model, const nn::Gradient& g, double rho) {
  const std::vector<double> wide(g.values.begin(), g.values.end());
  return ApplyGlobal(model, std::span<const double>(wide), rho);
}

std::vector<int> SelectClients(const FlConfig& config, int round) {
  if (config.clients_per_round < 1) throw ConfigError("no clients selected");
  if (config.clients_per_round > config.num_clients) throw ConfigError("n exceeds N");
  Rng rng(DeriveSeed(config.seed, {kSelectTag, static_cast<std::uint64_t>(round)}));
  const auto order = ShuffledIndices(static_cast<std::size_t>(config.num_clients), rng);
  std::vector<int> picked(order.begin(), order.begin() + config.clients_per_round);
  std::sort(picked.begin(), picked.end());
  return picked;
}

FlState InitState(const nn::Architecture& arch, std::shared_ptr<const data::ClientShards> shards,
                  const FlConfig& config) {
  ValidateConfig(config);
  if (!shards || shards->shards.size() != static_cast<std::size_t>(config.num_clients)) {
    throw ConfigError("client shard count does not match N");
  }
  FlState state;
  state.global = nn::InitModel(arch, DeriveSeed(config.seed, {kInitTag}));
  state.shards = std::move(shards);
  return state;
}

FlState RunRound(FlState state, const FlConfig& config, const RoundEnv& env) {
  ValidateConfig(config);
  if (!state.shards || state.shards->shards.size() != static_cast<std::size_t>(config.num_clients)) {
    throw ConfigError("client shard count does not match N");
  }
  if (config.secure && env.key == nullptr) throw ConfigError("secure aggregation needs a key");
  const auto start = std::chrono::steady_clock::now();
  const int round = state.round + 1;
  const std::vector<int> selected = SelectClients(config, round);
  const bool embedding = env.trigger != nullptr && !env.trigger->empty();
  const double lambda = embedding ? EffectiveLambda(config) : 1.0;
  const int injection =
      config.injection > 0 ? config.injection : wm::DefaultInjectionCount(config.batch_size);

  const std::size_t m = selected.size();
  std::vector<nn::Gradient> local(m);
  std::vector<he::Ciphertext> uploads(config.secure ? m : 0);
  ParallelFor(m, [&](std::size_t i) {
    const int client = selected[i];
    const data::Dataset& shard = state.shards->shards[client];
    nn::TrainOptions options;
    options.learning_rate = config.client_lr;
    options.epochs = config.local_epochs;
    options.batch_size = config.batch_size;
    options.seed = DeriveSeed(config.seed, {kLocalTag, static_cast<std::uint64_t>(round),
                                            static_cast<std::uint64_t>(client)});
    const bool initiator = client == config.initiator;
    local[i] = embedding && initiator
                   ? wm::TrainWithTrigger(state.global, shard, *env.trigger, options, injection)
                   : nn::TrainLocal(state.global, shard, options);
    if (config.secure) {
      const std::uint64_t nonce = DeriveSeed(
          config.seed, {kNonceTag, static_cast<std::uint64_t>(round),
                        static_cast<std::uint64_t>(client)});
      uploads[i] = SecureTransmit(local[i], initiator && embedding, lambda, *env.key, nonce);
    }
  });

  std::vector<double> weights(m);
  for (std::size_t i = 0; i < m; ++i) {
    weights[i] = static_cast<double>(state.shards->count(selected[i]));
  }
  std::vector<double> global_grad;
  if (config.secure) {
    AggregationServer server;
    const he::Ciphertext aggregate = server.Aggregate(uploads, weights);
    global_grad = he::Decrypt(*env.key, aggregate);
  } else {
    double total = 0.0;
    for (double q : weights) total += q;
    if (!(total > 0.0)) throw InputError("selected clients hold no samples");
    global_grad.assign(state.global.values.size(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double s = weights[i] / total * (selected[i] == config.initiator ? lambda : 1.0);
      const auto& v = local[i].values;
      for (std::size_t j = 0; j < v.size(); ++j) global_grad[j] += s * v[j];
    }
  }

  state.global = ApplyGlobal(state.global, std::span<const double>(global_grad), config.server_lr);
  nn::ValidateModel(state.global);
  state.round = round;

  RoundMetrics metrics;
  metrics.round = round;
  metrics.selected = selected;
  if (env.test != nullptr && !env.test->empty()) {
    metrics.test_acc = nn::Evaluate(state.global, *env.test);
  }
  if (env.wm_eval != nullptr && !env.wm_eval->empty()) {
    metrics.wm_acc = nn::Evaluate(state.global, *env.wm_eval);
  }
  metrics.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  state.history.push_back(std::move(metrics));
  if (env.observer) env.observer(state);
  return state;
}

FlState RunFederation(FlState state, const FlConfig& config, const RoundEnv& env) {
  for (int r = 0; r < config.rounds; ++r) state = RunRound(std::move(state), config, env);
  return state;
}

}  // namespace fedmark::fl
