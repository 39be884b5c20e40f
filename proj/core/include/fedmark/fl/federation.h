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

#ifndef FEDMARK_FL_FEDERATION_H_
#define FEDMARK_FL_FEDERATION_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "fedmark/data/dataset.h"
#include "fedmark/data/partition.h"
#include "fedmark/fl/config.h"
#include "fedmark/he/ciphertext.h"
#include "fedmark/he/keys.h"
#include "fedmark/nn/model.h"
#include "fedmark/nn/train.h"

namespace fedmark::fl {

// Enc(lambda * L) for the initiator, Enc(L) for everyone else.
he::Ciphertext SecureTransmit(const nn::Gradient& grad, bool is_initiator, double lambda,
                              const he::HeKeyPair& key, std::uint64_t nonce);

// model - rho * g, computed in double. DimensionError on a size mismatch.
nn::ModelParams ApplyGlobal(const nn::ModelParams& model, std::span<const double> g, double rho);
nn::ModelParams ApplyGlobal(const nn::ModelParams& model, const nn::Gradient& g, double rho);

// n distinct clients drawn uniformly for round `round`, ascending.
std::vector<int> SelectClients(const FlConfig& config, int round);

struct RoundMetrics {
  int round = 0;
  double test_acc = 0.0;
  std::optional<double> wm_acc;
  std::vector<int> selected;
  double wall_ms = 0.0;
};

struct FlState {
  int round = 0;
  nn::ModelParams global;
  std::shared_ptr<const data::ClientShards> shards;
  std::vector<RoundMetrics> history;
};

// Round 0 state with the global model drawn from the config seed.
FlState InitState(const nn::Architecture& arch, std::shared_ptr<const data::ClientShards> shards,
                  const FlConfig& config);

// Everything a round needs besides the state. Null pointers disable the
// corresponding feature.
struct RoundEnv {
  // Secret trigger set trained into the initiator's batches.
  const data::Dataset* trigger = nullptr;
  // Shared client key; required when config.secure.
  const he::HeKeyPair* key = nullptr;
  const data::Dataset* test = nullptr;
  const data::Dataset* wm_eval = nullptr;
  // Called after each completed round.
  std::function<void(const FlState&)> observer;
};

// One round: select, train locally (in parallel), transmit, aggregate,
// decrypt and update. Lambda scaling is applied only when a trigger is
// present.
FlState RunRound(FlState state, const FlConfig& config, const RoundEnv& env);

// config.rounds rounds starting from `state`.
FlState RunFederation(FlState state, const FlConfig& config, const RoundEnv& env);

}  // namespace fedmark::fl

#endif  // FEDMARK_FL_FEDERATION_H_
