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

#include "fedmark/fl/config.h"

#include <cmath>
#include <string>

#include "fedmark/common/error.h"

namespace fedmark::fl {

void ValidateConfig(const FlConfig& c) {
  if (c.num_clients < 1) throw ConfigError("N must be at least 1");
  if (c.clients_per_round < 1 || c.clients_per_round > c.num_clients) {
    throw ConfigError("clients per round must satisfy 1 <= n <= N, got n = " +
                      std::to_string(c.clients_per_round));
  }
  if (!(c.client_lr > 0.0f) || !std::isfinite(c.client_lr)) {
    throw ConfigError("client learning rate must be positive");
  }
  if (!(c.server_lr > 0.0) || !std::isfinite(c.server_lr)) {
    throw ConfigError("server learning rate must be positive");
  }
  if (c.lambda && !(*c.lambda >= 1.0 && std::isfinite(*c.lambda))) {
    throw ConfigError("lambda must be >= 1");
  }
  if (c.initiator < 0 || c.initiator >= c.num_clients) {
    throw ConfigError("initiator index out of range");
  }
  if (c.local_epochs < 1) throw ConfigError("local epochs must be positive");
  if (c.batch_size < 1) throw ConfigError("batch size must be positive");
  if (c.rounds < 0) throw ConfigError("rounds must be non-negative");
  if (c.injection < 0 || (c.injection > 0 && c.injection >= c.batch_size)) {
    throw ConfigError("trigger injection must be below the batch size");
  }
  if (c.secure && (c.he_scale_bits < 8 || c.he_scale_bits > 40)) {
    throw ConfigError("HE scale bits must be in [8, 40]");
  }
}

double ScalingFactor(int num_clients, int clients_per_round) {
  if (clients_per_round < 1) throw InputError("n must be at least 1");
  if (clients_per_round > num_clients) throw InputError("n must not exceed N");
  return static_cast<double>(num_clients) / static_cast<double>(clients_per_round);
}

double EffectiveLambda(const FlConfig& c) {
  return c.lambda ? *c.lambda : ScalingFactor(c.num_clients, c.clients_per_round);
}

}  // namespace fedmark::fl
