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

#ifndef FEDMARK_FL_CONFIG_H_
#define FEDMARK_FL_CONFIG_H_

#include <cstdint>
#include <optional>

namespace fedmark::fl {

struct FlConfig {
  int num_clients = 10;       // N
  int clients_per_round = 10; // n
  float client_lr = 0.01f;
  double server_lr = 1.0;
  int local_epochs = 2;
  int batch_size = 32;
  int rounds = 1;
  // Initiator gradient multiplier; N / n when unset.
  std::optional<double> lambda;
  int initiator = 0;
  std::uint64_t seed = 0;
  // Aggregate under the mock HE scheme; plaintext FedAvg otherwise.
  bool secure = true;
  int he_scale_bits = 32;
  // Trigger samples per initiator batch; 0 picks the default.
  int injection = 0;
};

// ConfigError unless 1 <= n <= N, learning rates > 0, lambda >= 1,
// initiator < N and the remaining counts are positive.
void ValidateConfig(const FlConfig& config);

// N / n. InputError if n == 0 or n > N.
double ScalingFactor(int num_clients, int clients_per_round);

// The configured lambda, or ScalingFactor(N, n).
double EffectiveLambda(const FlConfig& config);

}  // namespace fedmark::fl

#endif  // FEDMARK_FL_CONFIG_H_
