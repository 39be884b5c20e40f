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

#include "fedmark/fl/server.h"

#include "fedmark/he/evaluator.h"

namespace fedmark::fl {

he::Ciphertext AggregationServer::Aggregate(std::span<const he::Ciphertext> uploads,
                                            std::span<const double> weights) {
  ciphertexts_received_ += uploads.size();
  he::Ciphertext out = he::SecureAggregate(uploads, weights);
  ++rounds_served_;
  return out;
}

}  // namespace fedmark::fl
