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

#ifndef FEDMARK_FL_SERVER_H_
#define FEDMARK_FL_SERVER_H_

#include <cstddef>
#include <span>

#include "fedmark/he/ciphertext.h"

namespace fedmark::fl {

// The aggregation server. It is handed ciphertexts and plaintext weights
// only; it has no access to keys, gradients or models.
class AggregationServer {
 public:
  // Weighted mean of the uploads, still encrypted.
  he::Ciphertext Aggregate(std::span<const he::Ciphertext> uploads,
                           std::span<const double> weights);

  std::size_t rounds_served() const { return rounds_served_; }
  std::size_t ciphertexts_received() const { return ciphertexts_received_; }

 private:
  std::size_t rounds_served_ = 0;
  std::size_t ciphertexts_received_ = 0;
};

}  // namespace fedmark::fl

#endif  // FEDMARK_FL_SERVER_H_
