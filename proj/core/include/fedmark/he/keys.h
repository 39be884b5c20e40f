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

#ifndef FEDMARK_HE_KEYS_H_
#define FEDMARK_HE_KEYS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fedmark/he/ciphertext.h"

namespace fedmark::he {

// Public parameters anyone may hold.
struct PublicParams {
  std::uint32_t scheme_id = kMockSchemeId;
  int scale_bits = 0;
  std::uint64_t fingerprint = 0;

  bool operator==(const PublicParams&) const = default;
};

// Key material of the mock additive scheme. The scheme is symmetric, so the
// clients share one HeKeyPair and the server never receives it. Immutable
// once generated.
class HeKeyPair {
 public:
  const PublicParams& public_params() const { return public_; }
  int scale_bits() const { return public_.scale_bits; }
  double epsilon() const { return Epsilon(public_.scale_bits); }

  bool operator==(const HeKeyPair&) const = default;

 private:
  friend HeKeyPair HeKeygen(int scale_bits, std::uint64_t seed);
  friend Ciphertext Encrypt(const HeKeyPair&, std::span<const double>, std::uint64_t);
  friend std::vector<double> Decrypt(const HeKeyPair&, const Ciphertext&);

  HeKeyPair() = default;

  PublicParams public_;
  std::uint64_t secret_[2] = {0, 0};
};

inline constexpr int kMinScaleBits = 8;
inline constexpr int kMaxScaleBits = 40;

// ConfigError unless 8 <= scale_bits <= 40. Deterministic in the seed.
HeKeyPair HeKeygen(int scale_bits, std::uint64_t seed);

// Encrypts a real vector under a fresh mask stream identified by `nonce`;
// nonces must not repeat under one key. InputError if a value is not finite
// or exceeds 2^24 in magnitude.
Ciphertext Encrypt(const HeKeyPair& key, std::span<const double> values, std::uint64_t nonce);
Ciphertext Encrypt(const HeKeyPair& key, std::span<const float> values, std::uint64_t nonce);

// AuthenticationError if the ciphertext was produced under another key.
std::vector<double> Decrypt(const HeKeyPair& key, const Ciphertext& ct);

}  // namespace fedmark::he

#endif  // FEDMARK_HE_KEYS_H_
