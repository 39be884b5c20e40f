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

#include "fedmark/he/keys.h"

#include <cmath>
#include <string>

#include "fedmark/common/error.h"
#include "fedmark/common/random.h"

namespace fedmark::he {
namespace {

constexpr double kMaxMagnitude = 16777216.0;  // 2^24

// Keyed 128-bit mask for slot `i` of stream `nonce`. SplitMix-based: adequate
// for a simulation boundary, not a cryptographic PRF.
Word Mask(const std::uint64_t secret[2], std::uint64_t nonce, std::uint64_t i) {
  const std::uint64_t stream = Mix64(secret[0] ^ Mix64(nonce));
  const std::uint64_t lo = Mix64(stream ^ Mix64(i ^ secret[1]));
  const std::uint64_t hi = Mix64(lo ^ secret[1] ^ Mix64(i + 0x632be59bd9b4e019ULL));
  return (static_cast<Word>(hi) << 64) | lo;
}

}  // namespace

HeKeyPair HeKeygen(int scale_bits, std::uint64_t seed) {
  if (scale_bits < kMinScaleBits || scale_bits > kMaxScaleBits) {
    throw ConfigError("scale_bits must be in [8, 40], got " + std::to_string(scale_bits));
  }
  HeKeyPair key;
  key.secret_[0] = DeriveSeed(seed, {0x736b30ULL});
  key.secret_[1] = DeriveSeed(seed, {0x736b31ULL});
  key.public_.scheme_id = kMockSchemeId;
  key.public_.scale_bits = scale_bits;
  key.public_.fingerprint = Mix64(key.secret_[0] ^ Mix64(key.secret_[1] ^ 0x66707269ULL));
  return key;
}

Ciphertext Encrypt(const HeKeyPair& key, std::span<const double> values, std::uint64_t nonce) {
  Ciphertext ct;
  ct.scheme_id = key.public_.scheme_id;
  ct.scale_bits = static_cast<std::uint32_t>(key.public_.scale_bits);
  ct.scale_exponent = ct.scale_bits;
  ct.level = kFreshLevel;
  ct.key_fingerprint = key.public_.fingerprint;
  ct.terms.push_back({nonce, 1});
  ct.payload.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = values[i];
    if (!std::isfinite(x) || std::fabs(x) > kMaxMagnitude) {
      throw InputError("value at slot " + std::to_string(i) + " is not encodable");
    }
    const auto encoded = static_cast<__int128>(
        std::nearbyint(std::ldexp(static_cast<long double>(x), key.public_.scale_bits)));
    ct.payload[i] = static_cast<Word>(encoded) + Mask(key.secret_, nonce, i);
  }
  return ct;
}

Ciphertext Encrypt(const HeKeyPair& key, std::span<const float> values, std::uint64_t nonce) {
  std::vector<double> wide(values.begin(), values.end());
  return Encrypt(key, std::span<const double>(wide), nonce);
}

std::vector<double> Decrypt(const HeKeyPair& key, const Ciphertext& ct) {
  if (ct.scheme_id != key.public_.scheme_id || ct.key_fingerprint != key.public_.fingerprint) {
    throw AuthenticationError("ciphertext was not produced under this key");
  }
  std::vector<double> out(ct.payload.size());
  for (std::size_t i = 0; i < ct.payload.size(); ++i) {
    Word m = ct.payload[i];
    for (const MaskTerm& t : ct.terms) m -= t.coefficient * Mask(key.secret_, t.nonce, i);
    const auto value = static_cast<__int128>(m);
    out[i] = static_cast<double>(
        std::ldexp(static_cast<long double>(value), -static_cast<int>(ct.scale_exponent)));
  }
  return out;
}

}  // namespace fedmark::he
