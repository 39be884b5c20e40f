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

#ifndef FEDMARK_HE_CIPHERTEXT_H_
#define FEDMARK_HE_CIPHERTEXT_H_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fedmark::he {

// Ring element of the mock scheme: arithmetic is modulo 2^128.
using Word = unsigned __int128;

inline constexpr std::uint32_t kMockSchemeId = 1;
// Fractional bits used to encode plaintext scalars in CtScale.
inline constexpr int kScalarBits = 40;
// Scalar multiplications a fresh ciphertext supports.
inline constexpr int kFreshLevel = 1;

// One keyed mask stream folded into a ciphertext: the payload carries
// coefficient * PRF(secret, nonce, i) at slot i.
struct MaskTerm {
  std::uint64_t nonce = 0;
  Word coefficient = 0;

  bool operator==(const MaskTerm&) const = default;
};

// An encrypted real vector. Slot i holds round(x_i * 2^scale_exponent) plus a
// keyed pseudorandom mask, so the payload reveals nothing without the
// secret. Carries no key material; only the fingerprint of the key that
// produced it.
struct Ciphertext {
  std::uint32_t scheme_id = kMockSchemeId;
  // Fixed-point precision of the encryption key.
  std::uint32_t scale_bits = 0;
  // Current number of fractional bits (grows by kScalarBits per CtScale).
  std::uint32_t scale_exponent = 0;
  // Remaining scalar multiplications.
  std::uint32_t level = 0;
  std::uint64_t key_fingerprint = 0;
  std::vector<MaskTerm> terms;
  std::vector<Word> payload;

  std::size_t dimension() const { return payload.size(); }
  bool operator==(const Ciphertext&) const = default;
};

// Per-element round-trip tolerance of a fresh ciphertext: 2^(1 - scale_bits).
double Epsilon(int scale_bits);

}  // namespace fedmark::he

#endif  // FEDMARK_HE_CIPHERTEXT_H_
