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

#ifndef FEDMARK_HE_WIRE_H_
#define FEDMARK_HE_WIRE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fedmark/he/ciphertext.h"

namespace fedmark::he {

// "FMCT" transport format, little-endian:
//   magic "FMCT", u32 scheme_id, u64 dimension d, u32 scale_bits,
//   u32 scale_exponent, u32 level, u64 key fingerprint,
//   u32 term count, terms (u64 nonce, u64 coef_lo, u64 coef_hi),
//   d payload words (u64 lo, u64 hi).
std::vector<std::uint8_t> EncodeCiphertext(const Ciphertext& ct);
Ciphertext DecodeCiphertext(std::span<const std::uint8_t> bytes);

}  // namespace fedmark::he

#endif  // FEDMARK_HE_WIRE_H_
