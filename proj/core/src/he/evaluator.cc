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

#include "fedmark/he/evaluator.h"

#include <cmath>
#include <map>
#include <string>

#include "fedmark/common/error.h"

namespace fedmark::he {
namespace {

constexpr double kMaxScalar = 4096.0;

void CheckCompatible(const Ciphertext& a, const Ciphertext& b) {
  if (a.scheme_id != b.scheme_id) throw SchemeMismatchError("ciphertexts from different schemes");
  if (a.key_fingerprint != b.key_fingerprint) {
    throw SchemeMismatchError("ciphertexts encrypted under different keys");
  }
  if (a.scale_exponent != b.scale_exponent || a.scale_bits != b.scale_bits) {
    throw SchemeMismatchError("ciphertexts at different scales");
  }
  if (a.dimension() != b.dimension()) {
    throw DimensionError("ciphertext dimensions differ: " + std::to_string(a.dimension()) +
                         " vs " + std::to_string(b.dimension()));
  }
}

}  // namespace

double Epsilon(int scale_bits) { return std::ldexp(1.0, 1 - scale_bits); }

Ciphertext CtAdd(const Ciphertext& a, const Ciphertext& b) {
  CheckCompatible(a, b);
  Ciphertext out = a;
  out.level = std::min(a.level, b.level);
  for (std::size_t i = 0; i < out.payload.size(); ++i) out.payload[i] += b.payload[i];
  // Merge mask terms by nonce so repeated additions stay compact.
  std::map<std::uint64_t, Word> merged;
  for (const auto& t : a.terms) merged[t.nonce] += t.coefficient;
  for (const auto& t : b.terms) merged[t.nonce] += t.coefficient;
  out.terms.clear();
  for (const auto& [nonce, coef] : merged) {
    if (coef != 0) out.terms.push_back({nonce, coef});
  }
  return out;
}

Ciphertext CtScale(const Ciphertext& a, double c) {
  if (!std::isfinite(c) || std::fabs(c) > kMaxScalar) {
    throw InputError("plaintext scalar must be finite with |c| <= 4096");
  }
  if (a.level == 0) throw InputError("ciphertext has no multiplicative level left");
  const auto encoded =
      static_cast<__int128>(std::nearbyint(std::ldexp(static_cast<long double>(c), kScalarBits)));
  const auto factor = static_cast<Word>(encoded);
  Ciphertext out = a;
  for (Word& w : out.payload) w *= factor;
  for (MaskTerm& t : out.terms) t.coefficient *= factor;
  out.scale_exponent += kScalarBits;
  out.level -= 1;
  return out;
}

Ciphertext SecureAggregate(std::span<const Ciphertext> cts, std::span<const double> weights) {
  if (cts.empty()) throw InputError("secure aggregation over an empty list");
  if (weights.size() != cts.size()) throw DimensionError("one weight per ciphertext required");
  double total = 0.0;
  for (double q : weights) {
    if (!(q >= 0.0) || !std::isfinite(q)) throw InputError("aggregation weights must be >= 0");
    total += q;
  }
  if (!(total > 0.0)) throw InputError("aggregation weights sum to zero");
  Ciphertext acc = CtScale(cts[0], weights[0] / total);
  for (std::size_t i = 1; i < cts.size(); ++i) acc = CtAdd(acc, CtScale(cts[i], weights[i] / total));
  return acc;
}

}  // namespace fedmark::he
