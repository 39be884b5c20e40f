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

#ifndef FEDMARK_HE_EVALUATOR_H_
#define FEDMARK_HE_EVALUATOR_H_

#include <span>

#include "fedmark/he/ciphertext.h"

namespace fedmark::he {

// Homomorphic operations. They need no key: this header is everything the
// aggregation server is given.

// Dec(CtAdd(E(x), E(y))) = x + y within 2 * epsilon. SchemeMismatchError if
// scheme, key or scale differ; DimensionError on a length mismatch.
Ciphertext CtAdd(const Ciphertext& a, const Ciphertext& b);

// Dec(CtScale(E(x), c)) = c * x within |c| * epsilon (plus c's own 2^-41
// encoding error times |x|). Consumes one level; InputError when none is
// left or |c| > 2^12.
Ciphertext CtScale(const Ciphertext& a, double c);

// Sample-count-weighted FedAvg, (1 / sum q) * sum q_i * C_i, built from
// CtScale and CtAdd only. InputError on an empty list, a negative weight or
// a zero total; DimensionError when weights and ciphertexts disagree.
Ciphertext SecureAggregate(std::span<const Ciphertext> cts, std::span<const double> weights);

}  // namespace fedmark::he

#endif  // FEDMARK_HE_EVALUATOR_H_
