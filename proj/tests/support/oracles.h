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

#ifndef FEDMARK_TESTS_SUPPORT_ORACLES_H_
#define FEDMARK_TESTS_SUPPORT_ORACLES_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fedmark/nn/model.h"

// Reference implementations that share no code with the library. They are
// slow and exact (GMP rationals / integers, naive loops in double).
namespace fedmark::testing {

// Smallest d such that P[Binomial(n, 1/k) >= d] <= epsilon, found by
// enumerating all 2^n success patterns (n <= 24) and summing exact
// rationals. -1 when no d in [1, n] qualifies.
int BruteForceMinCorrect(int n, int k, double epsilon);

// Same answer from the closed-form tail with GMP binomials; used for n
// beyond enumeration range.
int ExactMinCorrect(int n, int k, double epsilon);

// P[Binomial(n, 1/k) >= d] in double, from GMP exact rationals.
double ExactUpperTail(int n, int d, int k);

// m! * k! / (m - k)! via GMP factorials, as a decimal string.
std::string FactorialKeyspace(int k, int m);

// Number of (ordered k cells out of m, permutation of k classes) pairs,
// counted one by one.
std::uint64_t EnumeratedKeyspace(int k, int m);

// Naive double-precision logits of one image.
std::vector<double> NaiveLogits(const nn::ModelParams& model, std::span<const float> image);

}  // namespace fedmark::testing

#endif  // FEDMARK_TESTS_SUPPORT_ORACLES_H_
