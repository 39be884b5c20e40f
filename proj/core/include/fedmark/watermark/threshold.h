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

#ifndef FEDMARK_WATERMARK_THRESHOLD_H_
#define FEDMARK_WATERMARK_THRESHOLD_H_

#include <cmath>

namespace fedmark::wm {

// Default false-positive budget for verification verdicts.
inline const double kDefaultEpsilon = std::ldexp(1.0, -32);

// Verification threshold for a subset of `subset_size` trigger samples.
struct Threshold {
  // False when even a perfect score is too likely under random guessing; the
  // caller must use a larger subset.
  bool possible = false;
  // Smallest number of correct answers d* that verifies.
  int min_correct = 0;
  int subset_size = 0;
  // gamma = d* / n_s.
  double gamma = 0.0;
  // P[Binomial(n_s, 1/k) >= d*], the false-positive rate actually achieved.
  double false_positive = 1.0;
};

// Exact P[Binomial(n, 1/k) >= d] evaluated in rational arithmetic and rounded
// to double at the end.
double BinomialUpperTail(int n, int d, int num_classes);

// Smallest d* in [1, n_s] whose exact binomial upper tail at success rate 1/k
// is <= epsilon. The comparison is carried out exactly. InputError for
// k < 2, n_s < 1 or epsilon outside (0, 1).
Threshold ComputeThreshold(int num_classes, int subset_size, double epsilon);

}  // namespace fedmark::wm

#endif  // FEDMARK_WATERMARK_THRESHOLD_H_
