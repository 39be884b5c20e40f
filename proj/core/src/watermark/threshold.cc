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

#include "fedmark/watermark/threshold.h"

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fedmark/common/error.h"

namespace fedmark::wm {
namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

// weight[d] = sum_{j >= d} C(n, j) (k-1)^(n-j); the tail is weight[d] / k^n.
std::vector<cpp_int> TailWeights(int n, int k) {
  std::vector<cpp_int> term(n + 1);
  cpp_int binom = 1;
  std::vector<cpp_int> miss_pow(n + 1);
  miss_pow[0] = 1;
  for (int i = 1; i <= n; ++i) miss_pow[i] = miss_pow[i - 1] * (k - 1);
  for (int j = 0; j <= n; ++j) {
    term[j] = binom * miss_pow[n - j];
    binom = binom * (n - j) / (j + 1);
  }
  std::vector<cpp_int> weight(n + 2, 0);
  for (int d = n; d >= 0; --d) weight[d] = weight[d + 1] + term[d];
  return weight;
}

cpp_int Power(int base, int exp) {
  cpp_int out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

double BinomialUpperTail(int n, int d, int num_classes) {
  if (n < 0 || num_classes < 2) throw InputError("binomial tail needs n >= 0 and k >= 2");
  if (d <= 0) return 1.0;
  if (d > n) return 0.0;
  const auto weight = TailWeights(n, num_classes);
  return cpp_rational(weight[d], Power(num_classes, n)).convert_to<double>();
}

Threshold ComputeThreshold(int num_classes, int subset_size, double epsilon) {
  if (num_classes < 2) throw InputError("threshold needs k >= 2");
  if (subset_size < 1) throw InputError("threshold needs a non-empty subset");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must be in (0, 1)");

  // epsilon = mantissa * 2^-shift exactly, with mantissa an integer.
  int exp2 = 0;
  const double frac = std::frexp(epsilon, &exp2);
  const auto mantissa = static_cast<long long>(std::ldexp(frac, 53));
  const int shift = 53 - exp2;

  const auto weight = TailWeights(subset_size, num_classes);
  const cpp_int budget = cpp_int(mantissa) * Power(num_classes, subset_size);

  Threshold out;
  out.subset_size = subset_size;
  for (int d = 1; d <= subset_size; ++d) {
    // weight[d] / k^n <= mantissa / 2^shift
    if ((weight[d] << shift) <= budget) {
      out.possible = true;
      out.min_correct = d;
      out.gamma = static_cast<double>(d) / subset_size;
      out.false_positive =
          cpp_rational(weight[d], Power(num_classes, subset_size)).convert_to<double>();
      return out;
    }
  }
  return out;
}

}  // namespace fedmark::wm
