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

#include <vector>

#include <benchmark/benchmark.h>

#include "fedmark/he/evaluator.h"
#include "fedmark/he/keys.h"

namespace fedmark {
namespace {

std::vector<double> Ramp(std::size_t d) {
  std::vector<double> v(d);
  for (std::size_t i = 0; i < d; ++i) v[i] = 1e-3 * static_cast<double>(i % 997);
  return v;
}

void BM_Encrypt(benchmark::State& state) {
  const auto key = he::HeKeygen(32, 1);
  const auto x = Ramp(state.range(0));
  std::uint64_t nonce = 0;
  for (auto _ : state) benchmark::DoNotOptimize(he::Encrypt(key, x, nonce++));
  state.SetItemsProcessed(state.iterations() * x.size());
}
BENCHMARK(BM_Encrypt)->Arg(1 << 10)->Arg(1 << 16);

void BM_SecureAggregate(benchmark::State& state) {
  const auto key = he::HeKeygen(32, 1);
  const auto x = Ramp(1 << 16);
  std::vector<he::Ciphertext> cts;
  std::vector<double> weights;
  for (int i = 0; i < state.range(0); ++i) {
    cts.push_back(he::Encrypt(key, x, i));
    weights.push_back(100.0 + i);
  }
  for (auto _ : state) benchmark::DoNotOptimize(he::SecureAggregate(cts, weights));
}
BENCHMARK(BM_SecureAggregate)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_DecryptAggregate(benchmark::State& state) {
  const auto key = he::HeKeygen(32, 1);
  const auto x = Ramp(1 << 16);
  std::vector<he::Ciphertext> cts;
  for (int i = 0; i < 5; ++i) cts.push_back(he::Encrypt(key, x, i));
  const auto agg = he::SecureAggregate(cts, std::vector<double>(5, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(he::Decrypt(key, agg));
}
BENCHMARK(BM_DecryptAggregate)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace fedmark
