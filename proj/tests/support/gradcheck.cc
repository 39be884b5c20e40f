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

#include "support/gradcheck.h"

#include <cmath>
#include <vector>

#include "support/generators.h"

namespace fedmark::testing {

double GradientRelativeError(const nn::Architecture& arch, std::span<const double> params,
                             const nn::Batch& batch, double step) {
  std::vector<double> analytic(params.size());
  nn::LossAndGradient<double>(arch, params, batch, analytic);
  std::vector<double> probe(params.begin(), params.end());
  double diff = 0.0, norm_a = 0.0, norm_n = 0.0;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const double saved = probe[i];
    probe[i] = saved + step;
    const double up = nn::Loss<double>(arch, probe, batch);
    probe[i] = saved - step;
    const double down = nn::Loss<double>(arch, probe, batch);
    probe[i] = saved;
    const double numeric = (up - down) / (2.0 * step);
    diff += (analytic[i] - numeric) * (analytic[i] - numeric);
    norm_a += analytic[i] * analytic[i];
    norm_n += numeric * numeric;
  }
  const double denom = std::sqrt(norm_a) + std::sqrt(norm_n);
  return denom == 0.0 ? 0.0 : std::sqrt(diff) / denom;
}

double GradientRelativeErrorForSeed(std::uint64_t seed) {
  const auto arch = RandomSmallArch(seed);
  const auto model = RandomModel(arch, seed ^ 0x5eedu);
  const auto data = RandomDataset(arch.input_shape(), arch.num_classes(), 4, seed + 1);
  const std::vector<double> params(model.values.begin(), model.values.end());
  return GradientRelativeError(arch, params, AllSamples(data));
}

}  // namespace fedmark::testing
