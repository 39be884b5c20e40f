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

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "fedmark/attacks/attacks.h"
#include "fedmark/common/error.h"
#include "fedmark/common/random.h"

namespace fedmark::attacks {
namespace {

constexpr std::uint64_t kKeyTag = 0x6b6579;
constexpr std::uint64_t kPatternTag = 0x706174;
// Largest keyspace enumerated exhaustively.
constexpr std::size_t kEnumerationLimit = 1u << 22;

double Score(const wm::ModelApi& api, const data::Dataset& samples) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    correct += api(samples.image(i)) == samples.label(i) ? 1 : 0;
  }
  return samples.empty() ? 0.0 : static_cast<double>(correct) / samples.size();
}

// Every ordered choice of k cells out of m, in lexicographic order.
std::vector<std::vector<std::uint16_t>> Arrangements(int m, int k) {
  std::vector<std::vector<std::uint16_t>> out;
  std::vector<std::uint16_t> current;
  std::vector<bool> used(m, false);
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(current.size()) == k) {
      out.push_back(current);
      return;
    }
    for (int c = 0; c < m; ++c) {
      if (used[c]) continue;
      used[c] = true;
      current.push_back(static_cast<std::uint16_t>(c));
      self(self);
      current.pop_back();
      used[c] = false;
    }
  };
  rec(rec);
  return out;
}

}  // namespace

ForgeResult ForgeRandomTrigger(const wm::ModelApi& api, const ForgeSpec& spec) {
  if (spec.attempts == 0) throw InputError("forging needs at least one attempt");
  const int cells = spec.mu * spec.nu;
  const auto keyspace = trigger::KeyspaceSize(spec.num_classes, cells);
  ForgeResult result;
  result.best_accuracy = -1.0;
  auto consider = [&](const trigger::SecretKey& key, std::uint64_t index) {
    const auto set = trigger::TrigCons(key, spec.patterns_per_class, spec.shape,
                                       DeriveSeed(spec.seed, {kPatternTag, index}));
    const double acc = Score(api, set.samples);
    ++result.attempts;
    if (acc > result.best_accuracy) {
      result.best_accuracy = acc;
      result.best_key = key;
    }
  };

  if (keyspace <= spec.attempts && keyspace <= kEnumerationLimit) {
    result.exhaustive = true;
    std::uint64_t index = 0;
    trigger::SecretKey key;
    key.num_classes = spec.num_classes;
    key.mu = spec.mu;
    key.nu = spec.nu;
    for (const auto& lk : Arrangements(cells, spec.num_classes)) {
      key.location_key = lk;
      key.class_key.resize(spec.num_classes);
      std::iota(key.class_key.begin(), key.class_key.end(), std::uint16_t{0});
      do {
        if (!spec.exclude || key != *spec.exclude) consider(key, index);
        ++index;
      } while (std::next_permutation(key.class_key.begin(), key.class_key.end()));
    }
  } else {
    for (std::uint64_t a = 0; a < spec.attempts; ++a) {
      std::uint64_t draw = 0;
      trigger::SecretKey key;
      do {
        key = trigger::KeyGen(spec.num_classes, spec.mu, spec.nu,
                              DeriveSeed(spec.seed, {kKeyTag, a, draw++}));
      } while (spec.exclude && key == *spec.exclude);
      consider(key, a);
    }
  }
  result.best_accuracy = std::max(result.best_accuracy, 0.0);
  return result;
}

void WriteSweepCsv(std::ostream& out, std::span<const AttackOutcome> rows) {
  out << "attack,param,wm_acc,test_acc\n";
  char buf[64];
  for (const auto& row : rows) {
    out << row.attack << ',' << row.param << ',';
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f", row.wm_after, row.test_after);
    out << buf << '\n';
  }
}

}  // namespace fedmark::attacks
