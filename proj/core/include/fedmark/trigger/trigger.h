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

#ifndef FEDMARK_TRIGGER_TRIGGER_H_
#define FEDMARK_TRIGGER_TRIGGER_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fedmark/data/dataset.h"

namespace fedmark::trigger {

// The watermark secret sk = (lk, ck) for a k-class task on a mu x nu patch
// grid. Cells are numbered row-major: cell = row * nu + col.
struct SecretKey {
  int num_classes = 0;
  int mu = 0;
  int nu = 0;
  // k distinct cells in [0, mu*nu).
  std::vector<std::uint16_t> location_key;
  // A permutation of {0, ..., k-1}.
  std::vector<std::uint16_t> class_key;

  int cells() const { return mu * nu; }
  bool operator==(const SecretKey&) const = default;
};

struct PatchCheck {
  bool ok = true;
  std::string violation;

  explicit operator bool() const { return ok; }
};

// k <= mu*nu <= height*width, with the failed inequality named otherwise.
PatchCheck ValidatePatchParams(int num_classes, int mu, int nu, int height, int width);

// Checks the SecretKey invariants (distinct in-range cells, ck a bijection)
// and the patch inequalities for the given image size. ConfigError on
// failure.
void ValidateKey(const SecretKey& key, int height, int width);

// lk = first k entries of a seeded shuffle of {0..mu*nu-1}; ck = seeded
// shuffle of {0..k-1}. ConfigError if k > mu*nu or mu*nu exceeds 65535.
SecretKey KeyGen(int num_classes, int mu, int nu, std::uint64_t seed);

inline constexpr float kPatternMean = 0.5f;
inline constexpr float kPatternSigma = 0.25f;

// The trigger set D_s: k * t images. Samples are ordered by fill level l = 1..k
// and then by pattern.
struct TriggerSet {
  data::Dataset samples;
  int patterns_per_class = 0;
  std::uint64_t pattern_seed = 0;

  std::size_t size() const { return samples.size(); }
};

// Pixel rectangle of a grid cell: cells are floor(H/mu) x floor(W/nu); any
// residual rows/columns belong to no cell.
struct CellRect {
  int row = 0;
  int col = 0;
  int height = 0;
  int width = 0;
};
CellRect CellGeometry(const SecretKey& key, const data::ImageShape& shape, int cell);

// Builds the trigger set: t clipped Gaussian patterns (mean 0.5, sigma 0.25)
// of one cell each; the level-l images fill cells lk_0..lk_{l-1} with the
// pattern (replicated over channels) and carry label ck_{l-1}. Everything
// else is 0. ConfigError if the key does not fit the shape or t < 1.
TriggerSet TrigCons(const SecretKey& key, int patterns_per_class, const data::ImageShape& shape,
                    std::uint64_t pattern_seed);

// Number of distinct secret keys, P(mu*nu, k) * k!. InputError if k > mu*nu.
boost::multiprecision::cpp_int KeyspaceSize(int num_classes, int mu_nu);

// 1 / (|D_s'| * k^k): chance that a randomly built trigger set verifies
// against a model that classifies random images uniformly.
double ForgeProbability(int num_classes, std::size_t trigger_size);

// A key as persisted together with the pattern seed that rebuilds D_s.
struct StoredKey {
  SecretKey key;
  std::uint64_t pattern_seed = 0;

  bool operator==(const StoredKey&) const = default;
};

// "FMSK" container: magic, u8 version, u16 k, u16 mu, u16 nu, k x u16 lk,
// k x u16 ck, u64 pattern seed. Little-endian.
std::vector<std::uint8_t> EncodeKey(const StoredKey& stored);
StoredKey DecodeKey(std::span<const std::uint8_t> bytes);
void SaveKey(const StoredKey& stored, const std::filesystem::path& path);
StoredKey LoadKey(const std::filesystem::path& path);

}  // namespace fedmark::trigger

#endif  // FEDMARK_TRIGGER_TRIGGER_H_
