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

#include "fedmark/trigger/trigger.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "fedmark/common/binary_io.h"
#include "fedmark/common/error.h"
#include "fedmark/common/random.h"

namespace fedmark::trigger {
namespace {

constexpr std::uint8_t kKeyVersion = 1;
constexpr int kMaxCells = 65535;

}  // namespace

PatchCheck ValidatePatchParams(int num_classes, int mu, int nu, int height, int width) {
  if (num_classes < 1 || mu < 1 || nu < 1 || height < 1 || width < 1) {
    return {false, "patch parameters must be positive integers"};
  }
  const long long cells = static_cast<long long>(mu) * nu;
  const long long pixels = static_cast<long long>(height) * width;
  if (cells < num_classes) {
    return {false, "k <= mu*nu violated: mu*nu = " + std::to_string(cells) + " < k = " +
                       std::to_string(num_classes)};
  }
  if (cells > pixels) {
    return {false, "mu*nu <= phi*xi violated: mu*nu = " + std::to_string(cells) + " > " +
                       std::to_string(pixels) + " pixels"};
  }
  return {};
}

void ValidateKey(const SecretKey& key, int height, int width) {
  if (auto check = ValidatePatchParams(key.num_classes, key.mu, key.nu, height, width); !check) {
    throw ConfigError(check.violation);
  }
  // The product inequality alone admits grids such as 1x64 on 32x32, whose
  // cells own no pixel.
  if (key.mu > height || key.nu > width) {
    throw ConfigError("patch grid " + std::to_string(key.mu) + "x" + std::to_string(key.nu) +
                      " leaves empty cells on a " + std::to_string(height) + "x" +
                      std::to_string(width) + " image");
  }
  const auto k = static_cast<std::size_t>(key.num_classes);
  if (key.location_key.size() != k || key.class_key.size() != k) {
    throw ConfigError("secret key lengths do not match k");
  }
  std::vector<bool> seen_cell(static_cast<std::size_t>(key.cells()), false);
  for (std::uint16_t cell : key.location_key) {
    if (cell >= key.cells() || seen_cell[cell]) {
      throw ConfigError("location key entries must be distinct and < mu*nu");
    }
    seen_cell[cell] = true;
  }
  std::vector<bool> seen_class(k, false);
  for (std::uint16_t c : key.class_key) {
    if (c >= k || seen_class[c]) throw ConfigError("classification key is not a permutation");
    seen_class[c] = true;
  }
}

SecretKey KeyGen(int num_classes, int mu, int nu, std::uint64_t seed) {
  if (num_classes < 1 || mu < 1 || nu < 1) throw ConfigError("key parameters must be positive");
  if (static_cast<long long>(mu) * nu > kMaxCells) throw ConfigError("mu*nu exceeds 65535");
  if (mu * nu < num_classes) {
    throw ConfigError("k <= mu*nu violated: mu*nu = " + std::to_string(mu * nu) +
                      " < k = " + std::to_string(num_classes));
  }
  SecretKey key{num_classes, mu, nu, {}, {}};
  Rng rng(DeriveSeed(seed, {0x6b657967656eULL}));
  const auto cells = ShuffledIndices(static_cast<std::size_t>(mu * nu), rng);
  for (int i = 0; i < num_classes; ++i) key.location_key.push_back(static_cast<std::uint16_t>(cells[i]));
  const auto classes = ShuffledIndices(static_cast<std::size_t>(num_classes), rng);
  for (std::size_t c : classes) key.class_key.push_back(static_cast<std::uint16_t>(c));
  return key;
}

CellRect CellGeometry(const SecretKey& key, const data::ImageShape& shape, int cell) {
  const int cell_h = shape.height / key.mu;
  const int cell_w = shape.width / key.nu;
  return {(cell / key.nu) * cell_h, (cell % key.nu) * cell_w, cell_h, cell_w};
}

TriggerSet TrigCons(const SecretKey& key, int patterns_per_class, const data::ImageShape& shape,
                    std::uint64_t pattern_seed) {
  ValidateKey(key, shape.height, shape.width);
  if (patterns_per_class < 1) throw ConfigError("trigger set needs t >= 1 patterns per class");
  const int cell_h = shape.height / key.mu;
  const int cell_w = shape.width / key.nu;

  Rng rng(DeriveSeed(pattern_seed, {0x7061747465726eULL}));
  std::normal_distribution<float> gauss(kPatternMean, kPatternSigma);
  std::vector<std::vector<float>> patterns(patterns_per_class);
  for (auto& p : patterns) {
    p.resize(static_cast<std::size_t>(cell_h) * cell_w);
    for (float& v : p) v = std::clamp(gauss(rng), 0.0f, 1.0f);
  }

  TriggerSet out{data::Dataset(shape, key.num_classes), patterns_per_class, pattern_seed};
  out.samples.Reserve(static_cast<std::size_t>(key.num_classes) * patterns_per_class);
  const std::size_t plane = static_cast<std::size_t>(shape.height) * shape.width;
  std::vector<float> image(shape.pixels());
  for (int level = 1; level <= key.num_classes; ++level) {
    for (const auto& pattern : patterns) {
      std::fill(image.begin(), image.end(), 0.0f);
      for (int f = 0; f < level; ++f) {
        const CellRect rect = CellGeometry(key, shape, key.location_key[f]);
        for (int ch = 0; ch < shape.channels; ++ch) {
          for (int y = 0; y < rect.height; ++y) {
            float* dst = image.data() + ch * plane +
                         static_cast<std::size_t>(rect.row + y) * shape.width + rect.col;
            std::copy_n(pattern.data() + static_cast<std::size_t>(y) * cell_w, cell_w, dst);
          }
        }
      }
      out.samples.Add(image, key.class_key[level - 1]);
    }
  }
  return out;
}

boost::multiprecision::cpp_int KeyspaceSize(int num_classes, int mu_nu) {
  if (num_classes < 1 || mu_nu < 1) throw InputError("keyspace arguments must be positive");
  if (num_classes > mu_nu) throw InputError("keyspace undefined for k > mu*nu");
  boost::multiprecision::cpp_int locations = 1;
  for (int i = 0; i < num_classes; ++i) locations *= mu_nu - i;
  boost::multiprecision::cpp_int labels = 1;
  for (int i = 2; i <= num_classes; ++i) labels *= i;
  return locations * labels;
}

double ForgeProbability(int num_classes, std::size_t trigger_size) {
  if (num_classes < 1 || trigger_size < 1) throw InputError("forge probability needs k, |D| >= 1");
  const double k = num_classes;
  return std::exp(-std::log(static_cast<double>(trigger_size)) - k * std::log(k));
}

std::vector<std::uint8_t> EncodeKey(const StoredKey& stored) {
  const SecretKey& key = stored.key;
  ByteWriter w;
  w.PutTag("FMSK");
  w.PutU8(kKeyVersion);
  w.PutU16(static_cast<std::uint16_t>(key.num_classes));
  w.PutU16(static_cast<std::uint16_t>(key.mu));
  w.PutU16(static_cast<std::uint16_t>(key.nu));
  for (std::uint16_t v : key.location_key) w.PutU16(v);
  for (std::uint16_t v : key.class_key) w.PutU16(v);
  w.PutU64(stored.pattern_seed);
  return w.bytes();
}

StoredKey DecodeKey(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.ExpectTag("FMSK", "key file");
  const std::size_t version_at = r.offset();
  if (r.U8("key version") != kKeyVersion) throw FormatError("unsupported key version", version_at);
  StoredKey out;
  out.key.num_classes = r.U16("k");
  out.key.mu = r.U16("mu");
  out.key.nu = r.U16("nu");
  for (int i = 0; i < out.key.num_classes; ++i) out.key.location_key.push_back(r.U16("lk"));
  for (int i = 0; i < out.key.num_classes; ++i) out.key.class_key.push_back(r.U16("ck"));
  out.pattern_seed = r.U64("pattern seed");
  r.ExpectEnd("key file");
  return out;
}

void SaveKey(const StoredKey& stored, const std::filesystem::path& path) {
  WriteFileBytes(path, EncodeKey(stored));
}

StoredKey LoadKey(const std::filesystem::path& path) { return DecodeKey(ReadFileBytes(path)); }

}  // namespace fedmark::trigger
