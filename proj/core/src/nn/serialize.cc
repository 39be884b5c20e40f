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

#include "fedmark/nn/serialize.h"

#include "fedmark/common/binary_io.h"
#include "fedmark/common/error.h"

namespace fedmark::nn {
namespace {

constexpr std::uint8_t kModelVersion = 1;

}  // namespace

std::vector<std::uint8_t> EncodeModel(const ModelParams& model) {
  ValidateModel(model);
  ByteWriter w;
  w.PutTag("FMMP");
  w.PutU8(kModelVersion);
  const auto& in = model.arch.input_shape();
  w.PutU32(static_cast<std::uint32_t>(in.height));
  w.PutU32(static_cast<std::uint32_t>(in.width));
  w.PutU32(static_cast<std::uint32_t>(in.channels));
  w.PutU32(static_cast<std::uint32_t>(model.arch.layers().size()));
  for (const LayerSpec& s : model.arch.layers()) {
    w.PutU8(static_cast<std::uint8_t>(s.kind));
    w.PutU32(static_cast<std::uint32_t>(s.size));
    w.PutU32(static_cast<std::uint32_t>(s.kernel));
    w.PutU32(static_cast<std::uint32_t>(s.stride));
  }
  w.PutU64(model.values.size());
  for (float v : model.values) w.PutF32(v);
  return w.bytes();
}

ModelParams DecodeModel(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.ExpectTag("FMMP", "model container");
  const std::size_t version_at = r.offset();
  if (r.U8("model version") != kModelVersion) {
    throw FormatError("unsupported model container version", version_at);
  }
  data::ImageShape in;
  in.height = static_cast<int>(r.U32("height"));
  in.width = static_cast<int>(r.U32("width"));
  in.channels = static_cast<int>(r.U32("channels"));
  const std::uint32_t n_layers = r.U32("layer count");
  std::vector<LayerSpec> layers;
  for (std::uint32_t i = 0; i < n_layers; ++i) {
    const std::size_t at = r.offset();
    const std::uint8_t kind = r.U8("layer kind");
    if (kind > static_cast<std::uint8_t>(LayerKind::kRelu)) {
      throw FormatError("unknown layer kind", at);
    }
    LayerSpec s;
    s.kind = static_cast<LayerKind>(kind);
    s.size = static_cast<int>(r.U32("layer size"));
    s.kernel = static_cast<int>(r.U32("layer kernel"));
    s.stride = static_cast<int>(r.U32("layer stride"));
    layers.push_back(s);
  }
  const std::size_t arch_end = r.offset();
  Architecture arch;
  try {
    arch = Architecture(std::move(layers), in);
  } catch (const ConfigError& e) {
    throw FormatError(std::string("invalid architecture: ") + e.what(), arch_end);
  }
  const std::uint64_t count = r.U64("parameter count");
  if (count != arch.parameter_count()) {
    throw FormatError("parameter count does not match architecture", arch_end);
  }
  ModelParams model{std::move(arch), std::vector<float>(count)};
  for (float& v : model.values) v = r.F32("parameter");
  r.ExpectEnd("model container");
  return model;
}

void SaveModel(const ModelParams& model, const std::filesystem::path& path) {
  WriteFileBytes(path, EncodeModel(model));
}

ModelParams LoadModel(const std::filesystem::path& path) {
  return DecodeModel(ReadFileBytes(path));
}

}  // namespace fedmark::nn
