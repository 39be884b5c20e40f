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

#ifndef FEDMARK_NN_SERIALIZE_H_
#define FEDMARK_NN_SERIALIZE_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fedmark/nn/model.h"

namespace fedmark::nn {

// "FMMP" container: magic, u8 version, u32 height, u32 width, u32 channels,
// u32 layer count, per layer (u8 kind, u32 size, u32 kernel, u32 stride),
// u64 parameter count, float32 values. Little-endian.
std::vector<std::uint8_t> EncodeModel(const ModelParams& model);
ModelParams DecodeModel(std::span<const std::uint8_t> bytes);
void SaveModel(const ModelParams& model, const std::filesystem::path& path);
ModelParams LoadModel(const std::filesystem::path& path);

}  // namespace fedmark::nn

#endif  // FEDMARK_NN_SERIALIZE_H_
