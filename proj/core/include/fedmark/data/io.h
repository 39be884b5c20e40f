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

#ifndef FEDMARK_DATA_IO_H_
#define FEDMARK_DATA_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fedmark/data/dataset.h"

namespace fedmark::data {

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

// Loads an IDX image/label file pair (the MNIST distribution format). Pixel
// bytes are scaled by 1/255. Errors are FormatError with the byte offset at
// which parsing failed; no partial dataset is ever returned.
Dataset LoadIdx(const std::filesystem::path& images_path,
                const std::filesystem::path& labels_path, int num_classes = 10);

// Same as LoadIdx, over in-memory file contents.
Dataset ParseIdx(std::span<const std::uint8_t> images,
                 std::span<const std::uint8_t> labels, int num_classes = 10);

// "FMDS" container: magic, u8 version, u32 k, u32 height, u32 width,
// u32 channels, u32 count, float32 pixels (CHW per image), u8 labels.
// All little-endian.
std::vector<std::uint8_t> EncodeDataset(const Dataset& dataset);
Dataset DecodeDataset(std::span<const std::uint8_t> bytes);
void SaveDataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset LoadDataset(const std::filesystem::path& path);

}  // namespace fedmark::data

#endif  // FEDMARK_DATA_IO_H_
