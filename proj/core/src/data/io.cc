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

#include "fedmark/data/io.h"

#include <string>

#include "fedmark/common/binary_io.h"
#include "fedmark/common/error.h"

namespace fedmark::data {
namespace {

constexpr std::uint8_t kDatasetVersion = 1;

std::uint32_t ReadBe32(std::span<const std::uint8_t> bytes, std::size_t at,
                       const char* what) {
  if (bytes.size() < at + 4) {
    throw FormatError(std::string("truncated ") + what, bytes.size());
  }
  return (std::uint32_t{bytes[at]} << 24) | (std::uint32_t{bytes[at + 1]} << 16) |
         (std::uint32_t{bytes[at + 2]} << 8) | std::uint32_t{bytes[at + 3]};
}

}  // namespace

Dataset ParseIdx(std::span<const std::uint8_t> images,
                 std::span<const std::uint8_t> labels, int num_classes) {
  if (ReadBe32(images, 0, "IDX image header") != kIdxImagesMagic) {
    throw FormatError("bad IDX image magic", 0);
  }
  if (ReadBe32(labels, 0, "IDX label header") != kIdxLabelsMagic) {
    throw FormatError("bad IDX label magic", 0);
  }
  const std::uint32_t count = ReadBe32(images, 4, "IDX image header");
  const std::uint32_t rows = ReadBe32(images, 8, "IDX image header");
  const std::uint32_t cols = ReadBe32(images, 12, "IDX image header");
  const std::uint32_t label_count = ReadBe32(labels, 4, "IDX label header");
  if (label_count != count) {
    throw FormatError("IDX label count " + std::to_string(label_count) +
                          " does not match image count " + std::to_string(count),
                      4);
  }
  if (rows == 0 || cols == 0) throw FormatError("IDX image with zero extent", 8);
  const std::size_t image_bytes = std::size_t{rows} * cols;
  const std::size_t need_images = 16 + image_bytes * count;
  if (images.size() < need_images) throw FormatError("truncated IDX image data", images.size());
  if (labels.size() < 8 + std::size_t{count}) {
    throw FormatError("truncated IDX label data", labels.size());
  }

  Dataset out(ImageShape{static_cast<int>(rows), static_cast<int>(cols), 1}, num_classes);
  out.Reserve(count);
  std::vector<float> pixels(image_bytes);
  for (std::size_t n = 0; n < count; ++n) {
    const std::uint8_t raw_label = labels[8 + n];
    if (raw_label >= num_classes) {
      throw FormatError("IDX label " + std::to_string(raw_label) + " outside [0, " +
                            std::to_string(num_classes) + ")",
                        8 + n);
    }
    const std::uint8_t* src = images.data() + 16 + n * image_bytes;
    for (std::size_t p = 0; p < image_bytes; ++p) pixels[p] = src[p] / 255.0f;
    out.Add(pixels, raw_label);
  }
  return out;
}

Dataset LoadIdx(const std::filesystem::path& images_path,
                const std::filesystem::path& labels_path, int num_classes) {
  const auto images = ReadFileBytes(images_path);
  const auto labels = ReadFileBytes(labels_path);
  return ParseIdx(images, labels, num_classes);
}

std::vector<std::uint8_t> EncodeDataset(const Dataset& dataset) {
  ByteWriter w;
  w.PutTag("FMDS");
  w.PutU8(kDatasetVersion);
  w.PutU32(static_cast<std::uint32_t>(dataset.num_classes()));
  w.PutU32(static_cast<std::uint32_t>(dataset.shape().height));
  w.PutU32(static_cast<std::uint32_t>(dataset.shape().width));
  w.PutU32(static_cast<std::uint32_t>(dataset.shape().channels));
  w.PutU32(static_cast<std::uint32_t>(dataset.size()));
  for (float v : dataset.pixels()) w.PutF32(v);
  for (int label : dataset.labels()) w.PutU8(static_cast<std::uint8_t>(label));
  return w.bytes();
}

Dataset DecodeDataset(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.ExpectTag("FMDS", "dataset container");
  const std::size_t version_at = r.offset();
  if (r.U8("dataset version") != kDatasetVersion) {
    throw FormatError("unsupported dataset container version", version_at);
  }
  const int k = static_cast<int>(r.U32("class count"));
  ImageShape shape;
  shape.height = static_cast<int>(r.U32("height"));
  shape.width = static_cast<int>(r.U32("width"));
  shape.channels = static_cast<int>(r.U32("channels"));
  const std::uint32_t count = r.U32("sample count");
  if (k < 1 || k > 256 || shape.height <= 0 || shape.width <= 0 || shape.channels <= 0) {
    throw FormatError("invalid dataset header", 5);
  }
  const std::size_t pixel_bytes = std::size_t{count} * shape.pixels() * 4;
  if (r.remaining() < pixel_bytes + count) {
    throw FormatError("truncated dataset payload", bytes.size());
  }
  std::vector<float> pixels(std::size_t{count} * shape.pixels());
  for (float& v : pixels) v = r.F32("pixel");
  Dataset out(shape, k);
  out.Reserve(count);
  for (std::uint32_t n = 0; n < count; ++n) {
    const std::size_t at = r.offset();
    const int label = r.U8("label");
    if (label >= k) throw FormatError("label outside class range", at);
    out.Add(std::span<const float>(pixels.data() + n * shape.pixels(), shape.pixels()), label);
  }
  r.ExpectEnd("dataset container");
  return out;
}

void SaveDataset(const Dataset& dataset, const std::filesystem::path& path) {
  WriteFileBytes(path, EncodeDataset(dataset));
}

Dataset LoadDataset(const std::filesystem::path& path) {
  return DecodeDataset(ReadFileBytes(path));
}

}  // namespace fedmark::data
