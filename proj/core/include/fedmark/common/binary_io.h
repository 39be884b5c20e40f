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

#ifndef FEDMARK_COMMON_BINARY_IO_H_
#define FEDMARK_COMMON_BINARY_IO_H_

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fedmark/common/error.h"

namespace fedmark {

// Little-endian byte sink used by every on-disk container.
class ByteWriter {
 public:
  void PutBytes(std::span<const std::uint8_t> bytes) {
    buf_.insert(buf_.end(), bytes.begin(), bytes.end());
  }
  void PutTag(std::string_view tag) {
    for (char c : tag) buf_.push_back(static_cast<std::uint8_t>(c));
  }
  void PutU8(std::uint8_t v) { buf_.push_back(v); }
  void PutU16(std::uint16_t v) { PutLe(v, 2); }
  void PutU32(std::uint32_t v) { PutLe(v, 4); }
  void PutU64(std::uint64_t v) { PutLe(v, 8); }
  void PutF32(float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    PutU32(bits);
  }

  const std::vector<std::uint8_t>& bytes() const { return buf_; }

 private:
  void PutLe(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  std::vector<std::uint8_t> buf_;
};

// Little-endian cursor over an in-memory buffer. Reads past the end raise
// FormatError carrying the offset of the failed read.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  void ExpectTag(std::string_view tag, std::string_view what) {
    const std::size_t at = pos_;
    Need(tag.size(), what);
    if (std::memcmp(bytes_.data() + pos_, tag.data(), tag.size()) != 0) {
      throw FormatError("bad magic for " + std::string(what), at);
    }
    pos_ += tag.size();
  }
  std::uint8_t U8(std::string_view what) { return static_cast<std::uint8_t>(GetLe(1, what)); }
  std::uint16_t U16(std::string_view what) { return static_cast<std::uint16_t>(GetLe(2, what)); }
  std::uint32_t U32(std::string_view what) { return static_cast<std::uint32_t>(GetLe(4, what)); }
  std::uint64_t U64(std::string_view what) { return GetLe(8, what); }
  float F32(std::string_view what) {
    const std::uint32_t bits = U32(what);
    float v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  std::span<const std::uint8_t> Bytes(std::size_t n, std::string_view what) {
    Need(n, what);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  void ExpectEnd(std::string_view what) {
    if (pos_ != bytes_.size()) {
      throw FormatError("trailing bytes after " + std::string(what), pos_);
    }
  }

 private:
  void Need(std::size_t n, std::string_view what) {
    if (remaining() < n) {
      throw FormatError("truncated " + std::string(what), bytes_.size());
    }
  }
  std::uint64_t GetLe(int n, std::string_view what) {
    Need(static_cast<std::size_t>(n), what);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

// Whole-file helpers; failures to open are InputError.
std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes);

}  // namespace fedmark

#endif  // FEDMARK_COMMON_BINARY_IO_H_
