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

#ifndef FEDMARK_COMMON_ERROR_H_
#define FEDMARK_COMMON_ERROR_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fedmark {

// Base class of every error raised by the library. The subclasses mirror the
// failure categories callers are expected to distinguish.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid architecture, out-of-range parameters, bad experiment settings.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Caller-supplied data violates a precondition (empty dataset, n = 0, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

// Shape or length disagreement between two operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Malformed on-disk container. `offset` is the byte position where parsing
// stopped.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

// Decryption attempted with a key that did not produce the ciphertext.
class AuthenticationError : public Error {
 public:
  using Error::Error;
};

// Homomorphic operation on incompatible ciphertexts.
class SchemeMismatchError : public Error {
 public:
  using Error::Error;
};

// A black-box model endpoint failed to answer.
class TransportError : public Error {
 public:
  using Error::Error;
};

}  // namespace fedmark

#endif  // FEDMARK_COMMON_ERROR_H_
