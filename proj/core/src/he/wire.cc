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

#include "fedmark/he/wire.h"

#include "fedmark/common/binary_io.h"
#include "fedmark/common/error.h"

namespace fedmark::he {

std::vector<std::uint8_t> EncodeCiphertext(const Ciphertext& ct) {
  ByteWriter w;
  w.PutTag("FMCT");
  w.PutU32(ct.scheme_id);
  w.PutU64(ct.dimension());
  w.PutU32(ct.scale_bits);
  w.PutU32(ct.scale_exponent);
  w.PutU32(ct.level);
  w.PutU64(ct.key_fingerprint);
  w.PutU32(static_cast<std::uint32_t>(ct.terms.size()));
  for (const MaskTerm& t : ct.terms) {
    w.PutU64(t.nonce);
    w.PutU64(static_cast<std::uint64_t>(t.coefficient));
    w.PutU64(static_cast<std::uint64_t>(t.coefficient >> 64));
  }
  for (Word v : ct.payload) {
    w.PutU64(static_cast<std::uint64_t>(v));
    w.PutU64(static_cast<std::uint64_t>(v >> 64));
  }
  return w.bytes();
}

Ciphertext DecodeCiphertext(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.ExpectTag("FMCT", "ciphertext");
  Ciphertext ct;
  ct.scheme_id = r.U32("scheme id");
  const std::size_t dim_at = r.offset();
  const std::uint64_t d = r.U64("dimension");
  ct.scale_bits = r.U32("scale bits");
  ct.scale_exponent = r.U32("scale exponent");
  ct.level = r.U32("level");
  ct.key_fingerprint = r.U64("key fingerprint");
  const std::uint32_t n_terms = r.U32("term count");
  if (r.remaining() < std::uint64_t{n_terms} * 24) throw FormatError("truncated mask terms", bytes.size());
  for (std::uint32_t i = 0; i < n_terms; ++i) {
    MaskTerm t;
    t.nonce = r.U64("nonce");
    const std::uint64_t lo = r.U64("coefficient");
    const std::uint64_t hi = r.U64("coefficient");
    t.coefficient = (static_cast<Word>(hi) << 64) | lo;
    ct.terms.push_back(t);
  }
  if (r.remaining() / 16 < d) throw FormatError("ciphertext payload shorter than dimension", dim_at);
  ct.payload.resize(d);
  for (Word& v : ct.payload) {
    const std::uint64_t lo = r.U64("payload");
    const std::uint64_t hi = r.U64("payload");
    v = (static_cast<Word>(hi) << 64) | lo;
  }
  r.ExpectEnd("ciphertext");
  return ct;
}

}  // namespace fedmark::he
