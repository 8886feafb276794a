// Copyright 2026 The Sortition Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sortition {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

// Appends big-endian integers and length-prefixed fields. This is the only
// way the wire formats (DRAWv1, MSGv1, hash inputs) are produced.
class ByteWriter {
 public:
  ByteWriter() = default;

  void Raw(ByteSpan data);
  void Raw(std::string_view ascii);
  void U8(std::uint8_t v);
  void U32(std::uint32_t v);
  void U64(std::uint64_t v);
  // 4-byte big-endian length followed by the bytes.
  void Field(ByteSpan data);
  void Field(std::string_view text);
  void Count(std::size_t n);

  const Bytes& bytes() const& { return out_; }
  Bytes Take() && { return std::move(out_); }

 private:
  Bytes out_;
};

// Strict reader for the formats above. Every failure throws FormatError
// carrying the offset at which decoding stopped.
class ByteReader {
 public:
  explicit ByteReader(ByteSpan data) : data_(data) {}

  void ExpectRaw(std::string_view ascii);
  std::uint8_t U8();
  std::uint32_t U32();
  std::uint64_t U64();
  Bytes Field();
  std::string TextField();
  std::size_t Count();
  Bytes Raw(std::size_t n);

  std::size_t offset() const { return pos_; }
  bool AtEnd() const { return pos_ == data_.size(); }
  void ExpectEnd() const;

 private:
  void Need(std::size_t n) const;

  ByteSpan data_;
  std::size_t pos_ = 0;
};

std::string ToHex(ByteSpan data);
Bytes FromHex(std::string_view hex);

// RFC 4648 base64url without padding, the textual form of every byte field
// in the JSON documents.
std::string ToBase64Url(ByteSpan data);
Bytes FromBase64Url(std::string_view text);

inline ByteSpan AsBytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace sortition
