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

#include "sortition/bytes.h"

#include <sodium.h>

#include <limits>

#include "sortition/errors.h"

namespace sortition {

void ByteWriter::Raw(ByteSpan data) {
  out_.insert(out_.end(), data.begin(), data.end());
}

void ByteWriter::Raw(std::string_view ascii) { Raw(AsBytes(ascii)); }

void ByteWriter::U8(std::uint8_t v) { out_.push_back(v); }

void ByteWriter::U32(std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

void ByteWriter::U64(std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

void ByteWriter::Count(std::size_t n) {
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidArgument("field too long for a 4-byte length prefix");
  }
  U32(static_cast<std::uint32_t>(n));
}

void ByteWriter::Field(ByteSpan data) {
  Count(data.size());
  Raw(data);
}

void ByteWriter::Field(std::string_view text) { Field(AsBytes(text)); }

void ByteReader::Need(std::size_t n) const {
  if (data_.size() - pos_ < n) {
    throw FormatError("truncated input", pos_);
  }
}

void ByteReader::ExpectRaw(std::string_view ascii) {
  Need(ascii.size());
  for (std::size_t i = 0; i < ascii.size(); ++i) {
    if (data_[pos_ + i] != static_cast<std::uint8_t>(ascii[i])) {
      throw FormatError("expected tag '" + std::string(ascii) + "'", pos_);
    }
  }
  pos_ += ascii.size();
}

std::uint8_t ByteReader::U8() {
  Need(1);
  return data_[pos_++];
}

std::uint32_t ByteReader::U32() {
  Need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_++];
  return v;
}

std::uint64_t ByteReader::U64() {
  Need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_++];
  return v;
}

Bytes ByteReader::Raw(std::size_t n) {
  Need(n);
  Bytes out(data_.begin() + pos_, data_.begin() + pos_ + n);
  pos_ += n;
  return out;
}

Bytes ByteReader::Field() {
  std::size_t start = pos_;
  std::uint32_t len = U32();
  if (data_.size() - pos_ < len) {
    throw FormatError("length prefix exceeds remaining input", start);
  }
  return Raw(len);
}

std::string ByteReader::TextField() {
  Bytes raw = Field();
  return {raw.begin(), raw.end()};
}

std::size_t ByteReader::Count() { return U32(); }

void ByteReader::ExpectEnd() const {
  if (!AtEnd()) throw FormatError("trailing bytes", pos_);
}

std::string ToHex(ByteSpan data) {
  std::string out(data.size() * 2 + 1, '\0');
  sodium_bin2hex(out.data(), out.size(), data.data(), data.size());
  out.pop_back();
  return out;
}

Bytes FromHex(std::string_view hex) {
  Bytes out(hex.size() / 2 + 1);
  std::size_t len = 0;
  const char* end = nullptr;
  if (sodium_hex2bin(out.data(), out.size(), hex.data(), hex.size(), nullptr,
                     &len, &end) != 0 ||
      end != hex.data() + hex.size()) {
    throw FormatError("invalid hex string");
  }
  out.resize(len);
  return out;
}

std::string ToBase64Url(ByteSpan data) {
  const std::size_t cap = sodium_base64_encoded_len(
      data.size(), sodium_base64_VARIANT_URLSAFE_NO_PADDING);
  std::string out(cap, '\0');
  sodium_bin2base64(out.data(), cap, data.data(), data.size(),
                    sodium_base64_VARIANT_URLSAFE_NO_PADDING);
  out.resize(cap - 1);
  return out;
}

Bytes FromBase64Url(std::string_view text) {
  Bytes out(text.size() * 3 / 4 + 3);
  std::size_t len = 0;
  const char* end = nullptr;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(),
                        nullptr, &len, &end,
                        sodium_base64_VARIANT_URLSAFE_NO_PADDING) != 0 ||
      end != text.data() + text.size()) {
    throw FormatError("invalid base64url string");
  }
  out.resize(len);
  return out;
}

}  // namespace sortition
