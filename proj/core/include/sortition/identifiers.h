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

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "sortition/bytes.h"

namespace sortition {

// Identifier of one drawing procedure, rendered as `proceeding#counter`.
//
// Parsing splits on the last '#', so proceeding ids read from legacy data
// may contain the separator; Make() refuses them for new identifiers.
class DrawId {
 public:
  DrawId() = default;

  static DrawId Make(std::string proceeding_id, std::uint64_t counter);
  static DrawId Parse(std::string_view text);

  const std::string& proceeding_id() const { return proceeding_id_; }
  std::uint64_t counter() const { return counter_; }

  std::string Render() const;
  DrawId Next() const;

  friend bool operator==(const DrawId&, const DrawId&) = default;
  // Ordered by rendered text, the order draws take inside a chain.
  friend std::strong_ordering operator<=>(const DrawId& a, const DrawId& b) {
    return a.Render() <=> b.Render();
  }

 private:
  DrawId(std::string proceeding_id, std::uint64_t counter)
      : proceeding_id_(std::move(proceeding_id)), counter_(counter) {}

  std::string proceeding_id_;
  std::uint64_t counter_ = 0;
};

inline constexpr std::size_t kFingerprintSize = 32;

// SHA-256 of a stakeholder's raw public key.
struct Fingerprint {
  std::array<std::uint8_t, kFingerprintSize> bytes{};

  static Fingerprint FromBytes(ByteSpan raw);
  std::string Hex() const { return ToHex(bytes); }
  // First 8 bytes in hex; what operators see in reports.
  std::string Short() const { return Hex().substr(0, 16); }

  friend auto operator<=>(const Fingerprint&, const Fingerprint&) = default;
};

struct StakeholderId {
  Fingerprint fingerprint;
  std::string display_name;  // Not part of any hash input.

  // Identity is the fingerprint alone.
  friend bool operator==(const StakeholderId& a, const StakeholderId& b) {
    return a.fingerprint == b.fingerprint;
  }
};

using CandidateId = std::string;

}  // namespace sortition

template <>
struct std::hash<sortition::Fingerprint> {
  std::size_t operator()(const sortition::Fingerprint& f) const noexcept {
    std::size_t h = 0;
    for (std::size_t i = 0; i < sizeof(std::size_t); ++i) {
      h = (h << 8) | f.bytes[i];
    }
    return h;
  }
};
