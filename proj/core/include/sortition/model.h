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

#include <string>
#include <vector>

#include "sortition/bytes.h"
#include "sortition/eligibility.h"
#include "sortition/identifiers.h"

namespace sortition {

// At most 2^16 stakeholders, which keeps share sums inside 128 bits.
inline constexpr std::size_t kMaxStakeholders = std::size_t{1} << 16;

// The public context of one drawing: who draws, from what, and why.
struct DrawSpec {
  DrawId did;
  std::vector<StakeholderId> stakeholders;  // Ascending by fingerprint.
  WeightedEligibleList eligible;
  std::string info;

  friend bool operator==(const DrawSpec&, const DrawSpec&) = default;
};

// Several drawings performed by the same stakeholders under one chained
// commitment. Sorted by rendered DrawId.
struct DrawList {
  std::vector<DrawSpec> draws;

  friend bool operator==(const DrawList&, const DrawList&) = default;
};

enum class DrawMode : std::uint8_t { kSingle = 0x01, kChain = 0x02 };

const char* ToString(DrawMode mode);
DrawMode ParseDrawMode(std::string_view text);

// What a session draws: exactly one spec (single) or a DrawList (chain).
struct SessionSpec {
  DrawMode mode = DrawMode::kSingle;
  std::vector<DrawSpec> draws;

  static SessionSpec Single(DrawSpec spec);
  static SessionSpec Chain(DrawList list);

  const std::vector<StakeholderId>& stakeholders() const {
    return draws.front().stakeholders;
  }
  std::vector<DrawId> draw_ids() const;

  friend bool operator==(const SessionSpec&, const SessionSpec&) = default;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  std::string Summary() const;
};

ValidationReport ValidateSpec(const DrawSpec& spec);
ValidationReport ValidateDrawList(const DrawList& list);
ValidationReport ValidateSessionSpec(const SessionSpec& spec);

// Throws InvalidArgument listing the violations when the report fails.
void RequireValid(const ValidationReport& report, std::string_view what);

// DRAWv1 layout:
//   "DRAWv1"
//   field(rendered did)
//   count(stakeholders)  { field(fingerprint) }
//   count(entries)       { field(candidate) u64(weight) }
//   field(info)
// where field(x) = u32be(len) || x and count(n) = u32be(n).
Bytes CanonicalEncode(const DrawSpec& spec);

// Inverse of CanonicalEncode. Display names are not encoded and come back
// empty.
DrawSpec DecodeDrawSpec(ByteSpan bytes);

// Successor after an aborted drawing: counter + 1, `removed` stakeholders
// dropped, everything else unchanged.
DrawSpec SuccessorSpec(const DrawSpec& spec,
                       const std::vector<Fingerprint>& removed);
SessionSpec SuccessorSessionSpec(const SessionSpec& spec,
                                 const std::vector<Fingerprint>& removed);

}  // namespace sortition
