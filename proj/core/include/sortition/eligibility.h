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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sortition/identifiers.h"

namespace sortition {

// Largest index space produced from fractions. Larger denominators raise
// OverflowError; FromDecimal accepts the same weights at a power-of-ten scale.
inline constexpr std::uint64_t kMaxLcmIndexSpace = std::uint64_t{1} << 32;
inline constexpr unsigned kMaxDecimalScale = 9;

struct WeightedEntry {
  CandidateId candidate;
  std::uint64_t weight = 0;

  friend bool operator==(const WeightedEntry&, const WeightedEntry&) = default;
};

// Candidates with integer weights, standing for the virtual list in which
// each candidate is repeated `weight` times in one contiguous block.
// Entries are kept sorted by candidate bytes; index_space is the weight sum.
class WeightedEligibleList {
 public:
  WeightedEligibleList() = default;

  // Sorts the entries; rejects duplicates, empty ids, zero weights and
  // sums that do not fit in 64 bits.
  static WeightedEligibleList FromWeights(std::vector<WeightedEntry> entries);

  const std::vector<WeightedEntry>& entries() const { return entries_; }
  std::uint64_t index_space() const { return index_space_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Position of the block holding `index`.
  std::size_t EntryIndexAt(std::uint64_t index) const;

  friend bool operator==(const WeightedEligibleList& a,
                         const WeightedEligibleList& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<WeightedEntry> entries_;
  std::vector<std::uint64_t> block_end_;  // Exclusive cumulative sums.
  std::uint64_t index_space_ = 0;
};

// p = numerator / denominator, always reduced.
class FractionWeight {
 public:
  static FractionWeight Make(std::uint64_t numerator, std::uint64_t denominator);
  // "a/b", or a bare integer meaning a/1.
  static FractionWeight Parse(std::string_view text);

  std::uint64_t numerator() const { return numerator_; }
  std::uint64_t denominator() const { return denominator_; }
  std::string ToString() const;

  friend bool operator==(const FractionWeight&, const FractionWeight&) = default;

 private:
  FractionWeight(std::uint64_t n, std::uint64_t d)
      : numerator_(n), denominator_(d) {}

  std::uint64_t numerator_ = 1;
  std::uint64_t denominator_ = 1;
};

// Fixed-point decimal: units / 10^scale.
struct Decimal {
  std::uint64_t units = 0;
  unsigned scale = 0;

  static Decimal Parse(std::string_view text);
};

WeightedEligibleList UniformList(const std::vector<CandidateId>& candidates);

WeightedEligibleList FromFractions(
    const std::vector<std::pair<CandidateId, FractionWeight>>& weights);

// The scale k is the largest number of fractional digits among the inputs.
WeightedEligibleList FromDecimal(
    const std::vector<std::pair<CandidateId, Decimal>>& weights);

const CandidateId& CandidateAt(const WeightedEligibleList& list,
                               std::uint64_t index);

}  // namespace sortition
