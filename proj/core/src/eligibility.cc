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

#include "sortition/eligibility.h"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>

#include "sortition/errors.h"

namespace sortition {
namespace {

using u128 = unsigned __int128;

u128 Gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::string U128ToString(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return {s.rbegin(), s.rend()};
}

std::uint64_t ParseU64(std::string_view text, std::string_view what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument(std::string(what) + ": '" + std::string(text) +
                          "' is not a non-negative integer");
  }
  return v;
}

void RejectDuplicates(std::vector<CandidateId> ids) {
  std::sort(ids.begin(), ids.end());
  auto dup = std::adjacent_find(ids.begin(), ids.end());
  if (dup != ids.end()) {
    throw InvalidArgument("duplicate candidate '" + *dup + "'");
  }
}

}  // namespace

WeightedEligibleList WeightedEligibleList::FromWeights(
    std::vector<WeightedEntry> entries) {
  if (entries.empty()) throw InvalidArgument("eligible list is empty");
  std::sort(entries.begin(), entries.end(),
            [](const WeightedEntry& a, const WeightedEntry& b) {
              return a.candidate < b.candidate;
            });
  WeightedEligibleList list;
  list.block_end_.reserve(entries.size());
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.candidate.empty()) throw InvalidArgument("empty candidate id");
    if (i > 0 && entries[i - 1].candidate == e.candidate) {
      throw InvalidArgument("duplicate candidate '" + e.candidate + "'");
    }
    if (e.weight == 0) {
      throw InvalidArgument("candidate '" + e.candidate + "' has weight 0");
    }
    if (total > std::numeric_limits<std::uint64_t>::max() - e.weight) {
      throw OverflowError("total weight exceeds 2^64 - 1");
    }
    total += e.weight;
    list.block_end_.push_back(total);
  }
  list.entries_ = std::move(entries);
  list.index_space_ = total;
  return list;
}

std::size_t WeightedEligibleList::EntryIndexAt(std::uint64_t index) const {
  if (index >= index_space_) {
    throw InvalidArgument("index " + std::to_string(index) +
                          " outside index space " +
                          std::to_string(index_space_));
  }
  auto it = std::upper_bound(block_end_.begin(), block_end_.end(), index);
  return static_cast<std::size_t>(it - block_end_.begin());
}

FractionWeight FractionWeight::Make(std::uint64_t numerator,
                                    std::uint64_t denominator) {
  if (denominator == 0) throw InvalidArgument("fraction with zero denominator");
  if (numerator == 0) {
    throw InvalidArgument("zero probability; drop the candidate instead");
  }
  const std::uint64_t g = std::gcd(numerator, denominator);
  return FractionWeight(numerator / g, denominator / g);
}

FractionWeight FractionWeight::Parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Make(ParseU64(text, "fraction"), 1);
  }
  return Make(ParseU64(text.substr(0, slash), "fraction numerator"),
              ParseU64(text.substr(slash + 1), "fraction denominator"));
}

std::string FractionWeight::ToString() const {
  return std::to_string(numerator_) + "/" + std::to_string(denominator_);
}

Decimal Decimal::Parse(std::string_view text) {
  const auto dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  std::string_view frac =
      dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty() || (dot != std::string_view::npos && frac.empty())) {
    throw InvalidArgument("decimal '" + std::string(text) + "' is malformed");
  }
  if (frac.size() > kMaxDecimalScale) {
    throw OverflowError("decimal '" + std::string(text) + "' has more than " +
                        std::to_string(kMaxDecimalScale) +
                        " fractional digits");
  }
  Decimal d;
  d.scale = static_cast<unsigned>(frac.size());
  const std::uint64_t w = ParseU64(whole, "decimal");
  const std::uint64_t f = frac.empty() ? 0 : ParseU64(frac, "decimal");
  std::uint64_t pow = 1;
  for (unsigned i = 0; i < d.scale; ++i) pow *= 10;
  if (w > (std::numeric_limits<std::uint64_t>::max() - f) / pow) {
    throw OverflowError("decimal '" + std::string(text) + "' out of range");
  }
  d.units = w * pow + f;
  return d;
}

WeightedEligibleList UniformList(const std::vector<CandidateId>& candidates) {
  if (candidates.empty()) throw InvalidArgument("eligible list is empty");
  RejectDuplicates(candidates);
  std::vector<WeightedEntry> entries;
  entries.reserve(candidates.size());
  for (const auto& c : candidates) entries.push_back({c, 1});
  return WeightedEligibleList::FromWeights(std::move(entries));
}

WeightedEligibleList FromFractions(
    const std::vector<std::pair<CandidateId, FractionWeight>>& weights) {
  if (weights.empty()) throw InvalidArgument("eligible list is empty");

  u128 lcm = 1;
  for (const auto& [id, p] : weights) {
    lcm = lcm / Gcd128(lcm, p.denominator()) * p.denominator();
    if (lcm > kMaxLcmIndexSpace) {
      throw OverflowError(
          "lcm of denominators exceeds 2^32; rescale the distribution "
          "(e.g. decimal weights)");
    }
  }

  u128 sum = 0;
  std::vector<WeightedEntry> entries;
  entries.reserve(weights.size());
  for (const auto& [id, p] : weights) {
    const u128 w = static_cast<u128>(p.numerator()) * (lcm / p.denominator());
    sum += w;
    if (w > std::numeric_limits<std::uint64_t>::max()) {
      throw OverflowError("weight of '" + id + "' out of range");
    }
    entries.push_back({id, static_cast<std::uint64_t>(w)});
  }
  if (sum != lcm) {
    const u128 g = Gcd128(sum, lcm);
    throw InvalidArgument("probabilities sum to " + U128ToString(sum / g) +
                          "/" + U128ToString(lcm / g) + ", expected 1");
  }
  return WeightedEligibleList::FromWeights(std::move(entries));
}

WeightedEligibleList FromDecimal(
    const std::vector<std::pair<CandidateId, Decimal>>& weights) {
  if (weights.empty()) throw InvalidArgument("eligible list is empty");
  unsigned scale = 0;
  for (const auto& [id, d] : weights) {
    if (d.scale > kMaxDecimalScale) {
      throw OverflowError("decimal scale above " +
                          std::to_string(kMaxDecimalScale));
    }
    scale = std::max(scale, d.scale);
  }
  std::uint64_t space = 1;
  for (unsigned i = 0; i < scale; ++i) space *= 10;

  u128 sum = 0;
  std::vector<WeightedEntry> entries;
  entries.reserve(weights.size());
  for (const auto& [id, d] : weights) {
    u128 w = d.units;
    for (unsigned i = d.scale; i < scale; ++i) w *= 10;
    sum += w;
    if (w > space) {
      throw InvalidArgument("probability of '" + id + "' exceeds 1");
    }
    entries.push_back({id, static_cast<std::uint64_t>(w)});
  }
  if (sum != space) {
    // Render the sum at scale k, e.g. 0.6.
    std::string digits = U128ToString(sum);
    if (scale > 0) {
      if (digits.size() <= scale) {
        digits.insert(0, scale + 1 - digits.size(), '0');
      }
      digits.insert(digits.size() - scale, ".");
      while (digits.back() == '0') digits.pop_back();
      if (digits.back() == '.') digits.pop_back();
    }
    throw InvalidArgument("probabilities sum to " + digits + ", expected 1");
  }
  return WeightedEligibleList::FromWeights(std::move(entries));
}

const CandidateId& CandidateAt(const WeightedEligibleList& list,
                               std::uint64_t index) {
  return list.entries()[list.EntryIndexAt(index)].candidate;
}

}  // namespace sortition
