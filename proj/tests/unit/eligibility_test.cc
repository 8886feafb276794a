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

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <map>
#include <random>

#include "sortition/eligibility.h"
#include "sortition/errors.h"

namespace sortition {
namespace {

using ::testing::HasSubstr;

std::vector<std::uint64_t> Weights(const WeightedEligibleList& l) {
  std::vector<std::uint64_t> w;
  for (const auto& e : l.entries()) w.push_back(e.weight);
  return w;
}

// Literal materialisation: each candidate repeated `weight` times in entry
// order.
std::vector<CandidateId> Materialize(const WeightedEligibleList& l) {
  std::vector<CandidateId> out;
  for (const auto& e : l.entries()) {
    for (std::uint64_t i = 0; i < e.weight; ++i) out.push_back(e.candidate);
  }
  return out;
}

TEST(WeightedListTest, SortsAndSums) {
  const auto l = WeightedEligibleList::FromWeights({{"c", 3}, {"a", 1}, {"b", 2}});
  EXPECT_EQ(l.index_space(), 6u);
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l.entries()[0].candidate, "a");
  EXPECT_EQ(l.entries()[2].candidate, "c");
}

TEST(WeightedListTest, RejectsBadEntries) {
  EXPECT_THROW(WeightedEligibleList::FromWeights({}), InvalidArgument);
  EXPECT_THROW(WeightedEligibleList::FromWeights({{"", 1}}), InvalidArgument);
  EXPECT_THROW(WeightedEligibleList::FromWeights({{"a", 0}}), InvalidArgument);
  EXPECT_THROW(WeightedEligibleList::FromWeights({{"a", 1}, {"a", 2}}),
               InvalidArgument);
  EXPECT_THROW(WeightedEligibleList::FromWeights(
                   {{"a", 1ULL << 63}, {"b", 1ULL << 63}}),
               OverflowError);
}

TEST(CandidateAtTest, Examples) {
  const auto l = WeightedEligibleList::FromWeights(
      {{"e0", 1}, {"e1", 2}, {"e2", 3}, {"e3", 4}});
  EXPECT_EQ(CandidateAt(l, 0), "e0");
  EXPECT_EQ(CandidateAt(l, 2), "e1");
  EXPECT_EQ(CandidateAt(l, 9), "e3");
  EXPECT_THROW(CandidateAt(l, 10), InvalidArgument);

  const auto m = WeightedEligibleList::FromWeights(
      {{"e0", 2}, {"e1", 3}, {"e2", 3}, {"e3", 4}});
  EXPECT_EQ(CandidateAt(m, 4), "e1");
}

TEST(CandidateAtTest, ExhaustiveMultiplicitiesForTwelfths) {
  const auto l = FromFractions({{"e0", FractionWeight::Make(1, 6)},
                                {"e1", FractionWeight::Make(1, 4)},
                                {"e2", FractionWeight::Make(1, 4)},
                                {"e3", FractionWeight::Make(1, 3)}});
  ASSERT_EQ(l.index_space(), 12u);
  std::map<CandidateId, int> hits;
  for (std::uint64_t d = 0; d < 12; ++d) ++hits[CandidateAt(l, d)];
  EXPECT_EQ(hits, (std::map<CandidateId, int>{
                      {"e0", 2}, {"e1", 3}, {"e2", 3}, {"e3", 4}}));
}

TEST(CandidateAtTest, MatchesMaterializedOracle) {
  std::mt19937_64 rng(20260101);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> size(1, 40);
    std::vector<WeightedEntry> entries;
    const int n = size(rng);
    std::uint64_t budget = 10000;
    for (int i = 0; i < n && budget > 0; ++i) {
      std::uniform_int_distribution<std::uint64_t> w(1, std::min<std::uint64_t>(budget, 600));
      const auto weight = w(rng);
      budget -= weight;
      entries.push_back({"cand-" + std::to_string(rng() % 100000) + "-" +
                             std::to_string(i),
                         weight});
    }
    const auto l = WeightedEligibleList::FromWeights(entries);
    const auto flat = Materialize(l);
    ASSERT_EQ(flat.size(), l.index_space());
    for (std::uint64_t d = 0; d < flat.size(); ++d) {
      ASSERT_EQ(CandidateAt(l, d), flat[d]) << "trial " << trial << " d " << d;
    }
  }
}

TEST(FractionTest, ParseAndReduce) {
  EXPECT_EQ(FractionWeight::Parse("2/4"), FractionWeight::Make(1, 2));
  EXPECT_EQ(FractionWeight::Parse("3"), FractionWeight::Make(3, 1));
  EXPECT_EQ(FractionWeight::Make(6, 8).ToString(), "3/4");
  for (const char* bad : {"0/3", "1/0", "a/b", "1/", "/2", "-1/2", ""}) {
    EXPECT_THROW(FractionWeight::Parse(bad), InvalidArgument) << bad;
  }
}

TEST(FromFractionsTest, Tenths) {
  const auto l = FromFractions({{"a", FractionWeight::Make(1, 10)},
                                {"b", FractionWeight::Make(2, 10)},
                                {"c", FractionWeight::Make(3, 10)},
                                {"d", FractionWeight::Make(4, 10)}});
  EXPECT_EQ(l.index_space(), 10u);
  EXPECT_EQ(Weights(l), (std::vector<std::uint64_t>{1, 2, 3, 4}));
}

TEST(FromFractionsTest, SixthsQuartersThirdsGiveTwelfths) {
  const auto l = FromFractions({{"a", FractionWeight::Make(1, 6)},
                                {"b", FractionWeight::Make(1, 4)},
                                {"c", FractionWeight::Make(1, 4)},
                                {"d", FractionWeight::Make(1, 3)}});
  EXPECT_EQ(l.index_space(), 12u);
  EXPECT_EQ(Weights(l), (std::vector<std::uint64_t>{2, 3, 3, 4}));
}

TEST(FromFractionsTest, SumMustBeOne) {
  try {
    FromFractions({{"a", FractionWeight::Make(1, 2)},
                   {"b", FractionWeight::Make(1, 3)}});
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_THAT(std::string(e.what()), HasSubstr("5/6"));
  }
}

TEST(FromFractionsTest, LcmCap) {
  // Distinct primes around 2^11 make the lcm exceed 2^32.
  const std::uint64_t p[] = {2039, 2053, 2063};
  std::vector<std::pair<CandidateId, FractionWeight>> w;
  // 1/p0 + 1/p1 + 1/p2 + remainder never gets checked: the cap trips first.
  for (int i = 0; i < 3; ++i) {
    w.push_back({"c" + std::to_string(i), FractionWeight::Make(1, p[i])});
  }
  w.push_back({"rest", FractionWeight::Make(1, 2)});
  EXPECT_THROW(FromFractions(w), OverflowError);
}

TEST(DecimalTest, Parse) {
  const Decimal d = Decimal::Parse("0.250");
  EXPECT_EQ(d.units, 250u);
  EXPECT_EQ(d.scale, 3u);
  EXPECT_EQ(Decimal::Parse("1").scale, 0u);
  for (const char* bad : {"", ".5", "1.", "0.1234567890", "-0.1", "1e-3", "0,5"}) {
    EXPECT_THROW(Decimal::Parse(bad), InvalidArgument) << bad;
  }
}

TEST(FromDecimalTest, Examples) {
  const auto a = FromDecimal({{"a", Decimal::Parse("0.25")},
                              {"b", Decimal::Parse("0.25")},
                              {"c", Decimal::Parse("0.50")}});
  EXPECT_EQ(a.index_space(), 100u);
  EXPECT_EQ(Weights(a), (std::vector<std::uint64_t>{25, 25, 50}));

  const auto b = FromDecimal({{"a", Decimal::Parse("0.333")},
                              {"b", Decimal::Parse("0.333")},
                              {"c", Decimal::Parse("0.334")}});
  EXPECT_EQ(b.index_space(), 1000u);
  EXPECT_EQ(Weights(b), (std::vector<std::uint64_t>{333, 333, 334}));
}

TEST(FromDecimalTest, MixedScalesUseLargest) {
  const auto l = FromDecimal({{"a", Decimal::Parse("0.5")},
                              {"b", Decimal::Parse("0.25")},
                              {"c", Decimal::Parse("0.25")}});
  EXPECT_EQ(l.index_space(), 100u);
  EXPECT_EQ(Weights(l), (std::vector<std::uint64_t>{50, 25, 25}));
}

TEST(FromDecimalTest, SumMustBeOne) {
  try {
    FromDecimal({{"a", Decimal::Parse("0.3")}, {"b", Decimal::Parse("0.3")}});
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_THAT(std::string(e.what()), HasSubstr("0.6"));
  }
  EXPECT_THROW(FromDecimal({{"a", Decimal::Parse("0")},
                            {"b", Decimal::Parse("1")}}),
               InvalidArgument);
}

TEST(UniformListTest, UnitWeights) {
  const auto l = UniformList({"x", "y", "z"});
  EXPECT_EQ(l.index_space(), 3u);
  EXPECT_EQ(Weights(l), (std::vector<std::uint64_t>{1, 1, 1}));
}

}  // namespace
}  // namespace sortition
