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

#include "sortition/errors.h"
#include "sortition/model.h"
#include "tests/support/test_support.h"

namespace sortition {
namespace {

using ::testing::Contains;
using ::testing::HasSubstr;

DrawSpec Golden() { return testing::GoldenDocument().spec.draws[0]; }

Fingerprint Fp(std::uint8_t b) {
  Fingerprint f;
  f.bytes.fill(b);
  return f;
}

TEST(ValidateSpecTest, GoldenIsValid) {
  EXPECT_TRUE(ValidateSpec(Golden()).ok());
}

TEST(ValidateSpecTest, ReportsEveryViolation) {
  DrawSpec s;
  const auto r = ValidateSpec(s);
  EXPECT_THAT(r.violations, Contains("malformed DID: empty proceeding id"));
  EXPECT_THAT(r.violations, Contains("no stakeholders"));
  EXPECT_THAT(r.violations, Contains("empty eligible list"));
}

TEST(ValidateSpecTest, UnsortedAndDuplicateStakeholders) {
  DrawSpec s = Golden();
  s.stakeholders = {{Fp(2), "b"}, {Fp(1), "a"}};
  EXPECT_THAT(ValidateSpec(s).violations, Contains("unsorted stakeholders"));

  s.stakeholders = {{Fp(1), "a"}, {Fp(1), "a2"}, {Fp(1), "a3"}, {Fp(2), "b"}};
  const auto r = ValidateSpec(s);
  EXPECT_EQ(std::count_if(r.violations.begin(), r.violations.end(),
                          [](const std::string& v) {
                            return v.rfind("duplicate stakeholder", 0) == 0;
                          }),
            1);
}

TEST(ValidateSpecTest, StakeholderCap) {
  DrawSpec s = Golden();
  s.stakeholders.clear();
  for (std::size_t i = 0; i <= kMaxStakeholders; ++i) {
    Fingerprint f;
    f.bytes[0] = static_cast<std::uint8_t>(i >> 16);
    f.bytes[1] = static_cast<std::uint8_t>(i >> 8);
    f.bytes[2] = static_cast<std::uint8_t>(i);
    s.stakeholders.push_back({f, ""});
  }
  EXPECT_THAT(ValidateSpec(s).violations,
              Contains("more than 65536 stakeholders"));
  s.stakeholders.pop_back();
  EXPECT_TRUE(ValidateSpec(s).ok());
}

TEST(DrawListTest, OrderAndStakeholders) {
  const auto doc = testing::GoldenDocument({"case-7#0", "case-7#1"});
  DrawList list{doc.spec.draws};
  EXPECT_TRUE(ValidateDrawList(list).ok());

  std::swap(list.draws[0], list.draws[1]);
  EXPECT_THAT(ValidateDrawList(list).Summary(), HasSubstr("ascending"));

  list.draws[0] = list.draws[1];
  EXPECT_THAT(ValidateDrawList(list).Summary(), HasSubstr("duplicate draw id"));

  list = DrawList{doc.spec.draws};
  list.draws[1].stakeholders.pop_back();
  EXPECT_THAT(ValidateDrawList(list).Summary(), HasSubstr("differ"));

  EXPECT_FALSE(ValidateDrawList(DrawList{}).ok());
}

TEST(SessionSpecTest, SingleMustHoldOneDraw) {
  auto doc = testing::GoldenDocument({"case-7#0", "case-7#1"});
  SessionSpec s = doc.spec;
  s.mode = DrawMode::kSingle;
  EXPECT_FALSE(ValidateSessionSpec(s).ok());
  EXPECT_THROW(SessionSpec::Chain(DrawList{{}}), InvalidArgument);
}

TEST(CanonicalEncodeTest, RoundTrip) {
  const DrawSpec s = Golden();
  const Bytes enc = CanonicalEncode(s);
  const DrawSpec back = DecodeDrawSpec(enc);
  EXPECT_EQ(back, s);
  EXPECT_EQ(CanonicalEncode(back), enc);
}

TEST(CanonicalEncodeTest, DisplayNamesAreNotEncoded) {
  DrawSpec a = Golden();
  DrawSpec b = a;
  b.stakeholders[0].display_name = "someone else";
  EXPECT_EQ(CanonicalEncode(a), CanonicalEncode(b));
}

TEST(CanonicalEncodeTest, EveryFieldChangesTheEncoding) {
  const DrawSpec s = Golden();
  const Bytes base = CanonicalEncode(s);
  DrawSpec t = s;
  t.did = DrawId::Make("case-7", 1);
  EXPECT_NE(CanonicalEncode(t), base);
  t = s;
  t.info = "golden ";
  EXPECT_NE(CanonicalEncode(t), base);
  t = s;
  t.eligible = WeightedEligibleList::FromWeights(
      {{"alice", 1}, {"bob", 3}, {"carol", 2}});
  EXPECT_NE(CanonicalEncode(t), base);
  t = s;
  t.stakeholders.pop_back();
  EXPECT_NE(CanonicalEncode(t), base);
}

TEST(CanonicalEncodeTest, RejectsInvalidSpec) {
  DrawSpec s = Golden();
  s.stakeholders.clear();
  EXPECT_THROW(CanonicalEncode(s), InvalidArgument);
}

TEST(DecodeDrawSpecTest, StrictParsing) {
  const Bytes enc = CanonicalEncode(Golden());
  // Every strict prefix fails.
  for (std::size_t n = 0; n < enc.size(); ++n) {
    EXPECT_THROW(DecodeDrawSpec(ByteSpan(enc.data(), n)), FormatError) << n;
  }
  Bytes extra = enc;
  extra.push_back(0);
  EXPECT_THROW(DecodeDrawSpec(extra), FormatError);
  Bytes tag = enc;
  tag[0] = 'X';
  EXPECT_THROW(DecodeDrawSpec(tag), FormatError);
}

TEST(DecodeDrawSpecTest, RejectsNonCanonicalEntryOrder) {
  ByteWriter w;
  w.Raw("DRAWv1");
  w.Field("x#0");
  w.Count(1);
  w.Field(Fp(1).bytes);
  w.Count(2);
  w.Field("b");
  w.U64(1);
  w.Field("a");
  w.U64(1);
  w.Field("");
  EXPECT_THROW(DecodeDrawSpec(w.bytes()), FormatError);
}

TEST(SuccessorTest, IncrementsCounterAndDropsStakeholders) {
  const DrawSpec s = Golden();
  const Fingerprint gone = s.stakeholders[1].fingerprint;
  const DrawSpec next = SuccessorSpec(s, {gone});
  EXPECT_EQ(next.did.Render(), "case-7#1");
  EXPECT_EQ(next.stakeholders.size(), 2u);
  EXPECT_EQ(next.eligible, s.eligible);
  EXPECT_EQ(next.info, s.info);
}

TEST(SuccessorTest, ChainResortsAfterIncrement) {
  const auto doc = testing::GoldenDocument({"x#10", "x#9"});
  ASSERT_EQ(doc.spec.draws[0].did.Render(), "x#10");
  const SessionSpec next = SuccessorSessionSpec(doc.spec, {});
  EXPECT_EQ(next.draws[0].did.Render(), "x#10");
  EXPECT_EQ(next.draws[1].did.Render(), "x#11");
}

TEST(SuccessorTest, RemovingEveryoneFails) {
  const DrawSpec s = Golden();
  std::vector<Fingerprint> all;
  for (const auto& x : s.stakeholders) all.push_back(x.fingerprint);
  EXPECT_THROW(SuccessorSpec(s, all), InvalidArgument);
}

}  // namespace
}  // namespace sortition
