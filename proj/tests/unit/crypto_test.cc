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

#include <gtest/gtest.h>

#include <bitset>
#include <cmath>
#include <random>
#include <set>

#include "sortition/crypto.h"
#include "sortition/errors.h"
#include "tests/support/test_support.h"

namespace sortition {
namespace {

DrawSpec Golden() { return testing::GoldenDocument().spec.draws[0]; }

Mask PatternMask() {
  Mask m;
  for (std::size_t i = 0; i < m.bytes.size(); ++i) {
    m.bytes[i] = static_cast<std::uint8_t>(i);
  }
  return m;
}

Bytes Concat(std::string_view tag, const Bytes& spec, ByteSpan prev,
             std::uint64_t share) {
  ByteWriter w;
  w.Raw(tag);
  w.Raw(spec);
  w.Raw(prev);
  w.U64(share);
  return std::move(w).Take();
}

TEST(Sha256Test, KnownAnswer) {
  // FIPS 180-2 example "abc".
  EXPECT_EQ(ToHex(Sha256(AsBytes("abc"))),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(GenMaskTest, DistinctAndBalanced) {
  constexpr int kN = 100000;
  std::set<Digest> seen;
  std::uint64_t ones = 0;
  for (int i = 0; i < kN; ++i) {
    const Mask m = GenMask();
    seen.insert(m.bytes);
    for (auto b : m.bytes) ones += std::bitset<8>(b).count();
  }
  EXPECT_EQ(seen.size(), static_cast<std::size_t>(kN));
  // Monobit: ones ~ Binomial(256 N, 1/2).
  const double bits = 256.0 * kN;
  const double sigma = std::sqrt(bits * 0.25);
  EXPECT_LT(std::abs(static_cast<double>(ones) - bits / 2), 3 * sigma);
}

TEST(GenShareTest, UniformOverTen) {
  constexpr int kN = 100000;
  std::array<int, 10> counts{};
  for (int i = 0; i < kN; ++i) {
    const Share s = GenShare(10);
    ASSERT_LT(s.value, 10u);
    ++counts[s.value];
  }
  const double p = 0.1;
  const double sigma = std::sqrt(kN * p * (1 - p));
  for (int v = 0; v < 10; ++v) {
    EXPECT_LT(std::abs(counts[v] - kN * p), 3 * sigma) << "value " << v;
  }
}

TEST(GenShareTest, EdgeSpaces) {
  EXPECT_THROW(GenShare(0), InvalidArgument);
  EXPECT_EQ(GenShare(1).value, 0u);
  const std::uint64_t big = (1ULL << 63) + 12345;
  for (int i = 0; i < 1000; ++i) EXPECT_LT(GenShare(big).value, big);
}

TEST(CommitTest, MatchesDefinition) {
  const DrawSpec s = Golden();
  const Commitment c = Commit(s, PatternMask(), Share{5});
  const Digest expect =
      Sha256(Concat("COMMITv1", CanonicalEncode(s), PatternMask().bytes, 5));
  EXPECT_EQ(c.digest, expect);
}

TEST(CommitTest, OpenAcceptsOnlyTheOpening) {
  const DrawSpec s = Golden();
  const Mask m = GenMask();
  const Commitment c = Commit(s, m, Share{4});
  EXPECT_TRUE(Open(c, s, m, Share{4}));
  EXPECT_FALSE(Open(c, s, m, Share{5}));
  EXPECT_FALSE(Open(c, s, m, Share{4 + s.eligible.index_space()}));
  Mask m2 = m;
  m2.bytes[31] ^= 1;
  EXPECT_FALSE(Open(c, s, m2, Share{4}));
  DrawSpec other = s;
  other.did = DrawId::Make("case-7", 1);
  EXPECT_FALSE(Open(c, other, m, Share{4}));
}

TEST(CommitTest, RangeCheckedOnCommitOnly) {
  const DrawSpec s = Golden();  // index space 6
  EXPECT_THROW(Commit(s, PatternMask(), Share{6}), InvalidArgument);
  // Open reduces nothing but accepts any value the digest was made with.
  const Commitment c{Sha256(Concat("COMMITv1", CanonicalEncode(s),
                                   PatternMask().bytes, 8))};
  EXPECT_TRUE(Open(c, s, PatternMask(), Share{8}));
}

TEST(ChainTest, NestedStructure) {
  const auto doc = testing::GoldenDocument({"case-7#0", "case-7#1", "case-7#2"});
  const auto& d = doc.spec.draws;
  const Mask m = PatternMask();
  const std::vector<Share> shares = {{1}, {2}, {3}};
  const Digest c0 = Sha256(Concat("CHAINv1", CanonicalEncode(d[0]), m.bytes, 1));
  const Digest c1 = Sha256(Concat("CHAINv1", CanonicalEncode(d[1]), c0, 2));
  const Digest c2 = Sha256(Concat("CHAINv1", CanonicalEncode(d[2]), c1, 3));
  EXPECT_EQ(ChainCommit(d, m, shares).digest, c2);
  const auto all = ChainDigests(d, m, shares);
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[0].digest, c0);
  EXPECT_EQ(all[1].digest, c1);
  EXPECT_TRUE(VerifyChain(Commitment{c2}, d, m, shares));
}

TEST(ChainTest, RejectsMutationsAndShapeErrors) {
  const auto doc = testing::GoldenDocument({"case-7#0", "case-7#1", "case-7#2"});
  const auto& d = doc.spec.draws;
  const Mask m = GenMask();
  std::vector<Share> shares = {GenShare(6), GenShare(6), GenShare(6)};
  const Commitment c = ChainCommit(d, m, shares);
  EXPECT_TRUE(VerifyChain(c, d, m, shares));
  for (std::size_t i = 0; i < shares.size(); ++i) {
    auto bad = shares;
    bad[i].value ^= 1;
    EXPECT_FALSE(VerifyChain(c, d, m, bad));
  }
  EXPECT_FALSE(VerifyChain(c, d, m, std::vector<Share>(shares.begin(), shares.end() - 1)));
  EXPECT_FALSE(VerifyChain(c, std::span(d).first(2), m,
                           std::vector<Share>(shares.begin(), shares.end() - 1)));
  EXPECT_THROW(ChainCommit({}, m, {}), InvalidArgument);
}

TEST(SessionCommitTest, DispatchesOnMode) {
  const auto single = testing::GoldenDocument().spec;
  const std::vector<Share> one = {{3}};
  EXPECT_EQ(CommitSession(single, PatternMask(), one),
            Commit(single.draws[0], PatternMask(), Share{3}));
  EXPECT_TRUE(OpenSession(CommitSession(single, PatternMask(), one), single,
                          PatternMask(), one));

  auto chain = testing::GoldenDocument({"case-7#0"}).spec;
  chain.mode = DrawMode::kChain;
  const auto cc = CommitSession(chain, PatternMask(), one);
  EXPECT_EQ(cc, ChainCommit(chain.draws, PatternMask(), one));
  // A one-draw chain and a single draw never share a digest.
  EXPECT_NE(cc, CommitSession(single, PatternMask(), one));
}

TEST(SignatureTest, SignVerify) {
  const KeyPair k = TestKey(0);
  const Bytes msg = {1, 2, 3};
  const Signature sig = SignMessage(k, msg);
  EXPECT_TRUE(VerifyMessage(k.public_key(), msg, sig));
  Signature bad = sig;
  bad.bytes[10] ^= 0x40;
  EXPECT_FALSE(VerifyMessage(k.public_key(), msg, bad));
  EXPECT_FALSE(VerifyMessage(TestKey(1).public_key(), msg, sig));
  const Bytes other = {1, 2, 4};
  EXPECT_FALSE(VerifyMessage(k.public_key(), other, sig));
}

TEST(SignatureTest, RawFormValidatesEncodings) {
  const KeyPair k = TestKey(0);
  const Bytes msg = {9};
  const Signature sig = SignMessage(k, msg);
  EXPECT_TRUE(VerifyMessage(k.public_key().bytes, msg, sig.bytes));
  EXPECT_THROW(VerifyMessage(Bytes(31), msg, sig.bytes), InvalidArgument);
  EXPECT_THROW(VerifyMessage(k.public_key().bytes, msg, Bytes(63)),
               InvalidArgument);
}

TEST(KeyTest, SeedRoundTripAndFingerprint) {
  const KeyPair k = KeyPair::Generate();
  const KeyPair again = KeyPair::FromSeed(k.Seed());
  EXPECT_EQ(again.public_key(), k.public_key());
  EXPECT_EQ(k.public_key().ComputeFingerprint().bytes,
            Sha256(k.public_key().bytes));
  EXPECT_THROW(KeyPair::FromSeed(Bytes(31)), InvalidArgument);
}

TEST(KeyTest, PublicKeyRejectsNonPoints) {
  EXPECT_THROW(PublicKey::FromBytes(Bytes(31)), InvalidArgument);
  // y = 2 has no matching x on edwards25519.
  Bytes not_on_curve(32, 0);
  not_on_curve[0] = 2;
  EXPECT_THROW(PublicKey::FromBytes(not_on_curve), InvalidArgument);
  EXPECT_NO_THROW(PublicKey::FromBytes(TestKey(3).public_key().bytes));
}

TEST(KeyTest, TestKeysAreStable) {
  EXPECT_EQ(TestKey(0).public_key(), TestKey(0).public_key());
  EXPECT_NE(TestKey(0).public_key(), TestKey(1).public_key());
}

TEST(StrongTypesTest, FromBytesChecksLength) {
  EXPECT_THROW(Mask::FromBytes(Bytes(31)), InvalidArgument);
  EXPECT_THROW(Commitment::FromBytes(Bytes(33)), InvalidArgument);
  EXPECT_THROW(Signature::FromBytes(Bytes(32)), InvalidArgument);
  EXPECT_NO_THROW(Mask::FromBytes(Bytes(32)));
}

}  // namespace
}  // namespace sortition
