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

#include <benchmark/benchmark.h>

#include <algorithm>

#include "sortition/audit.h"
#include "sortition/crypto.h"
#include "sortition/eligibility.h"
#include "sortition/session.h"
#include "sortition/spec_json.h"

namespace sortition {
namespace {

std::vector<KeyPair> Keys(std::size_t n) {
  std::vector<KeyPair> keys;
  for (std::uint32_t i = 0; i < n; ++i) keys.push_back(TestKey(i));
  std::sort(keys.begin(), keys.end(), [](const KeyPair& a, const KeyPair& b) {
    return a.public_key().ComputeFingerprint() < b.public_key().ComputeFingerprint();
  });
  return keys;
}

SessionDocument Document(std::size_t parties, std::size_t draws,
                         std::size_t candidates) {
  std::vector<StakeholderCredential> creds;
  for (std::size_t i = 0; const auto& k : Keys(parties)) {
    creds.push_back({k.public_key(), "s" + std::to_string(i++)});
  }
  std::vector<CandidateId> names;
  for (std::size_t i = 0; i < candidates; ++i) names.push_back("c" + std::to_string(i));
  std::vector<std::tuple<DrawId, WeightedEligibleList, std::string>> list;
  for (std::size_t i = 0; i < draws; ++i) {
    list.emplace_back(DrawId::Parse("bench#" + std::to_string(i)),
                      UniformList(names), "");
  }
  return MakeSessionDocument(draws == 1 ? DrawMode::kSingle : DrawMode::kChain,
                             std::move(creds), std::move(list));
}

void BM_Commit(benchmark::State& state) {
  const auto doc = Document(3, 1, 10);
  const Mask mask = GenMask();
  for (auto _ : state) {
    benchmark::DoNotOptimize(Commit(doc.spec.draws[0], mask, Share{3}));
  }
}
BENCHMARK(BM_Commit);

void BM_ChainCommit(benchmark::State& state) {
  const auto doc = Document(3, static_cast<std::size_t>(state.range(0)), 10);
  const Mask mask = GenMask();
  const std::vector<Share> shares(doc.spec.draws.size(), Share{4});
  for (auto _ : state) {
    benchmark::DoNotOptimize(ChainCommit(doc.spec.draws, mask, shares));
  }
}
BENCHMARK(BM_ChainCommit)->Arg(1)->Arg(8)->Arg(32);

void BM_CandidateAt(benchmark::State& state) {
  std::vector<WeightedEntry> entries;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    entries.push_back({"c" + std::to_string(i), static_cast<std::uint64_t>(i % 7 + 1)});
  }
  const auto list = WeightedEligibleList::FromWeights(entries);
  std::uint64_t d = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(CandidateAt(list, d));
    d = (d + 7919) % list.index_space();
  }
}
BENCHMARK(BM_CandidateAt)->Arg(16)->Arg(1024)->Arg(65536);

// A full observer session: verify every commit signature and opening.
void BM_ObserveSession(benchmark::State& state) {
  const auto parties = static_cast<std::size_t>(state.range(0));
  const auto doc = Document(parties, 1, 10);
  const auto keys = Keys(parties);
  std::vector<Contribution> c;
  for (const auto& k : keys) c.push_back(PrepareContribution(doc.spec, k));
  for (auto _ : state) {
    auto s = DrawSession::Observe(doc.spec, doc.Ring());
    for (const auto& x : c) s.Receive(x.commit);
    for (const auto& x : c) {
      s.Receive(RevealMessage{x.commit.sender, x.opening.mask, x.opening.shares});
    }
    benchmark::DoNotOptimize(s.Outcome());
  }
}
BENCHMARK(BM_ObserveSession)->Arg(4)->Arg(16);

void BM_AuditTranscript(benchmark::State& state) {
  const auto parties = static_cast<std::size_t>(state.range(0));
  const auto doc = Document(parties, 1, 10);
  Transcript t(doc);
  std::vector<Contribution> c;
  for (const auto& k : Keys(parties)) c.push_back(PrepareContribution(doc.spec, k));
  for (const auto& x : c) t.Append(x.commit, 0);
  for (const auto& x : c) {
    t.Append(RevealMessage{x.commit.sender, x.opening.mask, x.opening.shares}, 0);
  }
  t.Finalize(std::nullopt);
  for (auto _ : state) benchmark::DoNotOptimize(AuditTranscript(t));
}
BENCHMARK(BM_AuditTranscript)->Arg(4)->Arg(16);

}  // namespace
}  // namespace sortition

BENCHMARK_MAIN();
