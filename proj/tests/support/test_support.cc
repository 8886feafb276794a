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

#include "tests/support/test_support.h"

#include <fcntl.h>
#include <signal.h>
#include <stdlib.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace sortition::testing {
namespace {

constexpr std::int64_t kBaseTimestamp = 1700000000000;

}  // namespace

std::vector<KeyPair> SortedTestKeys(std::size_t n, std::uint32_t first) {
  std::vector<KeyPair> keys;
  for (std::size_t i = 0; i < n; ++i) {
    keys.push_back(TestKey(first + static_cast<std::uint32_t>(i)));
  }
  std::sort(keys.begin(), keys.end(), [](const KeyPair& a, const KeyPair& b) {
    return a.public_key().ComputeFingerprint() <
           b.public_key().ComputeFingerprint();
  });
  return keys;
}

SessionDocument MakeDocument(const std::vector<KeyPair>& keys,
                             const std::vector<std::string>& dids,
                             const WeightedEligibleList& list,
                             const std::string& info,
                             std::optional<DrawMode> mode) {
  std::vector<StakeholderCredential> creds;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    creds.push_back({keys[i].public_key(), "s" + std::to_string(i)});
  }
  std::vector<std::tuple<DrawId, WeightedEligibleList, std::string>> draws;
  for (const auto& d : dids) draws.emplace_back(DrawId::Parse(d), list, info);
  const DrawMode m =
      mode.value_or(dids.size() == 1 ? DrawMode::kSingle : DrawMode::kChain);
  return MakeSessionDocument(m, std::move(creds), std::move(draws));
}

WeightedEligibleList GoldenList() {
  return WeightedEligibleList::FromWeights(
      {{"alice", 1}, {"bob", 2}, {"carol", 3}});
}

SessionDocument GoldenDocument(const std::vector<std::string>& dids) {
  return MakeDocument(SortedTestKeys(3), dids, GoldenList(), "golden");
}

Opening FixedOpening(const SessionSpec& spec, std::size_t i) {
  Opening o;
  o.mask.bytes.fill(static_cast<std::uint8_t>(i + 1));
  for (const auto& d : spec.draws) {
    o.shares.push_back(Share{(i + 1) % d.eligible.index_space()});
  }
  return o;
}

RevealMessage Run::Reveal(std::size_t i) const {
  const auto& c = contributions.at(i);
  return {c.commit.sender, c.opening.mask, c.opening.shares};
}

Run PrepareRun(const SessionDocument& doc, const std::vector<KeyPair>& keys,
               bool deterministic) {
  Run run{doc, keys, {}};
  for (std::size_t i = 0; i < keys.size(); ++i) {
    run.contributions.push_back(
        deterministic ? PrepareContribution(doc.spec, keys[i],
                                            FixedOpening(doc.spec, i))
                      : PrepareContribution(doc.spec, keys[i]));
  }
  return run;
}

std::vector<TranscriptEvent> Stamp(const std::vector<Message>& messages) {
  std::vector<TranscriptEvent> out;
  for (std::size_t i = 0; i < messages.size(); ++i) {
    out.push_back({kBaseTimestamp + 1000 * static_cast<std::int64_t>(i),
                   messages[i]});
  }
  return out;
}

Transcript TranscriptOf(const SessionDocument& doc,
                        const std::vector<Message>& messages, bool claim,
                        bool server_view) {
  Transcript t(doc, server_view);
  for (auto& e : Stamp(messages)) t.Append(e.message, e.timestamp_ms);
  std::optional<std::vector<DrawOutcome>> claimed;
  if (claim) {
    DrawSession observer = DrawSession::Observe(doc.spec, doc.Ring());
    for (const auto& m : messages) observer.Receive(m);
    if (observer.phase() == Phase::kComplete) claimed = observer.Outcome();
  }
  t.Finalize(claimed);
  return t;
}

Transcript HonestTranscript(const Run& run) {
  std::vector<Message> messages;
  for (const auto& c : run.contributions) messages.push_back(c.commit);
  for (std::size_t i = 0; i < run.contributions.size(); ++i) {
    messages.push_back(run.Reveal(i));
  }
  return TranscriptOf(run.doc, messages, true);
}

Transcript GoldenHonestTranscript() {
  return HonestTranscript(PrepareRun(GoldenDocument(), SortedTestKeys(3), true));
}

std::vector<AdversaryFixture> AdversaryFixtures() {
  const auto keys = SortedTestKeys(3);
  const Run run = PrepareRun(GoldenDocument(), keys, true);
  const auto& doc = run.doc;
  const auto& c = run.contributions;
  auto fp = [&](std::size_t i) {
    return keys[i].public_key().ComputeFingerprint();
  };
  std::vector<AdversaryFixture> out;

  // Stakeholder 2 opens before the last commitment is in.
  out.push_back({"early_reveal",
                 {TranscriptOf(doc,
                               {c[0].commit, c[1].commit, run.Reveal(2),
                                c[2].commit, run.Reveal(0), run.Reveal(1),
                                run.Reveal(2)},
                               true)},
                 FindingKind::kEarlyReveal,
                 fp(2),
                 false,
                 Verdict::kManipulated});

  // Stakeholder 1 opens with share + 1.
  {
    RevealMessage bad = run.Reveal(1);
    bad.shares[0].value += 1;
    out.push_back({"binding_violation",
                   {TranscriptOf(doc,
                                 {c[0].commit, c[1].commit, c[2].commit,
                                  run.Reveal(0), bad, run.Reveal(2)},
                                 true)},
                   FindingKind::kBindingViolation,
                   fp(1),
                   false,
                   Verdict::kManipulated});
  }

  // Stakeholder 0 signs two different commitments.
  {
    Opening other = FixedOpening(doc.spec, 0);
    other.shares[0].value = (other.shares[0].value + 2) %
                            doc.spec.draws[0].eligible.index_space();
    const auto second = PrepareContribution(doc.spec, keys[0], other);
    out.push_back({"equivocation",
                   {TranscriptOf(doc,
                                 {c[0].commit, c[1].commit, second.commit,
                                  c[2].commit},
                                 true)},
                   FindingKind::kEquivocation,
                   fp(0),
                   false,
                   Verdict::kManipulated});
  }

  // Stakeholder 1's commitment for case-7#0 resurfaces in case-7#1.
  {
    const auto next_doc = GoldenDocument({"case-7#1"});
    const Run next = PrepareRun(next_doc, keys, true);
    out.push_back({"replay",
                   {TranscriptOf(next_doc,
                                 {next.contributions[0].commit, c[1].commit,
                                  next.contributions[2].commit},
                                 true)},
                   FindingKind::kReplay,
                   fp(1),
                   false,
                   Verdict::kManipulated});
  }

  // A commitment claiming stakeholder 2 but signed with stakeholder 0's key.
  {
    CommitMessage forged = c[2].commit;
    forged.signature =
        keys[0].Sign(CommitPayload(doc.spec, forged.commitment));
    out.push_back({"forgery",
                   {TranscriptOf(doc, {c[0].commit, c[1].commit, forged}, true)},
                   FindingKind::kForgery,
                   fp(2),
                   false,
                   Verdict::kManipulated});
  }

  // Stakeholder 2 commits and never opens.
  out.push_back({"denial_to_reveal",
                 {TranscriptOf(doc,
                               {c[0].commit, c[1].commit, c[2].commit,
                                run.Reveal(0), run.Reveal(1)},
                               true)},
                 FindingKind::kDenialToReveal,
                 fp(2),
                 false,
                 Verdict::kIncomplete});
  return out;
}

std::vector<Finding> AuditFixture(const AdversaryFixture& f) {
  std::vector<Finding> all;
  for (const auto& v : f.views) {
    for (auto& x : AuditTranscript(v).findings) all.push_back(std::move(x));
  }
  if (f.views.size() > 1) {
    for (auto& x : DetectEquivocation(f.views)) all.push_back(std::move(x));
    for (auto& x : CrossCheckRelay(f.views[0], f.views[1])) {
      all.push_back(std::move(x));
    }
  }
  return all;
}

std::filesystem::path FixtureDir() { return SORTITION_FIXTURE_DIR; }

TempDir::TempDir() {
  std::string tmpl =
      (std::filesystem::temp_directory_path() / "sortition-test-XXXXXX").string();
  if (::mkdtemp(tmpl.data()) == nullptr) {
    throw std::runtime_error("mkdtemp failed");
  }
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

Subprocess Subprocess::Spawn(const std::vector<std::string>& argv,
                             const std::filesystem::path& workdir,
                             const std::map<std::string, std::string>& env) {
  static std::atomic<int> counter{0};
  Subprocess p;
  const int n = counter++;
  p.out_ = workdir / ("proc" + std::to_string(n) + ".out");
  p.err_ = workdir / ("proc" + std::to_string(n) + ".err");
  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  p.pid_ = ::fork();
  if (p.pid_ < 0) throw std::runtime_error("fork failed");
  if (p.pid_ == 0) {
    const int out = ::open(p.out_.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    const int err = ::open(p.err_.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    ::dup2(out, 1);
    ::dup2(err, 2);
    if (::chdir(workdir.c_str()) != 0) ::_exit(126);
    for (const auto& [k, v] : env) ::setenv(k.c_str(), v.c_str(), 1);
    ::execv(args[0], args.data());
    ::_exit(127);
  }
  return p;
}

Subprocess::Subprocess(Subprocess&& other) noexcept
    : pid_(other.pid_),
      status_(other.status_),
      out_(std::move(other.out_)),
      err_(std::move(other.err_)) {
  other.pid_ = -1;
}

Subprocess::~Subprocess() {
  if (pid_ > 0 && !status_) {
    ::kill(pid_, SIGKILL);
    int st = 0;
    ::waitpid(pid_, &st, 0);
  }
}

std::optional<int> Subprocess::Wait(std::chrono::milliseconds timeout) {
  if (status_) return status_;
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    int st = 0;
    const pid_t r = ::waitpid(pid_, &st, WNOHANG);
    if (r == pid_) {
      status_ = WIFEXITED(st) ? WEXITSTATUS(st) : -WTERMSIG(st);
      return status_;
    }
    if (std::chrono::steady_clock::now() >= deadline) return std::nullopt;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
}

void Subprocess::Kill(int sig) {
  if (pid_ > 0 && !status_) ::kill(pid_, sig);
}

std::string Subprocess::Stdout() const { return ReadFile(out_); }
std::string Subprocess::Stderr() const { return ReadFile(err_); }

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

}  // namespace sortition::testing
