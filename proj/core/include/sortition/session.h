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

#include <chrono>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sortition/crypto.h"
#include "sortition/messages.h"
#include "sortition/model.h"

namespace sortition {

inline constexpr std::chrono::seconds kDefaultPhaseTimeout{600};

enum class Phase { kSetup, kCommitting, kRevealing, kComplete, kAborted };

const char* ToString(Phase phase);

enum class IncidentKind {
  kUnknownSender,
  kBadSignature,      // Forgery attempt or corruption in transit.
  kReplay,            // Commit bound to another drawing.
  kEquivocation,      // Two different signed commitments, one sender.
  kEarlyReveal,       // Opening sent before the reveal phase.
  kBindingViolation,  // Opening does not match the signed commitment.
  kShareCountMismatch,
  kOutOfPhase,
  kTimeout,           // Stakeholder silent past the phase deadline.
};

const char* ToString(IncidentKind kind);

inline constexpr std::size_t kNoDelivery = static_cast<std::size_t>(-1);

struct Incident {
  IncidentKind kind;
  Fingerprint sender;
  // Position of the offending message in delivery order, or kNoDelivery.
  std::size_t delivery = kNoDelivery;
  // Earlier deliveries the finding relies on (e.g. the first commitment of
  // an equivocation).
  std::vector<std::size_t> related;
  std::string detail;
};

struct AbortReport {
  IncidentKind reason;
  std::vector<Fingerprint> culprits;
  std::string detail;
};

enum class Delivery { kAccepted, kDuplicate, kRejected };

struct DrawOutcome {
  DrawId did;
  std::uint64_t d = 0;
  CandidateId candidate;

  friend bool operator==(const DrawOutcome&, const DrawOutcome&) = default;
};

// A stakeholder's secret: mask (mask_0 for chains) and one share per draw.
struct Opening {
  Mask mask;
  std::vector<Share> shares;
};

// Public keys by fingerprint.
class KeyRing {
 public:
  KeyRing() = default;
  explicit KeyRing(std::span<const PublicKey> keys);

  void Add(const PublicKey& key);
  const PublicKey* Find(const Fingerprint& fp) const;
  std::vector<PublicKey> keys() const;
  std::size_t size() const { return keys_.size(); }

 private:
  std::map<Fingerprint, PublicKey> keys_;
};

struct Contribution {
  CommitMessage commit;
  Opening opening;
};

// Fresh mask and uniform shares unless `chosen` fixes the opening (used by
// the simulator to model adversaries).
Contribution PrepareContribution(const SessionSpec& spec, const KeyPair& key,
                                 std::optional<Opening> chosen = std::nullopt);

// d = (sum of shares) mod index_space, summed in 128 bits.
std::uint64_t ComputeResult(std::span<const Share> shares,
                            std::uint64_t index_space);

// One stakeholder's (or an observer's) view of a drawing.
//
// Phases only move Setup -> Committing -> Revealing -> Complete, with
// Aborted reachable from Committing and Revealing. The reveal phase opens
// only once every stakeholder's commitment is recorded with a verified
// signature, and OwnReveal() yields nothing before that.
class DrawSession {
 public:
  struct Started;

  // Commit phase for `self`: samples the opening, signs the commitment and
  // records it. The opening stays inside the session.
  static Started Start(SessionSpec spec, KeyRing keys, const KeyPair& self,
                       std::optional<Opening> chosen = std::nullopt);

  // A session with no private opening, e.g. for auditors.
  static DrawSession Observe(SessionSpec spec, KeyRing keys);

  Delivery Receive(const Message& msg);
  Delivery ReceiveCommit(const CommitMessage& msg);
  Delivery ReceiveReveal(const RevealMessage& msg);

  // The phase deadline passed: abort naming every stakeholder still owing a
  // message. No-op unless the session is committing or revealing.
  const AbortReport* HandleTimeout();

  // Own opening, available from the reveal phase on.
  std::optional<RevealMessage> OwnReveal() const;

  // Per draw, in draw order. Throws StateError unless Complete.
  std::vector<DrawOutcome> Outcome() const;

  Phase phase() const { return phase_; }
  const SessionSpec& spec() const { return spec_; }
  const KeyRing& keys() const { return keys_; }
  const std::optional<Fingerprint>& self() const { return self_; }
  const Opening* opening() const { return opening_ ? &*opening_ : nullptr; }
  const std::vector<Incident>& incidents() const { return incidents_; }
  const std::optional<AbortReport>& abort_report() const { return abort_; }
  std::size_t deliveries() const { return deliveries_; }

  bool HasCommitted(const Fingerprint& fp) const;
  bool HasRevealed(const Fingerprint& fp) const;
  std::vector<Fingerprint> MissingCommits() const;
  std::vector<Fingerprint> MissingReveals() const;
  // Verified commitment from `fp`, if any.
  const CommitMessage* CommitFrom(const Fingerprint& fp) const;
  const RevealMessage* RevealFrom(const Fingerprint& fp) const;

 private:
  struct Recorded {
    std::size_t delivery;
  };

  DrawSession(SessionSpec spec, KeyRing keys);

  bool IsStakeholder(const Fingerprint& fp) const;
  void Log(IncidentKind kind, const Fingerprint& sender, std::size_t delivery,
           std::string detail, std::vector<std::size_t> related = {});
  void Abort(IncidentKind reason, std::vector<Fingerprint> culprits,
             std::string detail);
  void Finish();

  SessionSpec spec_;
  KeyRing keys_;
  Phase phase_ = Phase::kSetup;
  std::optional<Fingerprint> self_;
  std::optional<Opening> opening_;
  std::map<Fingerprint, std::pair<CommitMessage, Recorded>> commits_;
  std::map<Fingerprint, std::pair<RevealMessage, Recorded>> reveals_;
  std::vector<DrawOutcome> outcome_;
  std::vector<Incident> incidents_;
  std::optional<AbortReport> abort_;
  std::size_t deliveries_ = 0;
};

struct DrawSession::Started {
  DrawSession session;
  CommitMessage commit;
};

}  // namespace sortition
