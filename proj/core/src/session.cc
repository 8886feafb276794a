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

#include "sortition/session.h"

#include <algorithm>

#include "sortition/errors.h"

namespace sortition {

const char* ToString(Phase phase) {
  switch (phase) {
    case Phase::kSetup:
      return "setup";
    case Phase::kCommitting:
      return "committing";
    case Phase::kRevealing:
      return "revealing";
    case Phase::kComplete:
      return "complete";
    case Phase::kAborted:
      return "aborted";
  }
  return "?";
}

const char* ToString(IncidentKind kind) {
  switch (kind) {
    case IncidentKind::kUnknownSender:
      return "unknown_sender";
    case IncidentKind::kBadSignature:
      return "bad_signature";
    case IncidentKind::kReplay:
      return "replay";
    case IncidentKind::kEquivocation:
      return "equivocation";
    case IncidentKind::kEarlyReveal:
      return "early_reveal";
    case IncidentKind::kBindingViolation:
      return "binding_violation";
    case IncidentKind::kShareCountMismatch:
      return "share_count_mismatch";
    case IncidentKind::kOutOfPhase:
      return "out_of_phase";
    case IncidentKind::kTimeout:
      return "timeout";
  }
  return "?";
}

KeyRing::KeyRing(std::span<const PublicKey> keys) {
  for (const auto& k : keys) Add(k);
}

void KeyRing::Add(const PublicKey& key) {
  keys_[key.ComputeFingerprint()] = key;
}

const PublicKey* KeyRing::Find(const Fingerprint& fp) const {
  auto it = keys_.find(fp);
  return it == keys_.end() ? nullptr : &it->second;
}

std::vector<PublicKey> KeyRing::keys() const {
  std::vector<PublicKey> out;
  for (const auto& [fp, k] : keys_) out.push_back(k);
  return out;
}

Contribution PrepareContribution(const SessionSpec& spec, const KeyPair& key,
                                 std::optional<Opening> chosen) {
  Opening opening;
  if (chosen) {
    opening = std::move(*chosen);
  } else {
    opening.mask = GenMask();
    for (const auto& d : spec.draws) {
      opening.shares.push_back(GenShare(d.eligible.index_space()));
    }
  }
  const Commitment c = CommitSession(spec, opening.mask, opening.shares);
  return {MakeCommitMessage(spec, key, c), std::move(opening)};
}

std::uint64_t ComputeResult(std::span<const Share> shares,
                            std::uint64_t index_space) {
  if (index_space == 0) throw InvalidArgument("index space must be >= 1");
  if (shares.empty()) throw InvalidArgument("no shares to combine");
  if (shares.size() > kMaxStakeholders) {
    throw InvalidArgument("more shares than the stakeholder cap");
  }
  unsigned __int128 sum = 0;
  for (const auto& s : shares) sum += s.value;
  return static_cast<std::uint64_t>(sum % index_space);
}

DrawSession::DrawSession(SessionSpec spec, KeyRing keys)
    : spec_(std::move(spec)), keys_(std::move(keys)) {
  RequireValid(ValidateSessionSpec(spec_), "session spec");
  for (const auto& s : spec_.stakeholders()) {
    if (keys_.Find(s.fingerprint) == nullptr) {
      throw InvalidArgument("no public key for stakeholder " +
                            s.fingerprint.Hex());
    }
  }
}

DrawSession::Started DrawSession::Start(SessionSpec spec, KeyRing keys,
                                        const KeyPair& self,
                                        std::optional<Opening> chosen) {
  DrawSession s(std::move(spec), std::move(keys));
  const Fingerprint me = self.public_key().ComputeFingerprint();
  if (!s.IsStakeholder(me)) {
    throw InvalidArgument("key " + me.Short() + " is not a stakeholder");
  }
  if (s.keys_.Find(me) == nullptr || !(*s.keys_.Find(me) == self.public_key())) {
    throw InvalidArgument("key ring disagrees with own public key");
  }
  Contribution c = PrepareContribution(s.spec_, self, std::move(chosen));
  s.self_ = me;
  s.opening_ = std::move(c.opening);
  s.phase_ = Phase::kCommitting;
  s.ReceiveCommit(c.commit);
  return {std::move(s), std::move(c.commit)};
}

DrawSession DrawSession::Observe(SessionSpec spec, KeyRing keys) {
  DrawSession s(std::move(spec), std::move(keys));
  s.phase_ = Phase::kCommitting;
  return s;
}

bool DrawSession::IsStakeholder(const Fingerprint& fp) const {
  const auto& s = spec_.stakeholders();
  return std::binary_search(
      s.begin(), s.end(), StakeholderId{fp, {}},
      [](const StakeholderId& a, const StakeholderId& b) {
        return a.fingerprint < b.fingerprint;
      });
}

void DrawSession::Log(IncidentKind kind, const Fingerprint& sender,
                      std::size_t delivery, std::string detail,
                      std::vector<std::size_t> related) {
  incidents_.push_back(
      {kind, sender, delivery, std::move(related), std::move(detail)});
}

void DrawSession::Abort(IncidentKind reason, std::vector<Fingerprint> culprits,
                        std::string detail) {
  phase_ = Phase::kAborted;
  outcome_.clear();
  abort_ = AbortReport{reason, std::move(culprits), std::move(detail)};
}

Delivery DrawSession::Receive(const Message& msg) {
  if (const auto* c = std::get_if<CommitMessage>(&msg)) return ReceiveCommit(*c);
  return ReceiveReveal(std::get<RevealMessage>(msg));
}

Delivery DrawSession::ReceiveCommit(const CommitMessage& msg) {
  if (phase_ == Phase::kSetup) {
    throw StateError("session not started");
  }
  const std::size_t at = deliveries_++;
  const PublicKey* key = keys_.Find(msg.sender);
  if (key == nullptr || !IsStakeholder(msg.sender)) {
    Log(IncidentKind::kUnknownSender, msg.sender, at,
        "commit from a party outside the stakeholder list");
    return Delivery::kRejected;
  }
  if (msg.mode != spec_.mode || msg.draw_ref != spec_.draw_ids()) {
    std::string refs;
    for (const auto& id : msg.draw_ref) refs += (refs.empty() ? "" : ",") + id.Render();
    Log(IncidentKind::kReplay, msg.sender, at,
        "commit bound to " + std::string(ToString(msg.mode)) + " " + refs);
    return Delivery::kRejected;
  }
  if (!VerifyCommitSignature(spec_, *key, msg)) {
    Log(IncidentKind::kBadSignature, msg.sender, at,
        "commit signature does not verify");
    return Delivery::kRejected;
  }
  if (auto it = commits_.find(msg.sender); it != commits_.end()) {
    const auto& [prev, rec] = it->second;
    if (prev.commitment == msg.commitment) return Delivery::kDuplicate;
    Log(IncidentKind::kEquivocation, msg.sender, at,
        "second, different signed commitment", {rec.delivery});
    if (phase_ == Phase::kCommitting || phase_ == Phase::kRevealing) {
      Abort(IncidentKind::kEquivocation, {msg.sender},
            "stakeholder " + msg.sender.Short() +
                " signed two different commitments");
    }
    return Delivery::kRejected;
  }
  if (phase_ != Phase::kCommitting) {
    if (phase_ != Phase::kAborted) {
      Log(IncidentKind::kOutOfPhase, msg.sender, at,
          std::string("commit received while ") + ToString(phase_));
    }
    return Delivery::kRejected;
  }
  commits_.emplace(msg.sender, std::make_pair(msg, Recorded{at}));
  if (commits_.size() == spec_.stakeholders().size()) {
    phase_ = Phase::kRevealing;
  }
  return Delivery::kAccepted;
}

Delivery DrawSession::ReceiveReveal(const RevealMessage& msg) {
  if (phase_ == Phase::kSetup) {
    throw StateError("session not started");
  }
  const std::size_t at = deliveries_++;
  if (!IsStakeholder(msg.sender)) {
    Log(IncidentKind::kUnknownSender, msg.sender, at,
        "reveal from a party outside the stakeholder list");
    return Delivery::kRejected;
  }
  if (phase_ == Phase::kCommitting) {
    Log(IncidentKind::kEarlyReveal, msg.sender, at,
        "opening disclosed before all commitments were verified");
    return Delivery::kRejected;
  }
  if (phase_ == Phase::kAborted) return Delivery::kRejected;

  if (auto it = reveals_.find(msg.sender); it != reveals_.end()) {
    if (it->second.first == msg) return Delivery::kDuplicate;
  }
  const CommitMessage& commit = commits_.at(msg.sender).first;
  if (msg.shares.size() != spec_.draws.size()) {
    Log(IncidentKind::kShareCountMismatch, msg.sender, at,
        "expected " + std::to_string(spec_.draws.size()) + " shares, got " +
            std::to_string(msg.shares.size()));
    if (phase_ == Phase::kRevealing) {
      Abort(IncidentKind::kShareCountMismatch, {msg.sender},
            "malformed opening from " + msg.sender.Short());
    }
    return Delivery::kRejected;
  }
  if (!OpenSession(commit.commitment, spec_, msg.mask, msg.shares)) {
    Log(IncidentKind::kBindingViolation, msg.sender, at,
        "opening does not reproduce the signed commitment",
        {commits_.at(msg.sender).second.delivery});
    if (phase_ == Phase::kRevealing) {
      Abort(IncidentKind::kBindingViolation, {msg.sender},
            "opening from " + msg.sender.Short() +
                " does not match its commitment");
    }
    return Delivery::kRejected;
  }
  if (reveals_.count(msg.sender) != 0) {
    // A second valid opening would need a hash collision.
    return Delivery::kDuplicate;
  }
  reveals_.emplace(msg.sender, std::make_pair(msg, Recorded{at}));
  if (reveals_.size() == spec_.stakeholders().size()) Finish();
  return Delivery::kAccepted;
}

void DrawSession::Finish() {
  outcome_.clear();
  for (std::size_t i = 0; i < spec_.draws.size(); ++i) {
    std::vector<Share> shares;
    shares.reserve(reveals_.size());
    for (const auto& [fp, r] : reveals_) shares.push_back(r.first.shares[i]);
    const auto& draw = spec_.draws[i];
    const std::uint64_t d = ComputeResult(shares, draw.eligible.index_space());
    outcome_.push_back({draw.did, d, CandidateAt(draw.eligible, d)});
  }
  phase_ = Phase::kComplete;
}

const AbortReport* DrawSession::HandleTimeout() {
  if (phase_ != Phase::kCommitting && phase_ != Phase::kRevealing) {
    return abort_ ? &*abort_ : nullptr;
  }
  const bool committing = phase_ == Phase::kCommitting;
  std::vector<Fingerprint> silent =
      committing ? MissingCommits() : MissingReveals();
  for (const auto& fp : silent) {
    Log(IncidentKind::kTimeout, fp, kNoDelivery,
        committing ? "no commitment before the deadline"
                   : "no opening before the deadline");
  }
  Abort(IncidentKind::kTimeout, std::move(silent),
        committing ? "commit phase timed out" : "reveal phase timed out");
  return &*abort_;
}

std::optional<RevealMessage> DrawSession::OwnReveal() const {
  if (!opening_ || !self_) return std::nullopt;
  if (phase_ != Phase::kRevealing && phase_ != Phase::kComplete) {
    return std::nullopt;
  }
  return RevealMessage{*self_, opening_->mask, opening_->shares};
}

std::vector<DrawOutcome> DrawSession::Outcome() const {
  if (phase_ != Phase::kComplete) {
    throw StateError(std::string("no outcome while ") + ToString(phase_));
  }
  return outcome_;
}

bool DrawSession::HasCommitted(const Fingerprint& fp) const {
  return commits_.count(fp) != 0;
}

bool DrawSession::HasRevealed(const Fingerprint& fp) const {
  return reveals_.count(fp) != 0;
}

std::vector<Fingerprint> DrawSession::MissingCommits() const {
  std::vector<Fingerprint> out;
  for (const auto& s : spec_.stakeholders()) {
    if (!HasCommitted(s.fingerprint)) out.push_back(s.fingerprint);
  }
  return out;
}

std::vector<Fingerprint> DrawSession::MissingReveals() const {
  std::vector<Fingerprint> out;
  for (const auto& s : spec_.stakeholders()) {
    if (!HasRevealed(s.fingerprint)) out.push_back(s.fingerprint);
  }
  return out;
}

const CommitMessage* DrawSession::CommitFrom(const Fingerprint& fp) const {
  auto it = commits_.find(fp);
  return it == commits_.end() ? nullptr : &it->second.first;
}

const RevealMessage* DrawSession::RevealFrom(const Fingerprint& fp) const {
  auto it = reveals_.find(fp);
  return it == reveals_.end() ? nullptr : &it->second.first;
}

}  // namespace sortition
