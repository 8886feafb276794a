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

#include "sortition/audit.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace sortition {
namespace {

using nlohmann::json;

FindingKind FromIncident(IncidentKind k) {
  switch (k) {
    case IncidentKind::kUnknownSender:
      return FindingKind::kUnknownSender;
    case IncidentKind::kBadSignature:
      return FindingKind::kForgery;
    case IncidentKind::kReplay:
      return FindingKind::kReplay;
    case IncidentKind::kEquivocation:
      return FindingKind::kEquivocation;
    case IncidentKind::kEarlyReveal:
      return FindingKind::kEarlyReveal;
    case IncidentKind::kBindingViolation:
    case IncidentKind::kShareCountMismatch:
      return FindingKind::kBindingViolation;
    case IncidentKind::kOutOfPhase:
      return FindingKind::kOutOfPhase;
    case IncidentKind::kTimeout:
      return FindingKind::kDenialToReveal;
  }
  return FindingKind::kOutOfPhase;
}

bool IsIntegrityFinding(FindingKind k) {
  return k != FindingKind::kDenialToReveal;
}

Evidence EvidenceAt(const Transcript& t, std::size_t transcript_index,
                    std::size_t event) {
  return {transcript_index, event, EncodeMessage(t.events().at(event).message)};
}

std::string RefKey(const CommitMessage& c) {
  std::string key = ToString(c.mode);
  for (const auto& id : c.draw_ref) key += "|" + id.Render();
  return key;
}

// Signature check against the view's own header; false for anything that
// does not belong to that view's drawing.
bool ValidInView(const Transcript& t, const CommitMessage& c) {
  const auto& spec = t.session().spec;
  if (c.mode != spec.mode || c.draw_ref != spec.draw_ids()) return false;
  const auto ring = t.session().Ring();
  const PublicKey* key = ring.Find(c.sender);
  if (key == nullptr) return false;
  const auto& st = spec.stakeholders();
  if (std::none_of(st.begin(), st.end(), [&](const StakeholderId& s) {
        return s.fingerprint == c.sender;
      })) {
    return false;
  }
  return VerifyCommitSignature(spec, *key, c);
}

}  // namespace

const char* ToString(Verdict v) {
  switch (v) {
    case Verdict::kFair:
      return "Fair";
    case Verdict::kManipulated:
      return "Manipulated";
    case Verdict::kIncomplete:
      return "Incomplete";
  }
  return "?";
}

int ExitCodeFor(Verdict v) {
  switch (v) {
    case Verdict::kFair:
      return kExitFair;
    case Verdict::kManipulated:
      return kExitManipulated;
    case Verdict::kIncomplete:
      return kExitIncomplete;
  }
  return kExitFormatError;
}

const char* ToString(FindingKind kind) {
  switch (kind) {
    case FindingKind::kEarlyReveal:
      return "early_reveal";
    case FindingKind::kBindingViolation:
      return "binding_violation";
    case FindingKind::kEquivocation:
      return "equivocation";
    case FindingKind::kReplay:
      return "replay";
    case FindingKind::kForgery:
      return "forgery";
    case FindingKind::kUnknownSender:
      return "unknown_sender";
    case FindingKind::kOutOfPhase:
      return "out_of_phase";
    case FindingKind::kDenialToReveal:
      return "denial_to_reveal";
    case FindingKind::kOutcomeMismatch:
      return "outcome_mismatch";
    case FindingKind::kRelayOmission:
      return "relay_omission";
    case FindingKind::kRelayAddition:
      return "relay_addition";
    case FindingKind::kRelaySubstitution:
      return "relay_substitution";
  }
  return "?";
}

AuditReport AuditTranscript(const Transcript& t) {
  AuditReport report;
  DrawSession replay =
      DrawSession::Observe(t.session().spec, t.session().Ring());
  for (const auto& e : t.events()) replay.Receive(e.message);

  std::set<Fingerprint> misbehaved;
  for (const auto& inc : replay.incidents()) {
    Finding f;
    f.kind = FromIncident(inc.kind);
    f.stakeholders = {inc.sender};
    for (auto rel : inc.related) f.evidence.push_back(EvidenceAt(t, 0, rel));
    if (inc.delivery != kNoDelivery) {
      f.evidence.push_back(EvidenceAt(t, 0, inc.delivery));
    }
    f.detail = inc.detail;
    // Forged messages do not implicate the identity they claim.
    if (f.kind != FindingKind::kForgery) misbehaved.insert(inc.sender);
    report.findings.push_back(std::move(f));
  }

  report.replay_phase = replay.phase();
  if (replay.phase() == Phase::kCommitting ||
      replay.phase() == Phase::kRevealing) {
    const bool committing = replay.phase() == Phase::kCommitting;
    Finding f;
    f.kind = FindingKind::kDenialToReveal;
    f.stakeholders =
        committing ? replay.MissingCommits() : replay.MissingReveals();
    f.detail = committing ? "no commitment recorded" : "no opening recorded";
    report.findings.push_back(std::move(f));
  }

  if (replay.phase() == Phase::kComplete) {
    report.recomputed = replay.Outcome();
    // The only read of the claimed outcome.
    if (t.claimed_outcome() && *t.claimed_outcome() != *report.recomputed) {
      Finding f;
      f.kind = FindingKind::kOutcomeMismatch;
      std::ostringstream os;
      os << "claimed outcome differs from recomputation:";
      const auto& claimed = *t.claimed_outcome();
      for (std::size_t i = 0; i < report.recomputed->size(); ++i) {
        const auto& r = (*report.recomputed)[i];
        os << " " << r.did.Render() << " recomputed d=" << r.d << " ("
           << r.candidate << ")";
        if (i < claimed.size()) {
          os << " claimed d=" << claimed[i].d << " (" << claimed[i].candidate
             << ")";
        }
      }
      if (claimed.size() != report.recomputed->size()) {
        os << " [claimed " << claimed.size() << " draws]";
      }
      f.detail = os.str();
      report.findings.push_back(std::move(f));
    }
  }

  for (const auto& s : t.session().spec.stakeholders()) {
    StakeholderStatus st;
    st.fingerprint = s.fingerprint;
    st.name = s.display_name;
    st.committed = replay.HasCommitted(s.fingerprint);
    st.revealed = replay.HasRevealed(s.fingerprint);
    st.misbehaved = misbehaved.count(s.fingerprint) != 0;
    report.stakeholders.push_back(std::move(st));
  }

  const bool integrity = std::any_of(
      report.findings.begin(), report.findings.end(),
      [](const Finding& f) { return IsIntegrityFinding(f.kind); });
  if (integrity) {
    report.verdict = Verdict::kManipulated;
  } else if (replay.phase() != Phase::kComplete) {
    report.verdict = Verdict::kIncomplete;
  } else {
    report.verdict = Verdict::kFair;
  }
  return report;
}

std::vector<Finding> DetectEquivocation(std::span<const Transcript> views) {
  struct Seen {
    Bytes payload;
    Evidence evidence;
  };
  // (sender, drawing) -> distinct signed payloads
  std::map<std::pair<Fingerprint, std::string>, std::vector<Seen>> seen;
  for (std::size_t v = 0; v < views.size(); ++v) {
    const auto& t = views[v];
    for (std::size_t i = 0; i < t.events().size(); ++i) {
      const auto* c = std::get_if<CommitMessage>(&t.events()[i].message);
      if (c == nullptr || !ValidInView(t, *c)) continue;
      Bytes payload = CommitPayload(t.session().spec, c->commitment);
      auto& bucket = seen[{c->sender, RefKey(*c)}];
      if (std::none_of(bucket.begin(), bucket.end(),
                       [&](const Seen& s) { return s.payload == payload; })) {
        bucket.push_back({std::move(payload), EvidenceAt(t, v, i)});
      }
    }
  }
  std::vector<Finding> out;
  for (const auto& [key, bucket] : seen) {
    if (bucket.size() < 2) continue;
    Finding f;
    f.kind = FindingKind::kEquivocation;
    f.stakeholders = {key.first};
    for (const auto& s : bucket) f.evidence.push_back(s.evidence);
    f.detail = std::to_string(bucket.size()) +
               " distinct signed commitments for " + key.second;
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Finding> CrossCheckRelay(const Transcript& local_view,
                                     const Transcript& relay_view) {
  std::vector<Finding> out;
  if (!(local_view.session() == relay_view.session())) {
    Finding f;
    f.kind = FindingKind::kRelaySubstitution;
    f.detail = "relay serves a different session header";
    out.push_back(std::move(f));
  }

  // Signed content only; timestamps are ignored.
  auto index = [](const Transcript& t) {
    std::map<Bytes, std::size_t> m;
    for (std::size_t i = 0; i < t.events().size(); ++i) {
      m.emplace(EncodeMessage(t.events()[i].message), i);
    }
    return m;
  };
  const auto local = index(local_view);
  const auto relay = index(relay_view);

  struct Diff {
    std::vector<std::size_t> local_only;
    std::vector<std::size_t> relay_only;
  };
  // (sender, is_commit) -> differences
  std::map<std::pair<Fingerprint, bool>, Diff> diffs;
  for (const auto& [bytes, i] : local) {
    if (relay.count(bytes) == 0) {
      const auto& m = local_view.events()[i].message;
      diffs[{SenderOf(m), IsCommit(m)}].local_only.push_back(i);
    }
  }
  for (const auto& [bytes, i] : relay) {
    if (local.count(bytes) == 0) {
      const auto& m = relay_view.events()[i].message;
      diffs[{SenderOf(m), IsCommit(m)}].relay_only.push_back(i);
    }
  }

  for (const auto& [key, d] : diffs) {
    const auto& [sender, is_commit] = key;
    const char* what = is_commit ? "commit" : "reveal";
    if (!d.local_only.empty() && !d.relay_only.empty()) {
      Finding f;
      f.kind = FindingKind::kRelaySubstitution;
      f.stakeholders = {sender};
      for (auto i : d.local_only) f.evidence.push_back(EvidenceAt(local_view, 0, i));
      for (auto i : d.relay_only) f.evidence.push_back(EvidenceAt(relay_view, 1, i));
      f.detail = std::string("relay replaced the ") + what + " of " +
                 sender.Short();
      out.push_back(std::move(f));
      if (is_commit) {
        const auto signed_local = std::any_of(
            d.local_only.begin(), d.local_only.end(), [&](std::size_t i) {
              return ValidInView(local_view, std::get<CommitMessage>(
                                                 local_view.events()[i].message));
            });
        const auto signed_relay = std::any_of(
            d.relay_only.begin(), d.relay_only.end(), [&](std::size_t i) {
              return ValidInView(relay_view, std::get<CommitMessage>(
                                                 relay_view.events()[i].message));
            });
        if (signed_local && signed_relay) {
          Finding e;
          e.kind = FindingKind::kEquivocation;
          e.stakeholders = {sender};
          e.evidence = out.back().evidence;
          e.detail = "stakeholder signed the substituted commitment too";
          out.push_back(std::move(e));
        }
      }
      continue;
    }
    for (auto i : d.local_only) {
      Finding f;
      f.kind = FindingKind::kRelayOmission;
      f.stakeholders = {sender};
      f.evidence.push_back(EvidenceAt(local_view, 0, i));
      f.detail = std::string("relay view lacks a ") + what + " from " +
                 sender.Short();
      out.push_back(std::move(f));
    }
    for (auto i : d.relay_only) {
      Finding f;
      f.kind = FindingKind::kRelayAddition;
      f.stakeholders = {sender};
      f.evidence.push_back(EvidenceAt(relay_view, 1, i));
      f.detail = std::string("relay view has an extra ") + what + " from " +
                 sender.Short();
      out.push_back(std::move(f));
    }
  }
  return out;
}

Verdict CombineVerdict(Verdict base, std::span<const Finding> extra) {
  if (std::any_of(extra.begin(), extra.end(), [](const Finding& f) {
        return IsIntegrityFinding(f.kind);
      })) {
    return Verdict::kManipulated;
  }
  return base;
}

json FindingToJson(const Finding& f) {
  json who = json::array();
  for (const auto& s : f.stakeholders) who.push_back(ToBase64Url(s.bytes));
  json ev = json::array();
  for (const auto& e : f.evidence) {
    ev.push_back({{"transcript", e.transcript},
                  {"event", e.event},
                  {"message", ToBase64Url(e.message)}});
  }
  return {{"kind", ToString(f.kind)},
          {"stakeholders", who},
          {"evidence", ev},
          {"detail", f.detail}};
}

json ReportToJson(const AuditReport& report) {
  json stake = json::array();
  for (const auto& s : report.stakeholders) {
    stake.push_back({{"fingerprint", ToBase64Url(s.fingerprint.bytes)},
                     {"name", s.name},
                     {"committed", s.committed},
                     {"revealed", s.revealed},
                     {"misbehaved", s.misbehaved}});
  }
  json findings = json::array();
  for (const auto& f : report.findings) findings.push_back(FindingToJson(f));
  json j = {{"verdict", ToString(report.verdict)},
            {"phase", ToString(report.replay_phase)},
            {"stakeholders", stake},
            {"findings", findings}};
  if (report.recomputed) j["recomputed_outcome"] = OutcomeToJson(*report.recomputed);
  return j;
}

std::string FormatFinding(const Finding& f) {
  std::ostringstream os;
  os << ToString(f.kind);
  for (const auto& s : f.stakeholders) os << " " << s.Short();
  if (!f.detail.empty()) os << ": " << f.detail;
  if (!f.evidence.empty()) {
    os << " [events";
    for (const auto& e : f.evidence) {
      os << " " << e.transcript << ":" << e.event;
    }
    os << "]";
  }
  return os.str();
}

std::string FormatReport(const AuditReport& report) {
  std::ostringstream os;
  os << "verdict: " << ToString(report.verdict) << "\n";
  os << "phase reached: " << ToString(report.replay_phase) << "\n";
  for (const auto& s : report.stakeholders) {
    os << "  " << s.fingerprint.Short()
       << (s.name.empty() ? "" : " (" + s.name + ")")
       << " committed=" << (s.committed ? "yes" : "no")
       << " revealed=" << (s.revealed ? "yes" : "no")
       << (s.misbehaved ? " MISBEHAVED" : "") << "\n";
  }
  if (report.recomputed) {
    for (const auto& o : *report.recomputed) {
      os << "  " << o.did.Render() << "\t" << o.d << "\t" << o.candidate
         << "\n";
    }
  }
  for (const auto& f : report.findings) os << "finding: " << FormatFinding(f) << "\n";
  return os.str();
}

}  // namespace sortition
