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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sortition/session.h"
#include "sortition/transcript.h"

namespace sortition {

enum class Verdict { kFair, kManipulated, kIncomplete };

const char* ToString(Verdict v);

// CLI exit codes.
inline constexpr int kExitFair = 0;
inline constexpr int kExitManipulated = 2;
inline constexpr int kExitIncomplete = 3;
inline constexpr int kExitFormatError = 64;

int ExitCodeFor(Verdict v);

enum class FindingKind {
  kEarlyReveal,
  kBindingViolation,
  kEquivocation,
  kReplay,
  kForgery,          // Signature does not verify; names the claimed sender.
  kUnknownSender,
  kOutOfPhase,
  kDenialToReveal,   // Stakeholders silent at the end of the record.
  kOutcomeMismatch,
  kRelayOmission,
  kRelayAddition,
  kRelaySubstitution,
};

const char* ToString(FindingKind kind);

struct Evidence {
  std::size_t transcript = 0;  // Position in the audited list of views.
  std::size_t event = 0;       // Index into that transcript's events.
  Bytes message;               // MSGv1 bytes, signature included.
};

struct Finding {
  FindingKind kind;
  // Stakeholders the finding is about: culprits, or the impersonated
  // identity for forgeries.
  std::vector<Fingerprint> stakeholders;
  std::vector<Evidence> evidence;
  std::string detail;
};

struct StakeholderStatus {
  Fingerprint fingerprint;
  std::string name;
  bool committed = false;
  bool revealed = false;
  bool misbehaved = false;
};

struct AuditReport {
  Verdict verdict = Verdict::kIncomplete;
  Phase replay_phase = Phase::kSetup;
  std::vector<StakeholderStatus> stakeholders;
  std::vector<Finding> findings;
  // Computed from the events alone.
  std::optional<std::vector<DrawOutcome>> recomputed;
};

// Replays the events through an observer session and classifies every
// deviation. The claimed outcome is read only for the final comparison.
AuditReport AuditTranscript(const Transcript& t);

// Signed commitments from one stakeholder that differ across the given
// views of the same drawing.
std::vector<Finding> DetectEquivocation(std::span<const Transcript> views);

// Compares a participant's view with what the relay serves.
std::vector<Finding> CrossCheckRelay(const Transcript& local_view,
                                     const Transcript& relay_view);

// Fair only without findings; relay and equivocation findings make the
// verdict Manipulated.
Verdict CombineVerdict(Verdict base, std::span<const Finding> extra);

nlohmann::json FindingToJson(const Finding& f);
nlohmann::json ReportToJson(const AuditReport& report);
std::string FormatReport(const AuditReport& report);
std::string FormatFinding(const Finding& f);

}  // namespace sortition
