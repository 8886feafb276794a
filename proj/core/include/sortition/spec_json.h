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

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sortition/crypto.h"
#include "sortition/model.h"
#include "sortition/session.h"

namespace sortition {

struct StakeholderCredential {
  PublicKey key;
  std::string name;

  Fingerprint fingerprint() const { return key.ComputeFingerprint(); }
  friend bool operator==(const StakeholderCredential&,
                         const StakeholderCredential&) = default;
};

// A session spec together with the stakeholders' public keys; the JSON form
// is shared by spec files, relay session bodies and transcript headers.
//
//   {
//     "mode": "single" | "chain",            (optional)
//     "stakeholders": [{"name", "public_key", "fingerprint"?}],
//     "draws": [{"did", "info"?, "eligible": [...]}]
//   }
//
// "eligible" is one of: ["a", "b"] (uniform); [{"candidate", "weight"}];
// [{"candidate", "probability": "1/6"}] or decimal strings ("0.25").
// One style per list.
struct SessionDocument {
  SessionSpec spec;
  std::vector<StakeholderCredential> credentials;  // Sorted by fingerprint.

  KeyRing Ring() const;
  friend bool operator==(const SessionDocument&,
                         const SessionDocument&) = default;
};

SessionDocument SessionDocumentFromJson(const nlohmann::json& j);
nlohmann::json SessionDocumentToJson(const SessionDocument& doc);

// Builds the document from credentials and per-draw eligible lists, sorting
// stakeholders and (for chains) draws into canonical order.
SessionDocument MakeSessionDocument(
    DrawMode mode, std::vector<StakeholderCredential> credentials,
    std::vector<std::tuple<DrawId, WeightedEligibleList, std::string>> draws);

WeightedEligibleList EligibleFromJson(const nlohmann::json& j);
nlohmann::json EligibleToJson(const WeightedEligibleList& list);

nlohmann::json OutcomeToJson(const std::vector<DrawOutcome>& outcome);
std::vector<DrawOutcome> OutcomeFromJson(const nlohmann::json& j);

}  // namespace sortition
