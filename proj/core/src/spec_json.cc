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

#include "sortition/spec_json.h"

#include <algorithm>
#include <charconv>

#include "sortition/errors.h"

namespace sortition {
namespace {

using nlohmann::json;

const json& Field(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string(where) + ": missing field '" + key + "'");
  }
  return j.at(key);
}

std::string Text(const json& j, const char* key, const char* where) {
  const auto& v = Field(j, key, where);
  if (!v.is_string()) {
    throw FormatError(std::string(where) + ": '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

std::uint64_t U64(const json& v, const char* where) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (!s.empty() && ec == std::errc() && ptr == s.data() + s.size()) {
      return out;
    }
  }
  throw FormatError(std::string(where) + ": expected a non-negative integer");
}

}  // namespace

KeyRing SessionDocument::Ring() const {
  KeyRing ring;
  for (const auto& c : credentials) ring.Add(c.key);
  return ring;
}

WeightedEligibleList EligibleFromJson(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw FormatError("eligible: must be a non-empty array");
  }
  if (std::all_of(j.begin(), j.end(),
                  [](const json& e) { return e.is_string(); })) {
    std::vector<CandidateId> ids;
    for (const auto& e : j) ids.push_back(e.get<std::string>());
    return UniformList(ids);
  }
  const bool weighted = std::all_of(j.begin(), j.end(), [](const json& e) {
    return e.is_object() && e.contains("weight");
  });
  const bool probabilistic = std::all_of(j.begin(), j.end(), [](const json& e) {
    return e.is_object() && e.contains("probability");
  });
  if (weighted == probabilistic) {
    throw InvalidArgument(
        "eligible: entries must all be names, all carry 'weight' or all "
        "carry 'probability'");
  }
  if (weighted) {
    std::vector<WeightedEntry> entries;
    for (const auto& e : j) {
      entries.push_back({Text(e, "candidate", "eligible entry"),
                         U64(e.at("weight"), "eligible weight")});
    }
    return WeightedEligibleList::FromWeights(std::move(entries));
  }
  std::vector<std::pair<CandidateId, std::string>> probs;
  bool any_dot = false;
  bool any_slash = false;
  for (const auto& e : j) {
    auto p = Text(e, "probability", "eligible entry");
    any_dot |= p.find('.') != std::string::npos;
    any_slash |= p.find('/') != std::string::npos;
    probs.emplace_back(Text(e, "candidate", "eligible entry"), std::move(p));
  }
  if (any_dot && any_slash) {
    throw InvalidArgument(
        "eligible: mixes fraction and decimal probabilities");
  }
  if (any_dot) {
    std::vector<std::pair<CandidateId, Decimal>> ds;
    for (const auto& [c, p] : probs) ds.emplace_back(c, Decimal::Parse(p));
    return FromDecimal(ds);
  }
  std::vector<std::pair<CandidateId, FractionWeight>> fs;
  for (const auto& [c, p] : probs) fs.emplace_back(c, FractionWeight::Parse(p));
  return FromFractions(fs);
}

json EligibleToJson(const WeightedEligibleList& list) {
  json out = json::array();
  for (const auto& e : list.entries()) {
    out.push_back({{"candidate", e.candidate},
                   {"weight", std::to_string(e.weight)}});
  }
  return out;
}

SessionDocument MakeSessionDocument(
    DrawMode mode, std::vector<StakeholderCredential> credentials,
    std::vector<std::tuple<DrawId, WeightedEligibleList, std::string>> draws) {
  std::sort(credentials.begin(), credentials.end(),
            [](const StakeholderCredential& a, const StakeholderCredential& b) {
              return a.fingerprint() < b.fingerprint();
            });
  std::vector<StakeholderId> stakeholders;
  for (const auto& c : credentials) {
    stakeholders.push_back({c.fingerprint(), c.name});
  }
  std::vector<DrawSpec> specs;
  for (auto& [did, eligible, info] : draws) {
    specs.push_back({did, stakeholders, std::move(eligible), std::move(info)});
  }
  SessionDocument doc;
  doc.credentials = std::move(credentials);
  if (mode == DrawMode::kSingle) {
    if (specs.size() != 1) {
      throw InvalidArgument("single mode needs exactly one draw");
    }
    doc.spec = SessionSpec::Single(std::move(specs.front()));
  } else {
    std::sort(specs.begin(), specs.end(),
              [](const DrawSpec& a, const DrawSpec& b) { return a.did < b.did; });
    doc.spec = SessionSpec::Chain(DrawList{std::move(specs)});
  }
  return doc;
}

SessionDocument SessionDocumentFromJson(const json& j) {
  if (!j.is_object()) throw FormatError("session document must be an object");
  const auto& stake = Field(j, "stakeholders", "session document");
  if (!stake.is_array()) {
    throw FormatError("session document: 'stakeholders' must be an array");
  }
  std::vector<StakeholderCredential> creds;
  for (const auto& s : stake) {
    StakeholderCredential c;
    try {
      c.key = PublicKey::FromBytes(
          FromBase64Url(Text(s, "public_key", "stakeholder")));
    } catch (const InvalidArgument& e) {
      throw FormatError(std::string("stakeholder: ") + e.what());
    }
    c.name = s.value("name", "");
    if (s.contains("fingerprint")) {
      const Bytes fp = FromBase64Url(Text(s, "fingerprint", "stakeholder"));
      if (fp.size() != kFingerprintSize ||
          !std::equal(fp.begin(), fp.end(), c.fingerprint().bytes.begin())) {
        throw FormatError("stakeholder '" + c.name +
                          "': fingerprint does not match public key");
      }
    }
    creds.push_back(std::move(c));
  }
  const auto& draws_json = Field(j, "draws", "session document");
  if (!draws_json.is_array() || draws_json.empty()) {
    throw FormatError("session document: 'draws' must be a non-empty array");
  }
  std::vector<std::tuple<DrawId, WeightedEligibleList, std::string>> draws;
  for (const auto& d : draws_json) {
    DrawId did = DrawId::Parse(Text(d, "did", "draw"));
    std::string info = d.value("info", "");
    draws.emplace_back(std::move(did),
                       EligibleFromJson(Field(d, "eligible", "draw")),
                       std::move(info));
  }
  DrawMode mode = draws.size() == 1 ? DrawMode::kSingle : DrawMode::kChain;
  if (j.contains("mode")) {
    mode = ParseDrawMode(Text(j, "mode", "session document"));
  }
  return MakeSessionDocument(mode, std::move(creds), std::move(draws));
}

json SessionDocumentToJson(const SessionDocument& doc) {
  json stake = json::array();
  for (const auto& c : doc.credentials) {
    stake.push_back({{"name", c.name},
                     {"public_key", ToBase64Url(c.key.bytes)},
                     {"fingerprint", ToBase64Url(c.fingerprint().bytes)}});
  }
  json draws = json::array();
  for (const auto& d : doc.spec.draws) {
    draws.push_back({{"did", d.did.Render()},
                     {"info", d.info},
                     {"eligible", EligibleToJson(d.eligible)}});
  }
  return {{"mode", ToString(doc.spec.mode)},
          {"stakeholders", stake},
          {"draws", draws}};
}

json OutcomeToJson(const std::vector<DrawOutcome>& outcome) {
  json out = json::array();
  for (const auto& o : outcome) {
    out.push_back({{"did", o.did.Render()},
                   {"d", std::to_string(o.d)},
                   {"candidate", o.candidate}});
  }
  return out;
}

std::vector<DrawOutcome> OutcomeFromJson(const json& j) {
  if (!j.is_array()) throw FormatError("outcome must be an array");
  std::vector<DrawOutcome> out;
  for (const auto& o : j) {
    DrawOutcome x;
    try {
      x.did = DrawId::Parse(Text(o, "did", "outcome"));
    } catch (const InvalidArgument& e) {
      throw FormatError(std::string("outcome: ") + e.what());
    }
    x.d = U64(Field(o, "d", "outcome"), "outcome d");
    x.candidate = Text(o, "candidate", "outcome");
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace sortition
