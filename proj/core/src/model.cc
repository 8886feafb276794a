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

#include "sortition/model.h"

#include <algorithm>

#include "sortition/errors.h"

namespace sortition {
namespace {

constexpr std::string_view kDrawTag = "DRAWv1";

}  // namespace

const char* ToString(DrawMode mode) {
  return mode == DrawMode::kSingle ? "single" : "chain";
}

DrawMode ParseDrawMode(std::string_view text) {
  if (text == "single") return DrawMode::kSingle;
  if (text == "chain") return DrawMode::kChain;
  throw InvalidArgument("unknown draw mode '" + std::string(text) + "'");
}

SessionSpec SessionSpec::Single(DrawSpec spec) {
  RequireValid(ValidateSpec(spec), "draw spec");
  SessionSpec s;
  s.mode = DrawMode::kSingle;
  s.draws.push_back(std::move(spec));
  return s;
}

SessionSpec SessionSpec::Chain(DrawList list) {
  RequireValid(ValidateDrawList(list), "draw list");
  SessionSpec s;
  s.mode = DrawMode::kChain;
  s.draws = std::move(list.draws);
  return s;
}

std::vector<DrawId> SessionSpec::draw_ids() const {
  std::vector<DrawId> ids;
  ids.reserve(draws.size());
  for (const auto& d : draws) ids.push_back(d.did);
  return ids;
}

std::string ValidationReport::Summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v;
  }
  return out;
}

ValidationReport ValidateSpec(const DrawSpec& spec) {
  ValidationReport r;
  if (spec.did.proceeding_id().empty()) {
    r.violations.push_back("malformed DID: empty proceeding id");
  }
  const auto& s = spec.stakeholders;
  if (s.empty()) {
    r.violations.push_back("no stakeholders");
  }
  if (s.size() > kMaxStakeholders) {
    r.violations.push_back("more than 65536 stakeholders");
  }
  bool unsorted = false;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].fingerprint < s[i - 1].fingerprint) unsorted = true;
  }
  if (unsorted) r.violations.push_back("unsorted stakeholders");
  std::vector<Fingerprint> fps;
  fps.reserve(s.size());
  for (const auto& x : s) fps.push_back(x.fingerprint);
  std::sort(fps.begin(), fps.end());
  for (std::size_t i = 1; i < fps.size(); ++i) {
    if (fps[i] == fps[i - 1] && (i < 2 || fps[i - 2] != fps[i])) {
      r.violations.push_back("duplicate stakeholder fingerprint " +
                             fps[i].Hex());
    }
  }
  if (spec.eligible.empty()) {
    r.violations.push_back("empty eligible list");
  }
  return r;
}

ValidationReport ValidateDrawList(const DrawList& list) {
  ValidationReport r;
  if (list.draws.empty()) {
    r.violations.push_back("empty draw list");
    return r;
  }
  for (const auto& d : list.draws) {
    for (auto& v : ValidateSpec(d).violations) {
      r.violations.push_back(d.did.Render() + ": " + v);
    }
  }
  const auto& first = list.draws.front().stakeholders;
  for (std::size_t i = 1; i < list.draws.size(); ++i) {
    const auto& prev = list.draws[i - 1];
    const auto& cur = list.draws[i];
    if (cur.stakeholders != first) {
      r.violations.push_back("stakeholders of " + cur.did.Render() +
                             " differ from " +
                             list.draws.front().did.Render());
    }
    const auto a = prev.did.Render();
    const auto b = cur.did.Render();
    if (a == b) {
      r.violations.push_back("duplicate draw id " + b);
    } else if (b < a) {
      r.violations.push_back("draw ids not in ascending order at " + b);
    }
  }
  return r;
}

ValidationReport ValidateSessionSpec(const SessionSpec& spec) {
  if (spec.mode == DrawMode::kSingle && spec.draws.size() != 1) {
    return {{"single-draw session must hold exactly one draw"}};
  }
  return ValidateDrawList(DrawList{spec.draws});
}

void RequireValid(const ValidationReport& report, std::string_view what) {
  if (!report.ok()) {
    throw InvalidArgument(std::string(what) + ": " + report.Summary());
  }
}

Bytes CanonicalEncode(const DrawSpec& spec) {
  RequireValid(ValidateSpec(spec), "draw spec");
  ByteWriter w;
  w.Raw(kDrawTag);
  w.Field(spec.did.Render());
  w.Count(spec.stakeholders.size());
  for (const auto& s : spec.stakeholders) w.Field(s.fingerprint.bytes);
  const auto& entries = spec.eligible.entries();
  w.Count(entries.size());
  for (const auto& e : entries) {
    w.Field(e.candidate);
    w.U64(e.weight);
  }
  w.Field(spec.info);
  return std::move(w).Take();
}

DrawSpec DecodeDrawSpec(ByteSpan bytes) {
  ByteReader r(bytes);
  r.ExpectRaw(kDrawTag);
  DrawSpec spec;
  {
    const auto at = r.offset();
    try {
      spec.did = DrawId::Parse(r.TextField());
    } catch (const InvalidArgument& e) {
      throw FormatError(e.what(), at);
    }
  }
  const std::size_t n_stake = r.Count();
  for (std::size_t i = 0; i < n_stake; ++i) {
    const auto at = r.offset();
    Bytes fp = r.Field();
    if (fp.size() != kFingerprintSize) {
      throw FormatError("fingerprint must be 32 bytes", at);
    }
    spec.stakeholders.push_back({Fingerprint::FromBytes(fp), {}});
  }
  const std::size_t n_entries = r.Count();
  std::vector<WeightedEntry> entries;
  for (std::size_t i = 0; i < n_entries; ++i) {
    WeightedEntry e;
    e.candidate = r.TextField();
    e.weight = r.U64();
    entries.push_back(std::move(e));
  }
  spec.info = r.TextField();
  r.ExpectEnd();
  try {
    spec.eligible = WeightedEligibleList::FromWeights(entries);
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("eligible list: ") + e.what());
  }
  if (spec.eligible.entries() != entries) {
    throw FormatError("eligible list not in canonical order");
  }
  const auto report = ValidateSpec(spec);
  if (!report.ok()) throw FormatError(report.Summary());
  return spec;
}

DrawSpec SuccessorSpec(const DrawSpec& spec,
                       const std::vector<Fingerprint>& removed) {
  DrawSpec next = spec;
  next.did = spec.did.Next();
  std::erase_if(next.stakeholders, [&](const StakeholderId& s) {
    return std::find(removed.begin(), removed.end(), s.fingerprint) !=
           removed.end();
  });
  RequireValid(ValidateSpec(next), "successor spec");
  return next;
}

SessionSpec SuccessorSessionSpec(const SessionSpec& spec,
                                 const std::vector<Fingerprint>& removed) {
  SessionSpec next;
  next.mode = spec.mode;
  for (const auto& d : spec.draws) {
    next.draws.push_back(SuccessorSpec(d, removed));
  }
  // X#9 -> X#10 can change the lexicographic order.
  std::sort(next.draws.begin(), next.draws.end(),
            [](const DrawSpec& a, const DrawSpec& b) { return a.did < b.did; });
  RequireValid(ValidateSessionSpec(next), "successor session spec");
  return next;
}

}  // namespace sortition
