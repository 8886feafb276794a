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

#include "sortition/transcript.h"

#include <chrono>
#include <fstream>
#include <sstream>

#include "sortition/errors.h"

namespace sortition {

using nlohmann::json;

void Transcript::Append(Message message, std::int64_t timestamp_ms) {
  if (finalized_) throw StateError("transcript is finalized");
  events_.push_back({timestamp_ms, std::move(message)});
}

void Transcript::Finalize(
    std::optional<std::vector<DrawOutcome>> claimed_outcome) {
  if (finalized_) throw StateError("transcript is finalized");
  claimed_ = std::move(claimed_outcome);
  finalized_ = true;
}

Transcript Transcript::WithClaimedOutcome(
    std::vector<DrawOutcome> claimed) const {
  Transcript t = *this;
  t.claimed_ = std::move(claimed);
  return t;
}

Transcript Transcript::WithEvents(std::vector<TranscriptEvent> events) const {
  Transcript t = *this;
  t.events_ = std::move(events);
  return t;
}

json Transcript::ToJson() const {
  json events = json::array();
  for (const auto& e : events_) {
    events.push_back(
        {{"timestamp_ms", e.timestamp_ms}, {"message", MessageToJson(e.message)}});
  }
  json j = {{"version", kTranscriptVersion},
            {"hash", hash_scheme_},
            {"signature_scheme", signature_scheme_},
            {"server_view", server_view_},
            {"finalized", finalized_},
            {"session", SessionDocumentToJson(session_)},
            {"events", events}};
  if (claimed_) j["claimed_outcome"] = OutcomeToJson(*claimed_);
  return j;
}

Transcript Transcript::FromJson(const json& j) {
  try {
    if (!j.is_object()) throw FormatError("transcript must be a JSON object");
    if (j.value("version", "") != kTranscriptVersion) {
      throw FormatError("transcript: unsupported version (want transcriptv1)");
    }
    Transcript t;
    t.hash_scheme_ = j.value("hash", "");
    t.signature_scheme_ = j.value("signature_scheme", "");
    if (t.hash_scheme_ != kHashScheme ||
        t.signature_scheme_ != kSignatureScheme) {
      throw FormatError("transcript: unsupported schemes " + t.hash_scheme_ +
                        "/" + t.signature_scheme_);
    }
    t.server_view_ = j.value("server_view", false);
    if (!j.contains("session")) throw FormatError("transcript: missing session");
    t.session_ = SessionDocumentFromJson(j.at("session"));
    if (!j.contains("events") || !j.at("events").is_array()) {
      throw FormatError("transcript: 'events' must be an array");
    }
    std::size_t i = 0;
    for (const auto& e : j.at("events")) {
      try {
        if (!e.is_object() || !e.contains("message")) {
          throw FormatError("missing message");
        }
        t.events_.push_back(
            {e.value("timestamp_ms", std::int64_t{0}),
             MessageFromJson(e.at("message"))});
      } catch (const FormatError& err) {
        throw FormatError("transcript: event " + std::to_string(i) + ": " +
                          err.what());
      }
      ++i;
    }
    if (j.contains("claimed_outcome") && !j.at("claimed_outcome").is_null()) {
      t.claimed_ = OutcomeFromJson(j.at("claimed_outcome"));
    }
    t.finalized_ = j.value("finalized", false);
    return t;
  } catch (const FormatError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("transcript: ") + e.what());
  } catch (const json::exception& e) {
    throw FormatError(std::string("transcript: ") + e.what());
  }
}

Transcript ParseTranscript(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("transcript is not valid JSON", e.byte);
  }
  return Transcript::FromJson(j);
}

std::string SerializeTranscript(const Transcript& t) {
  return t.ToJson().dump(2) + "\n";
}

Transcript LoadTranscript(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseTranscript(ss.str());
}

void SaveTranscript(const std::filesystem::path& path, const Transcript& t) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << SerializeTranscript(t);
}

std::int64_t NowMillis() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace sortition
