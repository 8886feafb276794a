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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sortition/messages.h"
#include "sortition/session.h"
#include "sortition/spec_json.h"

namespace sortition {

inline constexpr char kTranscriptVersion[] = "transcriptv1";

struct TranscriptEvent {
  std::int64_t timestamp_ms = 0;  // Receipt time; not signed, advisory.
  Message message;
};

// Public record of one session: header (schemes, spec, keys), the messages
// in received order and optionally the outcome the participants claim.
class Transcript {
 public:
  Transcript() = default;
  explicit Transcript(SessionDocument session, bool server_view = false)
      : session_(std::move(session)), server_view_(server_view) {}

  // Throws StateError once finalized.
  void Append(Message message, std::int64_t timestamp_ms);
  void Finalize(std::optional<std::vector<DrawOutcome>> claimed_outcome);

  const SessionDocument& session() const { return session_; }
  const std::vector<TranscriptEvent>& events() const { return events_; }
  const std::optional<std::vector<DrawOutcome>>& claimed_outcome() const {
    return claimed_;
  }
  bool server_view() const { return server_view_; }
  bool finalized() const { return finalized_; }

  const std::string& hash_scheme() const { return hash_scheme_; }
  const std::string& signature_scheme() const { return signature_scheme_; }

  // Tampering hooks for fixtures and tests: they rebuild a transcript
  // rather than editing one in place.
  Transcript WithClaimedOutcome(std::vector<DrawOutcome> claimed) const;
  Transcript WithEvents(std::vector<TranscriptEvent> events) const;

  nlohmann::json ToJson() const;
  static Transcript FromJson(const nlohmann::json& j);

 private:
  SessionDocument session_;
  bool server_view_ = false;
  bool finalized_ = false;
  std::string hash_scheme_ = kHashScheme;
  std::string signature_scheme_ = kSignatureScheme;
  std::vector<TranscriptEvent> events_;
  std::optional<std::vector<DrawOutcome>> claimed_;
};

// Text parse. Syntax errors carry the byte offset; schema errors name the
// offending field.
Transcript ParseTranscript(std::string_view text);
std::string SerializeTranscript(const Transcript& t);

Transcript LoadTranscript(const std::filesystem::path& path);
void SaveTranscript(const std::filesystem::path& path, const Transcript& t);

std::int64_t NowMillis();

}  // namespace sortition
