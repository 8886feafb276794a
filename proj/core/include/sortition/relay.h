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
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "sortition/errors.h"
#include "sortition/messages.h"
#include "sortition/session.h"
#include "sortition/spec_json.h"
#include "sortition/transcript.h"

namespace sortition {

// A commit whose signature does not verify for the board's drawing.
class SignatureRejected : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct RelayOptions {
  // Empty keeps everything in memory.
  std::filesystem::path data_dir;
};

struct Receipt {
  std::size_t index = 0;
  std::int64_t timestamp_ms = 0;

  friend bool operator==(const Receipt&, const Receipt&) = default;
};

struct LogPage {
  std::vector<TranscriptEvent> messages;
  std::size_t next_index = 0;
};

struct StakeholderProgress {
  Fingerprint fingerprint;
  std::string name;
  bool committed = false;
  bool revealed = false;
};

// Derived from the log on every call, never stored.
struct SessionStatus {
  Phase phase = Phase::kCommitting;
  std::size_t entries = 0;
  std::vector<StakeholderProgress> stakeholders;
  std::vector<Incident> incidents;
  std::optional<std::vector<DrawOutcome>> outcome;
};

nlohmann::json StatusToJson(const SessionStatus& status);

// Hex digest over the mode and rendered DrawIds; the same drawing always
// lands on the same board.
std::string SessionIdFor(const SessionSpec& spec);

// Untrusted append-only message board, one log per drawing.
//
// Appends to a board are serialized and get consecutive indices; readers
// take a shared lock. Stored entries are never modified.
class RelayStore {
 public:
  explicit RelayStore(RelayOptions options = {});
  ~RelayStore();
  RelayStore(const RelayStore&) = delete;
  RelayStore& operator=(const RelayStore&) = delete;

  // Idempotent for an identical document; ConflictError when the id is
  // taken by a different spec or key set.
  std::string CreateSession(const SessionDocument& doc);

  // Commits must verify at ingestion. Exact duplicates return the original
  // receipt.
  Receipt PostMessage(const std::string& session_id, const Message& msg);

  LogPage FetchLog(const std::string& session_id, std::size_t from_index) const;

  // Server view of the whole log, marked server_view=true.
  Transcript ExportTranscript(const std::string& session_id) const;

  SessionStatus Status(const std::string& session_id) const;
  SessionDocument Session(const std::string& session_id) const;
  std::vector<std::string> SessionIds() const;

  // Blocks until the log grows past `from_index` or the timeout expires;
  // returns the log size.
  std::size_t WaitForEntries(const std::string& session_id,
                             std::size_t from_index,
                             std::chrono::milliseconds timeout) const;

#ifdef SORTITION_RELAY_FAULT_INJECTION
  // Test-only: the exported transcript skips or replaces an entry while the
  // live log stays intact.
  void InjectDrop(const std::string& session_id, std::size_t index);
  void InjectSubstitute(const std::string& session_id, std::size_t index,
                        const Message& replacement);
#endif

 private:
  struct Board;
  class Storage;

  std::shared_ptr<Board> Find(const std::string& session_id) const;

  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Board>> boards_;
  std::unique_ptr<Storage> storage_;
};

}  // namespace sortition
