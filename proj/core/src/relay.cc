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

#include "sortition/relay.h"

#include <sqlite3.h>

#include <algorithm>
#include <condition_variable>
#include <mutex>

namespace sortition {
namespace {

using nlohmann::json;

struct Entry {
  Bytes wire;
  Message message;
  std::int64_t timestamp_ms;
};

}  // namespace

struct RelayStore::Board {
  std::string id;
  SessionDocument doc;
  std::string doc_json;
  KeyRing ring;

  mutable std::shared_mutex mu;
  mutable std::condition_variable_any grown;
  std::vector<Entry> log;
  std::map<Bytes, std::size_t> by_bytes;
  std::map<std::size_t, std::optional<Message>> export_faults;
};

// One row per session and one row per log entry; every append is its own
// transaction, so a restart sees exactly the acknowledged history.
class RelayStore::Storage {
 public:
  explicit Storage(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto path = (dir / "relay.sqlite3").string();
    if (sqlite3_open(path.c_str(), &db_) != SQLITE_OK) {
      std::string err = db_ ? sqlite3_errmsg(db_) : "out of memory";
      sqlite3_close(db_);
      throw Error("relay storage: cannot open " + path + ": " + err);
    }
    Exec("PRAGMA journal_mode=WAL");
    Exec("PRAGMA synchronous=FULL");
    Exec(
        "CREATE TABLE IF NOT EXISTS sessions ("
        "  id TEXT PRIMARY KEY, doc TEXT NOT NULL)");
    Exec(
        "CREATE TABLE IF NOT EXISTS entries ("
        "  session_id TEXT NOT NULL, idx INTEGER NOT NULL,"
        "  ts INTEGER NOT NULL, wire BLOB NOT NULL,"
        "  PRIMARY KEY (session_id, idx))");
  }

  ~Storage() { sqlite3_close(db_); }

  void InsertSession(const std::string& id, const std::string& doc) {
    std::lock_guard lock(mu_);
    Statement st(db_, "INSERT INTO sessions (id, doc) VALUES (?, ?)");
    sqlite3_bind_text(st.get(), 1, id.c_str(), -1, SQLITE_TRANSIENT);
    sqlite3_bind_text(st.get(), 2, doc.c_str(), -1, SQLITE_TRANSIENT);
    st.Done();
  }

  void Append(const std::string& id, std::size_t idx, std::int64_t ts,
              const Bytes& wire) {
    std::lock_guard lock(mu_);
    Statement st(db_,
                 "INSERT INTO entries (session_id, idx, ts, wire) "
                 "VALUES (?, ?, ?, ?)");
    sqlite3_bind_text(st.get(), 1, id.c_str(), -1, SQLITE_TRANSIENT);
    sqlite3_bind_int64(st.get(), 2, static_cast<sqlite3_int64>(idx));
    sqlite3_bind_int64(st.get(), 3, ts);
    sqlite3_bind_blob(st.get(), 4, wire.data(), static_cast<int>(wire.size()),
                      SQLITE_TRANSIENT);
    st.Done();
  }

  struct Row {
    std::string id;
    std::string doc;
    std::vector<std::pair<std::int64_t, Bytes>> entries;
  };

  std::vector<Row> LoadAll() {
    std::lock_guard lock(mu_);
    std::vector<Row> rows;
    {
      Statement st(db_, "SELECT id, doc FROM sessions ORDER BY id");
      while (st.Step()) {
        rows.push_back({st.Text(0), st.Text(1), {}});
      }
    }
    for (auto& row : rows) {
      Statement st(db_,
                   "SELECT idx, ts, wire FROM entries WHERE session_id = ? "
                   "ORDER BY idx");
      sqlite3_bind_text(st.get(), 1, row.id.c_str(), -1, SQLITE_TRANSIENT);
      while (st.Step()) {
        if (static_cast<std::size_t>(sqlite3_column_int64(st.get(), 0)) !=
            row.entries.size()) {
          throw Error("relay storage: gap in log of session " + row.id);
        }
        const auto* blob =
            static_cast<const std::uint8_t*>(sqlite3_column_blob(st.get(), 2));
        const int n = sqlite3_column_bytes(st.get(), 2);
        row.entries.emplace_back(sqlite3_column_int64(st.get(), 1),
                                 Bytes(blob, blob + n));
      }
    }
    return rows;
  }

 private:
  class Statement {
   public:
    Statement(sqlite3* db, const char* sql) : db_(db) {
      if (sqlite3_prepare_v2(db, sql, -1, &st_, nullptr) != SQLITE_OK) {
        throw Error(std::string("relay storage: ") + sqlite3_errmsg(db));
      }
    }
    ~Statement() { sqlite3_finalize(st_); }
    sqlite3_stmt* get() { return st_; }
    bool Step() {
      const int rc = sqlite3_step(st_);
      if (rc == SQLITE_ROW) return true;
      if (rc == SQLITE_DONE) return false;
      throw Error(std::string("relay storage: ") + sqlite3_errmsg(db_));
    }
    void Done() {
      if (Step()) throw Error("relay storage: unexpected row");
    }
    std::string Text(int col) {
      const auto* p = sqlite3_column_text(st_, col);
      return p ? reinterpret_cast<const char*>(p) : "";
    }

   private:
    sqlite3* db_;
    sqlite3_stmt* st_ = nullptr;
  };

  void Exec(const char* sql) {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
      std::string msg = err ? err : "unknown error";
      sqlite3_free(err);
      throw Error("relay storage: " + msg);
    }
  }

  std::mutex mu_;
  sqlite3* db_ = nullptr;
};

std::string SessionIdFor(const SessionSpec& spec) {
  ByteWriter w;
  w.Raw("SESSIONv1");
  w.U8(static_cast<std::uint8_t>(spec.mode));
  w.Count(spec.draws.size());
  for (const auto& d : spec.draws) w.Field(d.did.Render());
  const Digest h = Sha256(w.bytes());
  return ToHex(ByteSpan(h.data(), 16));
}

json StatusToJson(const SessionStatus& status) {
  json stake = json::array();
  for (const auto& s : status.stakeholders) {
    stake.push_back({{"fingerprint", ToBase64Url(s.fingerprint.bytes)},
                     {"name", s.name},
                     {"committed", s.committed},
                     {"revealed", s.revealed}});
  }
  json incidents = json::array();
  for (const auto& i : status.incidents) {
    incidents.push_back({{"kind", ToString(i.kind)},
                         {"sender", ToBase64Url(i.sender.bytes)},
                         {"index", i.delivery},
                         {"detail", i.detail}});
  }
  json j = {{"phase", ToString(status.phase)},
            {"entries", status.entries},
            {"stakeholders", stake},
            {"incidents", incidents}};
  if (status.outcome) j["outcome"] = OutcomeToJson(*status.outcome);
  return j;
}

RelayStore::RelayStore(RelayOptions options) {
  if (options.data_dir.empty()) return;
  storage_ = std::make_unique<Storage>(options.data_dir);
  for (auto& row : storage_->LoadAll()) {
    auto board = std::make_shared<Board>();
    board->id = row.id;
    board->doc = SessionDocumentFromJson(json::parse(row.doc));
    board->doc_json = row.doc;
    board->ring = board->doc.Ring();
    for (auto& [ts, wire] : row.entries) {
      Message m = DecodeMessage(wire);
      board->by_bytes.emplace(wire, board->log.size());
      board->log.push_back({std::move(wire), std::move(m), ts});
    }
    boards_.emplace(row.id, std::move(board));
  }
}

RelayStore::~RelayStore() = default;

std::shared_ptr<RelayStore::Board> RelayStore::Find(
    const std::string& session_id) const {
  std::shared_lock lock(mu_);
  auto it = boards_.find(session_id);
  if (it == boards_.end()) throw NotFound("unknown session " + session_id);
  return it->second;
}

std::string RelayStore::CreateSession(const SessionDocument& doc) {
  RequireValid(ValidateSessionSpec(doc.spec), "session spec");
  const std::string id = SessionIdFor(doc.spec);
  const std::string doc_json = SessionDocumentToJson(doc).dump();
  std::unique_lock lock(mu_);
  if (auto it = boards_.find(id); it != boards_.end()) {
    if (it->second->doc_json != doc_json) {
      throw ConflictError("session " + id +
                          " already exists with a different spec");
    }
    return id;
  }
  auto board = std::make_shared<Board>();
  board->id = id;
  board->doc = doc;
  board->doc_json = doc_json;
  board->ring = doc.Ring();
  if (storage_) storage_->InsertSession(id, doc_json);
  boards_.emplace(id, std::move(board));
  return id;
}

Receipt RelayStore::PostMessage(const std::string& session_id,
                                const Message& msg) {
  auto board = Find(session_id);
  const auto& stakeholders = board->doc.spec.stakeholders();
  const Fingerprint& sender = SenderOf(msg);
  const bool known =
      std::any_of(stakeholders.begin(), stakeholders.end(),
                  [&](const StakeholderId& s) { return s.fingerprint == sender; });
  if (!known) {
    throw InvalidArgument("sender " + sender.Short() + " is not a stakeholder");
  }
  if (const auto* c = std::get_if<CommitMessage>(&msg)) {
    const auto& spec = board->doc.spec;
    if (c->mode != spec.mode || c->draw_ref != spec.draw_ids() ||
        !VerifyCommitSignature(spec, *board->ring.Find(sender), *c)) {
      throw SignatureRejected("commit signature does not verify for session " +
                              session_id);
    }
  }
  Bytes wire = EncodeMessage(msg);

  std::unique_lock lock(board->mu);
  if (auto it = board->by_bytes.find(wire); it != board->by_bytes.end()) {
    return {it->second, board->log[it->second].timestamp_ms};
  }
  const std::size_t index = board->log.size();
  const std::int64_t ts = NowMillis();
  if (storage_) storage_->Append(session_id, index, ts, wire);
  board->by_bytes.emplace(wire, index);
  board->log.push_back({std::move(wire), msg, ts});
  lock.unlock();
  board->grown.notify_all();
  return {index, ts};
}

LogPage RelayStore::FetchLog(const std::string& session_id,
                             std::size_t from_index) const {
  auto board = Find(session_id);
  std::shared_lock lock(board->mu);
  LogPage page;
  for (std::size_t i = from_index; i < board->log.size(); ++i) {
    page.messages.push_back({board->log[i].timestamp_ms, board->log[i].message});
  }
  page.next_index = std::max(from_index, board->log.size());
  return page;
}

Transcript RelayStore::ExportTranscript(const std::string& session_id) const {
  auto board = Find(session_id);
  std::shared_lock lock(board->mu);
  Transcript t(board->doc, /*server_view=*/true);
  for (std::size_t i = 0; i < board->log.size(); ++i) {
    const auto& e = board->log[i];
    if (auto f = board->export_faults.find(i); f != board->export_faults.end()) {
      if (f->second) t.Append(*f->second, e.timestamp_ms);
      continue;
    }
    t.Append(e.message, e.timestamp_ms);
  }
  return t;
}

SessionStatus RelayStore::Status(const std::string& session_id) const {
  auto board = Find(session_id);
  std::vector<Message> log;
  {
    std::shared_lock lock(board->mu);
    for (const auto& e : board->log) log.push_back(e.message);
  }
  DrawSession replay = DrawSession::Observe(board->doc.spec, board->ring);
  for (const auto& m : log) replay.Receive(m);
  SessionStatus st;
  st.phase = replay.phase();
  st.entries = log.size();
  st.incidents = replay.incidents();
  for (const auto& s : board->doc.spec.stakeholders()) {
    st.stakeholders.push_back({s.fingerprint, s.display_name,
                               replay.HasCommitted(s.fingerprint),
                               replay.HasRevealed(s.fingerprint)});
  }
  if (replay.phase() == Phase::kComplete) st.outcome = replay.Outcome();
  return st;
}

SessionDocument RelayStore::Session(const std::string& session_id) const {
  return Find(session_id)->doc;
}

std::vector<std::string> RelayStore::SessionIds() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> ids;
  for (const auto& [id, b] : boards_) ids.push_back(id);
  return ids;
}

std::size_t RelayStore::WaitForEntries(const std::string& session_id,
                                       std::size_t from_index,
                                       std::chrono::milliseconds timeout) const {
  auto board = Find(session_id);
  std::shared_lock lock(board->mu);
  board->grown.wait_for(lock, timeout,
                        [&] { return board->log.size() > from_index; });
  return board->log.size();
}

#ifdef SORTITION_RELAY_FAULT_INJECTION
void RelayStore::InjectDrop(const std::string& session_id, std::size_t index) {
  auto board = Find(session_id);
  std::unique_lock lock(board->mu);
  board->export_faults[index] = std::nullopt;
}

void RelayStore::InjectSubstitute(const std::string& session_id,
                                  std::size_t index,
                                  const Message& replacement) {
  auto board = Find(session_id);
  std::unique_lock lock(board->mu);
  board->export_faults[index] = replacement;
}
#endif

}  // namespace sortition
