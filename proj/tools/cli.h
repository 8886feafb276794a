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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sortition/crypto.h"
#include "sortition/simulation.h"
#include "sortition/spec_json.h"

namespace sortition::cli {

// Exit codes beyond the audit verdicts.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitAborted = 3;
inline constexpr int kExitNetwork = 4;

struct GlobalOptions {
  std::string relay = "http://127.0.0.1:8700";
  bool json = false;
  std::chrono::seconds timeout = kDefaultPhaseTimeout;
};

struct KeygenOptions {
  std::filesystem::path out_dir;
  std::string name;
  bool force = false;
};

struct ParticipateOptions {
  std::filesystem::path spec_file;
  std::filesystem::path key_path;
  // Empty picks transcript-<session>-<fingerprint>.json in the working
  // directory.
  std::filesystem::path transcript_path;
  bool save_transcript = true;
  // Network retries before giving up with kExitNetwork.
  int max_retries = 6;
  std::chrono::milliseconds initial_backoff{100};
  std::chrono::milliseconds max_backoff{2000};
};

struct AuditOptions {
  std::vector<std::filesystem::path> files;
};

struct SimulateOptions {
  std::filesystem::path spec_file;
  std::size_t trials = 100000;
  AdversaryConfig adversary;
};

struct SecretKeyFile {
  KeyPair key;
  std::string name;
};

// Key file I/O. The secret file holds the Ed25519 seed and is created with
// mode 0600; the public file is a stakeholder entry for session documents.
void WriteKeyFiles(const KeygenOptions& options, const KeyPair& key);
SecretKeyFile LoadSecretKey(const std::filesystem::path& path);
StakeholderCredential LoadPublicCredential(const std::filesystem::path& path);

SessionDocument LoadSessionDocument(const std::filesystem::path& path);

int Keygen(const GlobalOptions& g, const KeygenOptions& o, std::ostream& out,
           std::ostream& err);
int Participate(const GlobalOptions& g, const ParticipateOptions& o,
                std::ostream& out, std::ostream& err);
int Audit(const GlobalOptions& g, const AuditOptions& o, std::ostream& out,
          std::ostream& err);
int Simulate(const GlobalOptions& g, const SimulateOptions& o,
             std::ostream& out, std::ostream& err);

// Parses argv (flags over SORTITION_RELAY / SORTITION_TIMEOUT_SECS over
// defaults) and dispatches.
int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace sortition::cli
