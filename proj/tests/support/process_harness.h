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

#include <filesystem>
#include <string>
#include <vector>

#include "tests/support/test_support.h"

namespace sortition::testing {

// A sortition-relay child process serving from memory on a free port.
struct RelayProcess {
  Subprocess process;
  std::string url;
};

RelayProcess StartRelay(const std::filesystem::path& relay_binary,
                        const std::filesystem::path& workdir);

// Runs `sortition keygen` for each name into workdir/<name>; returns the
// key directories.
std::vector<std::filesystem::path> KeygenAll(
    const std::filesystem::path& cli_binary, const std::filesystem::path& workdir,
    const std::vector<std::string>& names);

// Session document over the keygen public files, written to `path`. Every
// draw in `dids` uses the same uniform list of `candidates`.
void WriteSpecFile(const std::filesystem::path& path,
                   const std::vector<std::filesystem::path>& key_dirs,
                   const std::vector<std::string>& dids,
                   const std::vector<std::string>& candidates);

// Blocks until the relay log for the session holds at least `entries`.
bool WaitForRelayEntries(const std::string& relay_url,
                         const SessionDocument& doc, std::size_t entries,
                         std::chrono::milliseconds timeout);

}  // namespace sortition::testing
