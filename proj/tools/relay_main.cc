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

#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "sortition/relay.h"
#include "sortition/relay_http.h"

int main(int argc, char** argv) {
  CLI::App app{"Append-only relay for sortition drawings", "sortition-relay"};
  sortition::RelayServerOptions server;
  server.port = 8700;
  std::string data_dir;
  bool in_memory = false;
  app.add_option("--host", server.host, "Bind address")
      ->envname("SORTITION_RELAY_HOST")
      ->capture_default_str();
  app.add_option("--port", server.port, "Port (0 picks a free one)")
      ->envname("SORTITION_RELAY_PORT")
      ->capture_default_str();
  app.add_option("--data-dir", data_dir, "Directory for the SQLite store")
      ->envname("SORTITION_RELAY_DATA");
  app.add_flag("--in-memory", in_memory, "Keep boards in memory only");
  CLI11_PARSE(app, argc, argv);

  if (data_dir.empty() && !in_memory) {
    std::cerr << "sortition-relay: pass --data-dir or --in-memory\n";
    return 1;
  }

  // Handle termination signals on the main thread only.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    sortition::RelayStore store({in_memory ? std::filesystem::path{}
                                           : std::filesystem::path(data_dir)});
    sortition::RelayServer relay(store, server);
    relay.Start();
    std::cout << "listening on " << relay.url() << std::endl;
    int sig = 0;
    sigwait(&signals, &sig);
    std::cerr << "sortition-relay: shutting down\n";
    relay.Stop();
  } catch (const std::exception& e) {
    std::cerr << "sortition-relay: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
