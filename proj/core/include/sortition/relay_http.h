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

#include <atomic>
#include <chrono>
#include <memory>
#include <string>
#include <thread>

#include "sortition/relay.h"

namespace sortition {

struct RelayServerOptions {
  std::string host = "127.0.0.1";
  int port = 0;  // 0 picks a free port.
  std::size_t worker_threads = 64;
  // Upper bound for long-poll waits requested by clients.
  std::chrono::milliseconds max_wait{30000};
};

// HTTP+JSON front end for a RelayStore.
//
//   POST /sessions                      session document -> {session_id}
//   POST /sessions/{id}/messages        message -> {index, timestamp}
//   GET  /sessions/{id}/messages?from=N[&wait_ms=W]
//                                       -> {messages, next_index}
//   GET  /sessions/{id}/transcript      -> transcriptv1 document
//   GET  /sessions/{id}/status          -> derived phase summary
//   GET  /sessions/{id}/events          -> text/event-stream of new indices
//
// Errors are {"error": "..."} with 400 (malformed), 404 (unknown session),
// 409 (conflicting spec) or 422 (signature rejected). Every response
// carries Access-Control-Allow-Origin: *.
class RelayServer {
 public:
  RelayServer(RelayStore& store, RelayServerOptions options = {});
  ~RelayServer();
  RelayServer(const RelayServer&) = delete;
  RelayServer& operator=(const RelayServer&) = delete;

  // Binds the socket and returns the port actually bound.
  int Bind();
  // Serves until Stop(); binds first if needed.
  void Listen();
  // Listen() on a background thread; returns once the server accepts.
  void Start();
  void Stop();

  int port() const { return port_; }
  std::string url() const;

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
  RelayServerOptions options_;
  int port_ = -1;
  std::thread thread_;
};

}  // namespace sortition
