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
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "sortition/errors.h"
#include "sortition/relay.h"

namespace sortition {

// The relay could not be reached or the connection broke.
class NetworkError : public Error {
 public:
  using Error::Error;
};

// Typed client for the relay HTTP API. Server-side rejections map to the
// matching error types (NotFound, ConflictError, SignatureRejected,
// InvalidArgument); transport failures raise NetworkError.
class RelayClient {
 public:
  explicit RelayClient(std::string base_url,
                       std::chrono::milliseconds timeout = std::chrono::seconds(10));
  ~RelayClient();
  RelayClient(const RelayClient&) = delete;
  RelayClient& operator=(const RelayClient&) = delete;

  std::string CreateSession(const SessionDocument& doc);
  Receipt Post(const std::string& session_id, const Message& msg);
  // Entries from `from_index` on; with `wait` the relay holds the request
  // until something new arrives or the wait expires.
  LogPage Fetch(const std::string& session_id, std::size_t from_index,
                std::chrono::milliseconds wait = std::chrono::milliseconds(0));
  Transcript FetchTranscript(const std::string& session_id);
  nlohmann::json Status(const std::string& session_id);

  const std::string& base_url() const { return base_url_; }

 private:
  nlohmann::json Request(const std::string& method, const std::string& path,
                         const std::string& body,
                         std::chrono::milliseconds extra_timeout);

  class Impl;
  std::unique_ptr<Impl> impl_;
  std::string base_url_;
  std::chrono::milliseconds timeout_;
};

// Decodes the page body returned by GET /sessions/{id}/messages.
LogPage LogPageFromJson(const nlohmann::json& j);
nlohmann::json LogPageToJson(const LogPage& page, std::size_t from_index);

}  // namespace sortition
