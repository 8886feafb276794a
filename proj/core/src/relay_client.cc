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

#include "sortition/relay_client.h"

#include <httplib.h>

namespace sortition {

using nlohmann::json;

json LogPageToJson(const LogPage& page, std::size_t from_index) {
  json messages = json::array();
  std::size_t index = from_index;
  for (const auto& e : page.messages) {
    messages.push_back({{"index", index++},
                        {"timestamp_ms", e.timestamp_ms},
                        {"message", MessageToJson(e.message)}});
  }
  return {{"messages", messages}, {"next_index", page.next_index}};
}

LogPage LogPageFromJson(const json& j) {
  try {
    LogPage page;
    for (const auto& e : j.at("messages")) {
      page.messages.push_back({e.value("timestamp_ms", std::int64_t{0}),
                               MessageFromJson(e.at("message"))});
    }
    page.next_index = j.at("next_index").get<std::size_t>();
    return page;
  } catch (const json::exception& e) {
    throw FormatError(std::string("relay page: ") + e.what());
  }
}

class RelayClient::Impl {
 public:
  explicit Impl(const std::string& url) : client(url) {}
  httplib::Client client;
};

RelayClient::RelayClient(std::string base_url, std::chrono::milliseconds timeout)
    : impl_(std::make_unique<Impl>(base_url)),
      base_url_(std::move(base_url)),
      timeout_(timeout) {
  if (!impl_->client.is_valid()) {
    throw InvalidArgument("invalid relay URL '" + base_url_ + "'");
  }
  impl_->client.set_connection_timeout(timeout_);
  impl_->client.set_keep_alive(true);
}

RelayClient::~RelayClient() = default;

json RelayClient::Request(const std::string& method, const std::string& path,
                          const std::string& body,
                          std::chrono::milliseconds extra_timeout) {
  auto& cli = impl_->client;
  cli.set_read_timeout(timeout_ + extra_timeout);
  cli.set_write_timeout(timeout_);
  httplib::Result res = method == "POST"
                            ? cli.Post(path, body, "application/json")
                            : cli.Get(path);
  if (!res) {
    throw NetworkError("relay " + base_url_ + ": " + method + " " + path +
                       " failed: " + httplib::to_string(res.error()));
  }
  json parsed;
  try {
    parsed = json::parse(res->body);
  } catch (const json::parse_error& e) {
    throw FormatError("relay returned invalid JSON (HTTP " +
                          std::to_string(res->status) + ")",
                      e.byte);
  }
  if (res->status == 200) return parsed;
  const std::string what =
      parsed.is_object() ? parsed.value("error", "unknown error")
                         : "unknown error";
  switch (res->status) {
    case 404: throw NotFound(what);
    case 409: throw ConflictError(what);
    case 422: throw SignatureRejected(what);
    case 400: throw InvalidArgument(what);
    default:
      throw NetworkError("relay HTTP " + std::to_string(res->status) + ": " +
                         what);
  }
}

std::string RelayClient::CreateSession(const SessionDocument& doc) {
  const json r = Request("POST", "/sessions", SessionDocumentToJson(doc).dump(),
                         std::chrono::milliseconds(0));
  return r.at("session_id").get<std::string>();
}

Receipt RelayClient::Post(const std::string& session_id, const Message& msg) {
  const json r = Request("POST", "/sessions/" + session_id + "/messages",
                         MessageToJson(msg).dump(), std::chrono::milliseconds(0));
  return {r.at("index").get<std::size_t>(),
          r.at("timestamp").get<std::int64_t>()};
}

LogPage RelayClient::Fetch(const std::string& session_id, std::size_t from_index,
                           std::chrono::milliseconds wait) {
  std::string path = "/sessions/" + session_id +
                     "/messages?from=" + std::to_string(from_index);
  if (wait.count() > 0) path += "&wait_ms=" + std::to_string(wait.count());
  return LogPageFromJson(Request("GET", path, "", wait));
}

Transcript RelayClient::FetchTranscript(const std::string& session_id) {
  return Transcript::FromJson(Request("GET", "/sessions/" + session_id +
                                              "/transcript",
                                      "", std::chrono::milliseconds(0)));
}

json RelayClient::Status(const std::string& session_id) {
  return Request("GET", "/sessions/" + session_id + "/status", "",
                 std::chrono::milliseconds(0));
}

}  // namespace sortition
