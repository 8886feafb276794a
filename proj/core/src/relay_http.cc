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

#include "sortition/relay_http.h"

#include <httplib.h>

#include <algorithm>
#include <charconv>

#include "sortition/relay_client.h"

namespace sortition {
namespace {

using nlohmann::json;

void SetJson(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void SetError(httplib::Response& res, int status, const std::string& what) {
  SetJson(res, status, {{"error", what}});
}

std::size_t QueryNumber(const httplib::Request& req, const char* name,
                        std::size_t fallback) {
  if (!req.has_param(name)) return fallback;
  const std::string v = req.get_param_value(name);
  std::size_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw FormatError(std::string("query parameter '") + name +
                      "' must be a non-negative integer");
  }
  return out;
}

// Runs a handler and maps library errors onto HTTP statuses.
template <typename F>
httplib::Server::Handler Guard(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const NotFound& e) {
      SetError(res, 404, e.what());
    } catch (const ConflictError& e) {
      SetError(res, 409, e.what());
    } catch (const SignatureRejected& e) {
      SetError(res, 422, e.what());
    } catch (const InvalidArgument& e) {
      SetError(res, 400, e.what());
    } catch (const FormatError& e) {
      SetError(res, 400, e.what());
    } catch (const json::exception& e) {
      SetError(res, 400, e.what());
    } catch (const std::exception& e) {
      SetError(res, 500, e.what());
    }
  };
}

json ParseBody(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw FormatError("request body is not valid JSON", e.byte);
  }
}

}  // namespace

class RelayServer::Impl {
 public:
  Impl(RelayStore& store, const RelayServerOptions& options)
      : store_(store), options_(options) {
    const std::size_t workers = options.worker_threads;
    server_.new_task_queue = [workers] {
      return new httplib::ThreadPool(workers);
    };
    server_.set_default_headers(
        {{"Access-Control-Allow-Origin", "*"},
         {"Access-Control-Allow-Headers", "Content-Type, Last-Event-ID"},
         {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    server_.Options(".*", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
    });
    Routes();
  }

  httplib::Server& server() { return server_; }

  void Stopping() { stopping_ = true; }

 private:
  void Routes() {
    server_.Post("/sessions", Guard([this](const auto& req, auto& res) {
      const auto doc = SessionDocumentFromJson(ParseBody(req));
      SetJson(res, 200, {{"session_id", store_.CreateSession(doc)}});
    }));

    server_.Post(R"(/sessions/([0-9a-f]+)/messages)",
                 Guard([this](const auto& req, auto& res) {
                   const Message msg = MessageFromJson(ParseBody(req));
                   const Receipt r = store_.PostMessage(req.matches[1], msg);
                   SetJson(res, 200,
                           {{"index", r.index}, {"timestamp", r.timestamp_ms}});
                 }));

    server_.Get(R"(/sessions/([0-9a-f]+)/messages)",
                Guard([this](const auto& req, auto& res) {
                  const std::string id = req.matches[1];
                  const std::size_t from = QueryNumber(req, "from", 0);
                  const auto wait = std::min<std::chrono::milliseconds>(
                      std::chrono::milliseconds(QueryNumber(req, "wait_ms", 0)),
                      options_.max_wait);
                  if (wait.count() > 0) store_.WaitForEntries(id, from, wait);
                  SetJson(res, 200,
                          LogPageToJson(store_.FetchLog(id, from), from));
                }));

    server_.Get(R"(/sessions/([0-9a-f]+)/transcript)",
                Guard([this](const auto& req, auto& res) {
                  SetJson(res, 200,
                          store_.ExportTranscript(req.matches[1]).ToJson());
                }));

    server_.Get(R"(/sessions/([0-9a-f]+)/status)",
                Guard([this](const auto& req, auto& res) {
                  const std::string id = req.matches[1];
                  json body = StatusToJson(store_.Status(id));
                  body["session_id"] = id;
                  SetJson(res, 200, body);
                }));

    server_.Get(R"(/sessions/([0-9a-f]+)/events)",
                Guard([this](const auto& req, auto& res) { Events(req, res); }));
  }

  // Server-sent events: one "entry" event per new log index.
  void Events(const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    std::size_t from = QueryNumber(req, "from", 0);
    if (req.has_header("Last-Event-ID")) {
      const std::string last = req.get_header_value("Last-Event-ID");
      std::size_t v = 0;
      auto [p, ec] = std::from_chars(last.data(), last.data() + last.size(), v);
      if (ec == std::errc() && p == last.data() + last.size()) from = v + 1;
    }
    store_.Session(id);  // 404 before the stream starts.
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider(
        "text/event-stream",
        [this, id, next = from](std::size_t, httplib::DataSink& sink) mutable {
          while (!stopping_) {
            const std::size_t size =
                store_.WaitForEntries(id, next, std::chrono::seconds(1));
            if (size <= next) {
              static const std::string kKeepAlive = ": keepalive\n\n";
              if (!sink.write(kKeepAlive.data(), kKeepAlive.size())) {
                return false;
              }
              continue;
            }
            for (; next < size; ++next) {
              const std::string ev =
                  "id: " + std::to_string(next) + "\nevent: entry\ndata: " +
                  json{{"index", next}}.dump() + "\n\n";
              if (!sink.write(ev.data(), ev.size())) return false;
            }
          }
          sink.done();
          return true;
        });
  }

  RelayStore& store_;
  RelayServerOptions options_;
  httplib::Server server_;
  std::atomic<bool> stopping_{false};
};

RelayServer::RelayServer(RelayStore& store, RelayServerOptions options)
    : impl_(std::make_unique<Impl>(store, options)),
      options_(std::move(options)) {}

RelayServer::~RelayServer() { Stop(); }

int RelayServer::Bind() {
  if (port_ >= 0) return port_;
  auto& srv = impl_->server();
  if (options_.port == 0) {
    port_ = srv.bind_to_any_port(options_.host);
  } else {
    port_ = srv.bind_to_port(options_.host, options_.port) ? options_.port : -1;
  }
  if (port_ < 0) {
    throw Error("relay: cannot bind " + options_.host + ":" +
                std::to_string(options_.port));
  }
  return port_;
}

void RelayServer::Listen() {
  Bind();
  impl_->server().listen_after_bind();
}

void RelayServer::Start() {
  Bind();
  thread_ = std::thread([this] { impl_->server().listen_after_bind(); });
  impl_->server().wait_until_ready();
}

void RelayServer::Stop() {
  impl_->Stopping();
  impl_->server().stop();
  if (thread_.joinable()) thread_.join();
}

std::string RelayServer::url() const {
  return "http://" + options_.host + ":" + std::to_string(port_);
}

}  // namespace sortition
