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

#include "tools/cli.h"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "sortition/audit.h"
#include "sortition/errors.h"
#include "sortition/relay_client.h"
#include "sortition/session.h"
#include "sortition/transcript.h"

namespace sortition::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr char kSecretVersion[] = "sortition-secretv1";
constexpr char kSecretFile[] = "secret.key";
constexpr char kPublicFile[] = "public.json";

json ReadJsonFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + " is not valid JSON", e.byte);
  }
}

// Creates `path` with the given mode, failing if it exists and `replace` is
// false.
void WriteFileWithMode(const fs::path& path, const std::string& content,
                       mode_t mode, bool replace) {
  int flags = O_WRONLY | O_CREAT | (replace ? O_TRUNC : O_EXCL);
  const int fd = ::open(path.c_str(), flags, mode);
  if (fd < 0) {
    throw Error("cannot create " + path.string() + ": " +
                std::strerror(errno));
  }
  ::fchmod(fd, mode);
  std::size_t done = 0;
  while (done < content.size()) {
    const ssize_t n = ::write(fd, content.data() + done, content.size() - done);
    if (n < 0) {
      ::close(fd);
      throw Error("cannot write " + path.string() + ": " + std::strerror(errno));
    }
    done += static_cast<std::size_t>(n);
  }
  ::close(fd);
}

std::string DescribeStakeholder(const SessionDocument& doc,
                                const Fingerprint& fp) {
  for (const auto& c : doc.credentials) {
    if (c.fingerprint() == fp) {
      return c.name.empty() ? fp.Hex() : fp.Hex() + "\t" + c.name;
    }
  }
  return fp.Hex();
}

void PrintOutcome(const std::vector<DrawOutcome>& outcome, std::ostream& out) {
  for (const auto& o : outcome) {
    out << o.did.Render() << '\t' << o.d << '\t' << o.candidate << '\n';
  }
}

// Retries network failures with exponential backoff; other errors pass
// through.
template <typename F>
auto WithRetry(const ParticipateOptions& o, std::ostream& err, F&& f) {
  auto backoff = o.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    try {
      return f();
    } catch (const NetworkError& e) {
      if (attempt >= o.max_retries) throw;
      err << "network error (attempt " << attempt + 1 << "): " << e.what()
          << "; retrying in " << backoff.count() << " ms\n";
      std::this_thread::sleep_for(backoff);
      backoff = std::min(backoff * 2, o.max_backoff);
    }
  }
}

}  // namespace

void WriteKeyFiles(const KeygenOptions& options, const KeyPair& key) {
  const fs::path secret = options.out_dir / kSecretFile;
  const fs::path pub = options.out_dir / kPublicFile;
  if (!options.force) {
    for (const auto& p : {secret, pub}) {
      if (fs::exists(p)) {
        throw ConflictError(p.string() +
                            " already exists (use --force to overwrite)");
      }
    }
  }
  fs::create_directories(options.out_dir);
  const auto seed = key.Seed();
  const json secret_json = {{"version", kSecretVersion},
                            {"scheme", kSignatureScheme},
                            {"name", options.name},
                            {"seed", ToBase64Url(seed)},
                            {"public_key", ToBase64Url(key.public_key().bytes)}};
  const StakeholderCredential cred{key.public_key(), options.name};
  const json public_json = {{"name", cred.name},
                            {"public_key", ToBase64Url(cred.key.bytes)},
                            {"fingerprint", ToBase64Url(cred.fingerprint().bytes)}};
  WriteFileWithMode(secret, secret_json.dump(2) + "\n", 0600, options.force);
  WriteFileWithMode(pub, public_json.dump(2) + "\n", 0644, options.force);
}

SecretKeyFile LoadSecretKey(const fs::path& path) {
  const fs::path file = fs::is_directory(path) ? path / kSecretFile : path;
  const json j = ReadJsonFile(file);
  try {
    if (j.value("version", "") != kSecretVersion) {
      throw FormatError(file.string() + ": not a sortition secret key file");
    }
    const Bytes seed = FromBase64Url(j.at("seed").get<std::string>());
    SecretKeyFile out{KeyPair::FromSeed(seed), j.value("name", "")};
    if (j.contains("public_key") &&
        FromBase64Url(j.at("public_key").get<std::string>()) !=
            Bytes(out.key.public_key().bytes.begin(),
                  out.key.public_key().bytes.end())) {
      throw FormatError(file.string() + ": public key does not match seed");
    }
    return out;
  } catch (const json::exception& e) {
    throw FormatError(file.string() + ": " + e.what());
  } catch (const FormatError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw FormatError(file.string() + ": " + e.what());
  }
}

StakeholderCredential LoadPublicCredential(const fs::path& path) {
  const fs::path file = fs::is_directory(path) ? path / kPublicFile : path;
  const json j = ReadJsonFile(file);
  try {
    StakeholderCredential c{
        PublicKey::FromBytes(FromBase64Url(j.at("public_key").get<std::string>())),
        j.value("name", "")};
    return c;
  } catch (const json::exception& e) {
    throw FormatError(file.string() + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(file.string() + ": " + e.what());
  }
}

SessionDocument LoadSessionDocument(const fs::path& path) {
  const json j = ReadJsonFile(path);
  try {
    return SessionDocumentFromJson(j);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

int Keygen(const GlobalOptions& g, const KeygenOptions& o, std::ostream& out,
           std::ostream& err) {
  try {
    const KeyPair key = KeyPair::Generate();
    WriteKeyFiles(o, key);
    const Fingerprint fp = key.public_key().ComputeFingerprint();
    if (g.json) {
      out << json{{"fingerprint", fp.Hex()},
                  {"secret_key", (o.out_dir / kSecretFile).string()},
                  {"public", (o.out_dir / kPublicFile).string()}}
                 .dump()
          << '\n';
    } else {
      out << fp.Hex() << '\n';
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "keygen: " << e.what() << '\n';
    return kExitUsage;
  }
}

int Participate(const GlobalOptions& g, const ParticipateOptions& o,
                std::ostream& out, std::ostream& err) {
  SessionDocument doc;
  std::optional<SecretKeyFile> secret;
  try {
    doc = LoadSessionDocument(o.spec_file);
    secret = LoadSecretKey(o.key_path);
  } catch (const Error& e) {
    err << "participate: " << e.what() << '\n';
    return kExitFormatError;
  }
  const Fingerprint self = secret->key.public_key().ComputeFingerprint();
  if (doc.Ring().Find(self) == nullptr) {
    err << "participate: key " << self.Hex()
        << " is not a stakeholder of this drawing\n";
    return kExitUsage;
  }

  const std::string session_id = SessionIdFor(doc.spec);
  const fs::path transcript_path =
      o.transcript_path.empty()
          ? fs::path("transcript-" + session_id + "-" + self.Short() + ".json")
          : o.transcript_path;
  Transcript view(doc);
  auto save = [&](std::optional<std::vector<DrawOutcome>> claimed) {
    if (!o.save_transcript) return;
    view.Finalize(std::move(claimed));
    SaveTranscript(transcript_path, view);
    err << "transcript written to " << transcript_path.string() << '\n';
  };

  try {
    RelayClient client(g.relay);
    WithRetry(o, err, [&] { return client.CreateSession(doc); });

    auto started = DrawSession::Start(doc.spec, doc.Ring(), secret->key);
    DrawSession session = std::move(started.session);
    WithRetry(o, err, [&] { return client.Post(session_id, started.commit); });

    std::size_t next = 0;
    bool revealed = false;
    Phase watched = session.phase();
    auto deadline = std::chrono::steady_clock::now() + g.timeout;
    while (session.phase() != Phase::kComplete &&
           session.phase() != Phase::kAborted) {
      if (session.phase() != watched) {
        watched = session.phase();
        deadline = std::chrono::steady_clock::now() + g.timeout;
      }
      if (session.phase() == Phase::kRevealing && !revealed) {
        const auto reveal = session.OwnReveal();
        WithRetry(o, err, [&] { return client.Post(session_id, *reveal); });
        revealed = true;
      }
      const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (remaining.count() <= 0) {
        session.HandleTimeout();
        break;
      }
      const auto wait = std::min(remaining, std::chrono::milliseconds(1000));
      const LogPage page =
          WithRetry(o, err, [&] { return client.Fetch(session_id, next, wait); });
      for (const auto& e : page.messages) {
        view.Append(e.message, e.timestamp_ms);
        session.Receive(e.message);
      }
      next = page.next_index;
    }

    for (const auto& inc : session.incidents()) {
      err << "incident: " << ToString(inc.kind) << " from "
          << DescribeStakeholder(doc, inc.sender) << ": " << inc.detail << '\n';
    }
    if (session.phase() == Phase::kComplete) {
      const auto outcome = session.Outcome();
      save(outcome);
      if (g.json) {
        out << json{{"session_id", session_id},
                    {"outcome", OutcomeToJson(outcome)}}
                   .dump()
            << '\n';
      } else {
        PrintOutcome(outcome, out);
      }
      return kExitOk;
    }
    save(std::nullopt);
    const auto& report = *session.abort_report();
    if (g.json) {
      json culprits = json::array();
      for (const auto& c : report.culprits) {
        const auto* cred = [&]() -> const StakeholderCredential* {
          for (const auto& x : doc.credentials) {
            if (x.fingerprint() == c) return &x;
          }
          return nullptr;
        }();
        culprits.push_back(
            {{"fingerprint", c.Hex()}, {"name", cred ? cred->name : ""}});
      }
      out << json{{"session_id", session_id},
                  {"aborted", ToString(report.reason)},
                  {"culprits", culprits},
                  {"detail", report.detail}}
                 .dump()
          << '\n';
    } else {
      out << "aborted\t" << ToString(report.reason) << '\n';
      for (const auto& c : report.culprits) {
        out << "culprit\t" << DescribeStakeholder(doc, c) << '\n';
      }
    }
    return kExitAborted;
  } catch (const NetworkError& e) {
    err << "participate: giving up: " << e.what() << '\n';
    save(std::nullopt);
    return kExitNetwork;
  } catch (const FormatError& e) {
    err << "participate: relay served malformed data: " << e.what() << '\n';
    save(std::nullopt);
    return kExitNetwork;
  } catch (const Error& e) {
    err << "participate: " << e.what() << '\n';
    return kExitUsage;
  }
}

int Audit(const GlobalOptions& g, const AuditOptions& o, std::ostream& out,
          std::ostream& err) {
  if (o.files.empty()) {
    err << "audit: no transcript files given\n";
    return kExitFormatError;
  }
  std::vector<Transcript> views;
  for (const auto& f : o.files) {
    try {
      views.push_back(LoadTranscript(f));
    } catch (const FormatError& e) {
      err << "audit: " << f.string() << ": " << e.what() << '\n';
      return kExitFormatError;
    } catch (const Error& e) {
      err << "audit: " << f.string() << ": " << e.what() << '\n';
      return kExitFormatError;
    }
  }

  std::vector<AuditReport> reports;
  for (const auto& v : views) reports.push_back(AuditTranscript(v));

  std::vector<Finding> extra;
  if (views.size() > 1) {
    for (auto& f : DetectEquivocation(views)) extra.push_back(std::move(f));
    const bool any_server = std::any_of(views.begin(), views.end(),
                                        [](const auto& v) { return v.server_view(); });
    for (std::size_t i = 0; i < views.size(); ++i) {
      for (std::size_t j = 0; j < views.size(); ++j) {
        if (i == j) continue;
        const bool pair = any_server
                              ? !views[i].server_view() && views[j].server_view()
                              : i < j;
        if (!pair) continue;
        for (auto f : CrossCheckRelay(views[i], views[j])) {
          for (auto& ev : f.evidence) {
            ev.transcript = ev.transcript == 0 ? i : j;
          }
          extra.push_back(std::move(f));
        }
      }
    }
  }

  Verdict verdict = Verdict::kFair;
  for (const auto& r : reports) {
    if (r.verdict == Verdict::kManipulated) {
      verdict = Verdict::kManipulated;
    } else if (r.verdict == Verdict::kIncomplete && verdict == Verdict::kFair) {
      verdict = Verdict::kIncomplete;
    }
  }
  verdict = CombineVerdict(verdict, extra);

  if (g.json) {
    json files = json::array();
    for (std::size_t i = 0; i < views.size(); ++i) {
      json r = ReportToJson(reports[i]);
      r["path"] = o.files[i].string();
      r["server_view"] = views[i].server_view();
      files.push_back(std::move(r));
    }
    json cross = json::array();
    for (const auto& f : extra) cross.push_back(FindingToJson(f));
    out << json{{"verdict", ToString(verdict)},
                {"files", files},
                {"cross_findings", cross}}
               .dump(2)
        << '\n';
  } else {
    for (std::size_t i = 0; i < views.size(); ++i) {
      if (views.size() > 1) {
        out << "== " << o.files[i].string()
            << (views[i].server_view() ? " (relay view)" : "") << '\n';
      }
      out << FormatReport(reports[i]);
    }
    if (views.size() > 1) {
      out << "== cross-view checks\n";
      if (extra.empty()) out << "no discrepancies between views\n";
      for (const auto& f : extra) out << FormatFinding(f) << '\n';
      out << "overall verdict: " << ToString(verdict) << '\n';
    }
  }
  return ExitCodeFor(verdict);
}

int Simulate(const GlobalOptions& g, const SimulateOptions& o,
             std::ostream& out, std::ostream& err) {
  try {
    const SessionDocument doc = LoadSessionDocument(o.spec_file);
    const SimulationReport report = sortition::Simulate(doc.spec, o.trials, o.adversary);
    if (report.no_honest_party) {
      err << "WARNING: all " << report.stakeholders
          << " stakeholders collude; no honest party remains, so the "
             "fairness guarantee does not apply.\n";
    }
    if (g.json) {
      out << SimulationToJson(report).dump(2) << '\n';
    } else {
      out << FormatSimulation(report);
    }
    return kExitOk;
  } catch (const FormatError& e) {
    err << "simulate: " << e.what() << '\n';
    return kExitFormatError;
  } catch (const Error& e) {
    err << "simulate: " << e.what() << '\n';
    return kExitUsage;
  }
}

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Auditable commit-and-reveal random drawings", "sortition"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");

  GlobalOptions g;
  std::int64_t timeout_secs = g.timeout.count();
  app.add_option("--relay", g.relay, "Relay base URL")
      ->envname("SORTITION_RELAY")
      ->capture_default_str();
  app.add_flag("--json", g.json, "Machine-readable output");
  app.add_option("--timeout-secs", timeout_secs, "Per-phase timeout in seconds")
      ->envname("SORTITION_TIMEOUT_SECS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  KeygenOptions keygen;
  auto* kg = app.add_subcommand("keygen", "Create an Ed25519 stakeholder key");
  kg->add_option("--out,-o", keygen.out_dir, "Output directory")->required();
  kg->add_option("--name", keygen.name, "Display name in the public file");
  kg->add_flag("--force", keygen.force, "Overwrite existing key files");

  ParticipateOptions part;
  std::string transcript_out;
  bool no_transcript = false;
  auto* pa = app.add_subcommand("participate",
                                "Take part in a drawing through the relay");
  pa->add_option("--spec", part.spec_file, "Session document (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  pa->add_option("--key", part.key_path, "Secret key file or keygen directory")
      ->required()
      ->check(CLI::ExistingPath);
  pa->add_option("--transcript", transcript_out,
                 "Where to write the local transcript view");
  pa->add_flag("--no-transcript", no_transcript,
               "Do not write the local transcript view");
  pa->add_option("--retries", part.max_retries,
                 "Network retries before giving up")
      ->capture_default_str();

  AuditOptions audit;
  std::vector<std::string> audit_files;
  auto* au = app.add_subcommand("audit", "Audit one or more transcript views");
  au->add_option("files", audit_files, "Transcript files")->required();

  SimulateOptions sim;
  auto* si = app.add_subcommand("simulate",
                                "Estimate the outcome distribution in process");
  si->add_option("--spec", sim.spec_file, "Session document (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  si->add_option("--trials,-n", sim.trials, "Number of sessions")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  si->add_option("--colluders", sim.adversary.colluders,
                 "Stakeholders that reuse one fixed opening")
      ->capture_default_str();
  si->add_option("--fixed-share", sim.adversary.fixed_share,
                 "Share the colluders commit to")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk
           : au->parsed()              ? kExitFormatError
                                       : kExitUsage;
  }
  g.timeout = std::chrono::seconds(timeout_secs);

  if (kg->parsed()) return Keygen(g, keygen, out, err);
  if (pa->parsed()) {
    part.transcript_path = transcript_out;
    part.save_transcript = !no_transcript;
    return Participate(g, part, out, err);
  }
  if (au->parsed()) {
    for (const auto& f : audit_files) audit.files.emplace_back(f);
    return Audit(g, audit, out, err);
  }
  return Simulate(g, sim, out, err);
}

}  // namespace sortition::cli
