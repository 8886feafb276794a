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

#include "sortition/messages.h"

#include <charconv>

#include "sortition/errors.h"

namespace sortition {
namespace {

constexpr std::string_view kMsgTag = "MSGv1";
constexpr std::uint8_t kCommitType = 0x43;  // 'C'
constexpr std::uint8_t kRevealType = 0x52;  // 'R'

DrawMode ModeFromByte(std::uint8_t b, std::size_t at) {
  if (b == static_cast<std::uint8_t>(DrawMode::kSingle)) return DrawMode::kSingle;
  if (b == static_cast<std::uint8_t>(DrawMode::kChain)) return DrawMode::kChain;
  throw FormatError("unknown draw mode byte", at);
}

template <typename T, typename F>
T Fixed(ByteReader& r, F make, const char* what) {
  const auto at = r.offset();
  Bytes raw = r.Field();
  try {
    return make(raw);
  } catch (const InvalidArgument&) {
    throw FormatError(std::string("bad ") + what, at);
  }
}

const nlohmann::json& Member(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string("message: missing field '") + key + "'");
  }
  return j.at(key);
}

Bytes B64Field(const nlohmann::json& j, const char* key) {
  const auto& v = Member(j, key);
  if (!v.is_string()) {
    throw FormatError(std::string("message: field '") + key +
                      "' must be a base64url string");
  }
  return FromBase64Url(v.get<std::string>());
}

std::uint64_t ShareFromJson(const nlohmann::json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (!v.is_string()) throw FormatError("message: share must be a string");
  const auto s = v.get<std::string>();
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError("message: share '" + s + "' is not a u64");
  }
  return out;
}

template <typename T, typename F>
T Wrap(F make, const char* what) {
  try {
    return make();
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("message: ") + what + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("message: ") + what + ": " + e.what());
  }
}

}  // namespace

const Fingerprint& SenderOf(const Message& msg) {
  return std::visit([](const auto& m) -> const Fingerprint& { return m.sender; },
                    msg);
}

bool IsCommit(const Message& msg) {
  return std::holds_alternative<CommitMessage>(msg);
}

Bytes CommitPayload(const SessionSpec& spec, const Commitment& commitment) {
  ByteWriter w;
  w.Raw(kMsgTag);
  w.U8(static_cast<std::uint8_t>(spec.mode));
  w.Count(spec.draws.size());
  for (const auto& d : spec.draws) w.Raw(CanonicalEncode(d));
  w.Raw(commitment.digest);
  return std::move(w).Take();
}

CommitMessage MakeCommitMessage(const SessionSpec& spec, const KeyPair& key,
                                const Commitment& commitment) {
  CommitMessage m;
  m.mode = spec.mode;
  m.draw_ref = spec.draw_ids();
  m.sender = key.public_key().ComputeFingerprint();
  m.commitment = commitment;
  m.signature = SignMessage(key, CommitPayload(spec, commitment));
  return m;
}

bool VerifyCommitSignature(const SessionSpec& spec, const PublicKey& key,
                           const CommitMessage& msg) {
  return VerifyMessage(key, CommitPayload(spec, msg.commitment), msg.signature);
}

Bytes EncodeMessage(const Message& msg) {
  ByteWriter w;
  w.Raw(kMsgTag);
  if (const auto* c = std::get_if<CommitMessage>(&msg)) {
    w.U8(kCommitType);
    w.U8(static_cast<std::uint8_t>(c->mode));
    w.Count(c->draw_ref.size());
    for (const auto& id : c->draw_ref) w.Field(id.Render());
    w.Field(c->sender.bytes);
    w.Field(c->commitment.digest);
    w.Field(c->signature.bytes);
  } else {
    const auto& r = std::get<RevealMessage>(msg);
    w.U8(kRevealType);
    w.Field(r.sender.bytes);
    w.Field(r.mask.bytes);
    w.Count(r.shares.size());
    for (const auto& s : r.shares) w.U64(s.value);
  }
  return std::move(w).Take();
}

Message DecodeMessage(ByteSpan bytes) {
  ByteReader r(bytes);
  r.ExpectRaw(kMsgTag);
  const auto type_at = r.offset();
  const std::uint8_t type = r.U8();
  if (type == kCommitType) {
    CommitMessage c;
    const auto mode_at = r.offset();
    c.mode = ModeFromByte(r.U8(), mode_at);
    const std::size_t n = r.Count();
    if (n == 0) throw FormatError("commit without draw reference", r.offset());
    for (std::size_t i = 0; i < n; ++i) {
      const auto at = r.offset();
      try {
        c.draw_ref.push_back(DrawId::Parse(r.TextField()));
      } catch (const InvalidArgument& e) {
        throw FormatError(e.what(), at);
      }
    }
    c.sender = Fixed<Fingerprint>(
        r, [](const Bytes& b) { return Fingerprint::FromBytes(b); },
        "sender fingerprint");
    c.commitment = Fixed<Commitment>(
        r, [](const Bytes& b) { return Commitment::FromBytes(b); },
        "commitment digest");
    c.signature = Fixed<Signature>(
        r, [](const Bytes& b) { return Signature::FromBytes(b); }, "signature");
    r.ExpectEnd();
    return c;
  }
  if (type == kRevealType) {
    RevealMessage m;
    m.sender = Fixed<Fingerprint>(
        r, [](const Bytes& b) { return Fingerprint::FromBytes(b); },
        "sender fingerprint");
    m.mask = Fixed<Mask>(r, [](const Bytes& b) { return Mask::FromBytes(b); },
                         "mask");
    const std::size_t n = r.Count();
    if (n == 0) throw FormatError("reveal without shares", r.offset());
    for (std::size_t i = 0; i < n; ++i) m.shares.push_back(Share{r.U64()});
    r.ExpectEnd();
    return m;
  }
  throw FormatError("unknown message type", type_at);
}

nlohmann::json MessageToJson(const Message& msg) {
  nlohmann::json j;
  if (const auto* c = std::get_if<CommitMessage>(&msg)) {
    j["type"] = "commit";
    j["mode"] = ToString(c->mode);
    auto refs = nlohmann::json::array();
    for (const auto& id : c->draw_ref) refs.push_back(id.Render());
    j["draw_ref"] = refs;
    j["sender"] = ToBase64Url(c->sender.bytes);
    j["commitment"] = ToBase64Url(c->commitment.digest);
    j["signature"] = ToBase64Url(c->signature.bytes);
  } else {
    const auto& r = std::get<RevealMessage>(msg);
    j["type"] = "reveal";
    j["sender"] = ToBase64Url(r.sender.bytes);
    j["mask"] = ToBase64Url(r.mask.bytes);
    auto shares = nlohmann::json::array();
    for (const auto& s : r.shares) shares.push_back(std::to_string(s.value));
    j["shares"] = shares;
  }
  return j;
}

Message MessageFromJson(const nlohmann::json& j) {
  const auto& type = Member(j, "type");
  if (type == "commit") {
    CommitMessage c;
    c.mode = Wrap<DrawMode>(
        [&] { return ParseDrawMode(Member(j, "mode").get<std::string>()); },
        "mode");
    const auto& refs = Member(j, "draw_ref");
    if (!refs.is_array() || refs.empty()) {
      throw FormatError("message: draw_ref must be a non-empty array");
    }
    for (const auto& r : refs) {
      if (!r.is_string()) throw FormatError("message: draw_ref entry not text");
      c.draw_ref.push_back(Wrap<DrawId>(
          [&] { return DrawId::Parse(r.get<std::string>()); }, "draw_ref"));
    }
    const Bytes sender = B64Field(j, "sender");
    const Bytes digest = B64Field(j, "commitment");
    const Bytes sig = B64Field(j, "signature");
    c.sender = Wrap<Fingerprint>([&] { return Fingerprint::FromBytes(sender); },
                                 "sender");
    c.commitment = Wrap<Commitment>(
        [&] { return Commitment::FromBytes(digest); }, "commitment");
    c.signature =
        Wrap<Signature>([&] { return Signature::FromBytes(sig); }, "signature");
    return c;
  }
  if (type == "reveal") {
    RevealMessage m;
    const Bytes sender = B64Field(j, "sender");
    const Bytes mask = B64Field(j, "mask");
    m.sender = Wrap<Fingerprint>([&] { return Fingerprint::FromBytes(sender); },
                                 "sender");
    m.mask = Wrap<Mask>([&] { return Mask::FromBytes(mask); }, "mask");
    const auto& shares = Member(j, "shares");
    if (!shares.is_array() || shares.empty()) {
      throw FormatError("message: shares must be a non-empty array");
    }
    for (const auto& s : shares) m.shares.push_back(Share{ShareFromJson(s)});
    return m;
  }
  throw FormatError("message: unknown type");
}

}  // namespace sortition
