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

#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "sortition/crypto.h"
#include "sortition/identifiers.h"
#include "sortition/model.h"

namespace sortition {

// Signed broadcast of the commit phase.
struct CommitMessage {
  DrawMode mode = DrawMode::kSingle;
  std::vector<DrawId> draw_ref;
  Fingerprint sender;
  Commitment commitment;
  Signature signature;

  friend bool operator==(const CommitMessage&, const CommitMessage&) = default;
};

// Opening of a commitment. Unsigned: the signed commitment already binds it.
struct RevealMessage {
  Fingerprint sender;
  Mask mask;
  std::vector<Share> shares;  // One per draw, in draw order.

  friend bool operator==(const RevealMessage&, const RevealMessage&) = default;
};

using Message = std::variant<CommitMessage, RevealMessage>;

const Fingerprint& SenderOf(const Message& msg);
bool IsCommit(const Message& msg);

// Bytes covered by a commit signature:
//   "MSGv1" || u8(mode) || u32be(#draws) || DRAWv1(D_0) .. || digest
Bytes CommitPayload(const SessionSpec& spec, const Commitment& commitment);

CommitMessage MakeCommitMessage(const SessionSpec& spec, const KeyPair& key,
                                const Commitment& commitment);

// True iff the message signature verifies over the payload rebuilt from
// `spec`. Does not look at draw_ref.
bool VerifyCommitSignature(const SessionSpec& spec, const PublicKey& key,
                           const CommitMessage& msg);

// Binary MSGv1 wire form.
//   commit: "MSGv1" 0x43 u8(mode) count{field(did)} field(sender)
//           field(digest) field(signature)
//   reveal: "MSGv1" 0x52 field(sender) field(mask) count{u64(share)}
Bytes EncodeMessage(const Message& msg);
Message DecodeMessage(ByteSpan bytes);

// Textual form used by the relay API and transcripts; byte fields are
// base64url, shares decimal strings.
nlohmann::json MessageToJson(const Message& msg);
Message MessageFromJson(const nlohmann::json& j);

}  // namespace sortition
