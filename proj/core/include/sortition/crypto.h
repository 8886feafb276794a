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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sortition/bytes.h"
#include "sortition/identifiers.h"
#include "sortition/model.h"

namespace sortition {

inline constexpr std::size_t kDigestSize = 32;
inline constexpr std::size_t kMaskSize = 32;

inline constexpr char kHashScheme[] = "sha256";
inline constexpr char kSignatureScheme[] = "ed25519";

using Digest = std::array<std::uint8_t, kDigestSize>;

Digest Sha256(ByteSpan data);

struct Mask {
  std::array<std::uint8_t, kMaskSize> bytes{};

  static Mask FromBytes(ByteSpan raw);
  friend bool operator==(const Mask&, const Mask&) = default;
};

struct Share {
  std::uint64_t value = 0;
  friend auto operator<=>(const Share&, const Share&) = default;
};

struct Commitment {
  Digest digest{};

  static Commitment FromBytes(ByteSpan raw);
  friend bool operator==(const Commitment&, const Commitment&) = default;
};

// 32 bytes from the OS CSPRNG. Aborts the process if the source fails.
Mask GenMask();

// Uniform in [0, index_space) by rejection sampling over 64-bit words.
Share GenShare(std::uint64_t index_space);

// H("COMMITv1" || DRAWv1(spec) || mask || u64be(share)).
// Rejects shares outside the spec's index space.
Commitment Commit(const DrawSpec& spec, const Mask& mask, Share share);

// Recomputes the digest for any share value; constant-time comparison.
bool Open(const Commitment& commitment, const DrawSpec& spec, const Mask& mask,
          Share share);

// Chained commitment over a DrawList:
//   C_0 = H("CHAINv1" || DRAWv1(D_0) || mask_0  || u64be(s_0))
//   C_i = H("CHAINv1" || DRAWv1(D_i) || C_{i-1} || u64be(s_i))
// Only the last digest is ever published.
Commitment ChainCommit(std::span<const DrawSpec> draws, const Mask& mask0,
                       std::span<const Share> shares);

bool VerifyChain(const Commitment& commitment, std::span<const DrawSpec> draws,
                 const Mask& mask0, std::span<const Share> shares);

// Every intermediate C_i; used by tests and the audit report.
std::vector<Commitment> ChainDigests(std::span<const DrawSpec> draws,
                                     const Mask& mask0,
                                     std::span<const Share> shares);

// Dispatches on the session mode: Commit/Open for single, Chain* for chains.
Commitment CommitSession(const SessionSpec& spec, const Mask& mask,
                         std::span<const Share> shares);
bool OpenSession(const Commitment& commitment, const SessionSpec& spec,
                 const Mask& mask, std::span<const Share> shares);

// --- Signatures (Ed25519) ---------------------------------------------------

struct PublicKey {
  std::array<std::uint8_t, 32> bytes{};

  // Rejects wrong lengths and encodings that are not curve points.
  static PublicKey FromBytes(ByteSpan raw);
  sortition::Fingerprint ComputeFingerprint() const;

  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct Signature {
  std::array<std::uint8_t, 64> bytes{};

  static Signature FromBytes(ByteSpan raw);
  friend bool operator==(const Signature&, const Signature&) = default;
};

// Owns the secret half; wiped on destruction.
class KeyPair {
 public:
  static KeyPair Generate();
  // Deterministic; test keys and key files store only the seed.
  static KeyPair FromSeed(ByteSpan seed);

  KeyPair(const KeyPair& other);
  KeyPair& operator=(const KeyPair& other);
  ~KeyPair();

  const PublicKey& public_key() const { return public_key_; }
  std::array<std::uint8_t, 32> Seed() const;
  Signature Sign(ByteSpan payload) const;

 private:
  KeyPair() = default;

  PublicKey public_key_;
  std::array<std::uint8_t, 64> secret_{};
};

Signature SignMessage(const KeyPair& key, ByteSpan payload);
bool VerifyMessage(const PublicKey& key, ByteSpan payload, const Signature& sig);
// Raw-bytes form: malformed key or signature encodings throw
// InvalidArgument instead of returning false.
bool VerifyMessage(ByteSpan key, ByteSpan payload, ByteSpan sig);

// Fixed key derived from a small integer, for tests and examples only.
KeyPair TestKey(std::uint32_t index);

}  // namespace sortition
