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

#include "sortition/crypto.h"

#include <sodium.h>

#include <algorithm>
#include <cstring>
#include <string>

#include "sortition/errors.h"

namespace sortition {
namespace {

constexpr std::string_view kCommitTag = "COMMITv1";
constexpr std::string_view kChainTag = "CHAINv1";

void EnsureSodium() {
  static const bool ready = sodium_init() >= 0;
  if (!ready) throw EntropyError("libsodium initialization failed");
}

Digest HashCommitInput(std::string_view tag, const Bytes& spec_bytes,
                       ByteSpan mask, std::uint64_t share) {
  crypto_hash_sha256_state st;
  crypto_hash_sha256_init(&st);
  crypto_hash_sha256_update(
      &st, reinterpret_cast<const unsigned char*>(tag.data()), tag.size());
  crypto_hash_sha256_update(&st, spec_bytes.data(), spec_bytes.size());
  crypto_hash_sha256_update(&st, mask.data(), mask.size());
  std::uint8_t be[8];
  for (int i = 0; i < 8; ++i) {
    be[i] = static_cast<std::uint8_t>(share >> (56 - 8 * i));
  }
  crypto_hash_sha256_update(&st, be, sizeof(be));
  Digest out;
  crypto_hash_sha256_final(&st, out.data());
  return out;
}

void CheckShare(const DrawSpec& spec, Share share) {
  if (share.value >= spec.eligible.index_space()) {
    throw InvalidArgument("share " + std::to_string(share.value) +
                          " outside index space " +
                          std::to_string(spec.eligible.index_space()) +
                          " of " + spec.did.Render());
  }
}

template <std::size_t N>
std::array<std::uint8_t, N> FixedBytes(ByteSpan raw, const char* what) {
  if (raw.size() != N) {
    throw InvalidArgument(std::string(what) + " must be " + std::to_string(N) +
                          " bytes, got " + std::to_string(raw.size()));
  }
  std::array<std::uint8_t, N> out;
  std::copy(raw.begin(), raw.end(), out.begin());
  return out;
}

}  // namespace

Digest Sha256(ByteSpan data) {
  Digest out;
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

Mask Mask::FromBytes(ByteSpan raw) {
  return Mask{FixedBytes<kMaskSize>(raw, "mask")};
}

Commitment Commitment::FromBytes(ByteSpan raw) {
  return Commitment{FixedBytes<kDigestSize>(raw, "commitment")};
}

Mask GenMask() {
  EnsureSodium();
  Mask m;
  randombytes_buf(m.bytes.data(), m.bytes.size());
  return m;
}

Share GenShare(std::uint64_t index_space) {
  if (index_space == 0) throw InvalidArgument("index space must be >= 1");
  if (index_space == 1) return Share{0};
  EnsureSodium();
  // Values below 2^64 mod n would make the low residues more likely.
  const std::uint64_t threshold = (0 - index_space) % index_space;
  std::uint64_t r = 0;
  do {
    randombytes_buf(&r, sizeof(r));
  } while (r < threshold);
  return Share{r % index_space};
}

Commitment Commit(const DrawSpec& spec, const Mask& mask, Share share) {
  CheckShare(spec, share);
  return Commitment{
      HashCommitInput(kCommitTag, CanonicalEncode(spec), mask.bytes, share.value)};
}

bool Open(const Commitment& commitment, const DrawSpec& spec, const Mask& mask,
          Share share) {
  const Digest d =
      HashCommitInput(kCommitTag, CanonicalEncode(spec), mask.bytes, share.value);
  return sodium_memcmp(d.data(), commitment.digest.data(), kDigestSize) == 0;
}

std::vector<Commitment> ChainDigests(std::span<const DrawSpec> draws,
                                     const Mask& mask0,
                                     std::span<const Share> shares) {
  if (draws.empty()) throw InvalidArgument("chain needs at least one draw");
  if (draws.size() != shares.size()) {
    throw InvalidArgument("chain of " + std::to_string(draws.size()) +
                          " draws needs as many shares, got " +
                          std::to_string(shares.size()));
  }
  std::vector<Commitment> out;
  out.reserve(draws.size());
  ByteSpan prev = mask0.bytes;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    out.push_back(Commitment{HashCommitInput(
        kChainTag, CanonicalEncode(draws[i]), prev, shares[i].value)});
    prev = out.back().digest;
  }
  return out;
}

Commitment ChainCommit(std::span<const DrawSpec> draws, const Mask& mask0,
                       std::span<const Share> shares) {
  if (draws.size() == shares.size()) {
    for (std::size_t i = 0; i < draws.size(); ++i) CheckShare(draws[i], shares[i]);
  }
  return ChainDigests(draws, mask0, shares).back();
}

bool VerifyChain(const Commitment& commitment, std::span<const DrawSpec> draws,
                 const Mask& mask0, std::span<const Share> shares) {
  if (draws.empty() || draws.size() != shares.size()) return false;
  const Commitment c = ChainDigests(draws, mask0, shares).back();
  return sodium_memcmp(c.digest.data(), commitment.digest.data(),
                       kDigestSize) == 0;
}

Commitment CommitSession(const SessionSpec& spec, const Mask& mask,
                         std::span<const Share> shares) {
  if (spec.mode == DrawMode::kSingle) {
    if (shares.size() != 1) {
      throw InvalidArgument("single draw takes exactly one share");
    }
    return Commit(spec.draws.front(), mask, shares.front());
  }
  return ChainCommit(spec.draws, mask, shares);
}

bool OpenSession(const Commitment& commitment, const SessionSpec& spec,
                 const Mask& mask, std::span<const Share> shares) {
  if (spec.mode == DrawMode::kSingle) {
    return shares.size() == 1 &&
           Open(commitment, spec.draws.front(), mask, shares.front());
  }
  return VerifyChain(commitment, spec.draws, mask, shares);
}

PublicKey PublicKey::FromBytes(ByteSpan raw) {
  EnsureSodium();
  PublicKey pk{FixedBytes<32>(raw, "public key")};
  if (crypto_core_ed25519_is_valid_point(pk.bytes.data()) != 1) {
    throw InvalidArgument("public key is not a valid Ed25519 point");
  }
  return pk;
}

Fingerprint PublicKey::ComputeFingerprint() const {
  return Fingerprint{Sha256(bytes)};
}

Signature Signature::FromBytes(ByteSpan raw) {
  return Signature{FixedBytes<64>(raw, "signature")};
}

KeyPair KeyPair::Generate() {
  EnsureSodium();
  std::array<std::uint8_t, 32> seed;
  randombytes_buf(seed.data(), seed.size());
  KeyPair kp = FromSeed(seed);
  sodium_memzero(seed.data(), seed.size());
  return kp;
}

KeyPair KeyPair::FromSeed(ByteSpan seed) {
  EnsureSodium();
  if (seed.size() != crypto_sign_SEEDBYTES) {
    throw InvalidArgument("key seed must be 32 bytes");
  }
  KeyPair kp;
  crypto_sign_seed_keypair(kp.public_key_.bytes.data(), kp.secret_.data(),
                           seed.data());
  return kp;
}

KeyPair::KeyPair(const KeyPair& other)
    : public_key_(other.public_key_), secret_(other.secret_) {}

KeyPair& KeyPair::operator=(const KeyPair& other) {
  public_key_ = other.public_key_;
  secret_ = other.secret_;
  return *this;
}

KeyPair::~KeyPair() { sodium_memzero(secret_.data(), secret_.size()); }

std::array<std::uint8_t, 32> KeyPair::Seed() const {
  std::array<std::uint8_t, 32> seed;
  crypto_sign_ed25519_sk_to_seed(seed.data(), secret_.data());
  return seed;
}

Signature KeyPair::Sign(ByteSpan payload) const {
  Signature sig;
  crypto_sign_detached(sig.bytes.data(), nullptr, payload.data(),
                       payload.size(), secret_.data());
  return sig;
}

Signature SignMessage(const KeyPair& key, ByteSpan payload) {
  return key.Sign(payload);
}

bool VerifyMessage(const PublicKey& key, ByteSpan payload,
                   const Signature& sig) {
  EnsureSodium();
  return crypto_sign_verify_detached(sig.bytes.data(), payload.data(),
                                     payload.size(), key.bytes.data()) == 0;
}

bool VerifyMessage(ByteSpan key, ByteSpan payload, ByteSpan sig) {
  return VerifyMessage(PublicKey::FromBytes(key), payload,
                       Signature::FromBytes(sig));
}

KeyPair TestKey(std::uint32_t index) {
  ByteWriter w;
  w.Raw("sortition-test-key");
  w.U32(index);
  const Digest seed = Sha256(w.bytes());
  return KeyPair::FromSeed(seed);
}

}  // namespace sortition
