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

#include "sortition/identifiers.h"

#include <algorithm>
#include <charconv>
#include <limits>

#include "sortition/errors.h"

namespace sortition {

DrawId DrawId::Make(std::string proceeding_id, std::uint64_t counter) {
  if (proceeding_id.empty()) {
    throw InvalidArgument("draw id: empty proceeding id");
  }
  if (proceeding_id.find('#') != std::string::npos) {
    throw InvalidArgument("draw id: proceeding id '" + proceeding_id +
                          "' contains the reserved '#' separator");
  }
  return DrawId(std::move(proceeding_id), counter);
}

DrawId DrawId::Parse(std::string_view text) {
  const auto sep = text.rfind('#');
  if (sep == std::string_view::npos) {
    throw InvalidArgument("draw id '" + std::string(text) +
                          "': missing '#' separator");
  }
  std::string_view pid = text.substr(0, sep);
  std::string_view cnt = text.substr(sep + 1);
  if (pid.empty()) {
    throw InvalidArgument("draw id '" + std::string(text) +
                          "': empty proceeding id");
  }
  const bool digits = !cnt.empty() && std::all_of(cnt.begin(), cnt.end(),
                                                  [](char c) {
                                                    return c >= '0' && c <= '9';
                                                  });
  // Leading zeros would break render(parse(x)) == x.
  if (!digits || (cnt.size() > 1 && cnt.front() == '0')) {
    throw InvalidArgument("draw id '" + std::string(text) +
                          "': counter is not a canonical decimal integer");
  }
  std::uint64_t counter = 0;
  auto [ptr, ec] = std::from_chars(cnt.data(), cnt.data() + cnt.size(),
                                   counter);
  if (ec != std::errc() || ptr != cnt.data() + cnt.size()) {
    throw InvalidArgument("draw id '" + std::string(text) +
                          "': counter out of range");
  }
  return DrawId(std::string(pid), counter);
}

std::string DrawId::Render() const {
  return proceeding_id_ + "#" + std::to_string(counter_);
}

DrawId DrawId::Next() const {
  if (counter_ == std::numeric_limits<std::uint64_t>::max()) {
    throw OverflowError("draw id counter exhausted");
  }
  return DrawId(proceeding_id_, counter_ + 1);
}

Fingerprint Fingerprint::FromBytes(ByteSpan raw) {
  if (raw.size() != kFingerprintSize) {
    throw InvalidArgument("fingerprint must be 32 bytes, got " +
                          std::to_string(raw.size()));
  }
  Fingerprint f;
  std::copy(raw.begin(), raw.end(), f.bytes.begin());
  return f;
}

}  // namespace sortition
