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

// Regenerates the transcript fixtures; the directory defaults to the
// checked-in one.

#include <iostream>

#include "tests/support/relay_fixtures.h"

int main(int argc, char** argv) {
  const std::filesystem::path dir =
      argc > 1 ? argv[1] : sortition::testing::FixtureDir();
  std::filesystem::create_directories(dir);
  for (const auto& [name, text] : sortition::testing::RenderFixtures()) {
    sortition::testing::WriteFile(dir / name, text);
    std::cout << (dir / name).string() << '\n';
  }
  return 0;
}
