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

#include <map>
#include <string>
#include <vector>

#include "tests/support/test_support.h"

namespace sortition::testing {

// Relay scenarios built on a RelayStore with export faults: the honest
// client view first, the doctored relay export second.
//   relay_omission      the export drops stakeholder 1's reveal
//   relay_substitution  the export swaps stakeholder 1's reveal for one
//                       with a different share
std::vector<AdversaryFixture> RelayFixtures();

// AdversaryFixtures() followed by RelayFixtures().
std::vector<AdversaryFixture> AllAdversaryFixtures();

// File name to serialized transcript for the checked-in fixture directory:
//   golden_honest.json
//   <scenario>.json                                  single-view scenarios
//   <scenario>.client.json and <scenario>.relay.json  relay scenarios
std::map<std::string, std::string> RenderFixtures();

}  // namespace sortition::testing
