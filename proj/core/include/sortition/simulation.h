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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sortition/model.h"

namespace sortition {

// The first `colluders` stakeholders (in canonical order) reuse one fixed
// opening in every trial: share `fixed_share` for every draw and an all-zero
// mask. The rest sample fresh shares.
struct AdversaryConfig {
  std::size_t colluders = 0;
  std::uint64_t fixed_share = 0;
};

struct CandidateTally {
  CandidateId candidate;
  std::uint64_t weight = 0;
  std::uint64_t count = 0;
  double expected = 0;   // weight / index_space
  double frequency = 0;  // count / trials
  double sigma = 0;      // Binomial standard deviation of the frequency.
};

struct GoodnessOfFit {
  double statistic = 0;
  std::size_t degrees_of_freedom = 0;
  double p_value = 1;
};

struct DrawTally {
  DrawId did;
  std::vector<CandidateTally> candidates;
  GoodnessOfFit fit;
};

struct SimulationReport {
  std::size_t trials = 0;
  std::size_t stakeholders = 0;
  AdversaryConfig adversary;
  // Every stakeholder colludes, so the outcome is not protected.
  bool no_honest_party = false;
  std::size_t completed = 0;
  std::vector<DrawTally> draws;
};

// Pearson chi-square of observed counts against expected probabilities.
GoodnessOfFit ChiSquare(std::span<const std::uint64_t> observed,
                        std::span<const double> expected_probabilities);

// Runs `trials` complete sessions in process: every stakeholder gets an
// ephemeral key, signs its commitment, and an observer session verifies all
// commitments and openings before the outcome is tallied. Trials are split
// across `threads` workers (0 uses every hardware thread).
SimulationReport Simulate(const SessionSpec& spec, std::size_t trials,
                          const AdversaryConfig& adversary = {},
                          std::size_t threads = 0);

nlohmann::json SimulationToJson(const SimulationReport& report);
std::string FormatSimulation(const SimulationReport& report);

}  // namespace sortition
