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

#include "sortition/simulation.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>

#include "sortition/errors.h"
#include "sortition/session.h"

namespace sortition {

using nlohmann::json;

GoodnessOfFit ChiSquare(std::span<const std::uint64_t> observed,
                        std::span<const double> expected_probabilities) {
  if (observed.size() != expected_probabilities.size() || observed.size() < 2) {
    throw InvalidArgument("chi-square needs matching tables of >= 2 cells");
  }
  double total = 0;
  for (auto o : observed) total += static_cast<double>(o);
  if (total == 0) throw InvalidArgument("chi-square over zero observations");
  GoodnessOfFit fit;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = total * expected_probabilities[i];
    if (e <= 0) throw InvalidArgument("chi-square cell with zero expectation");
    const double diff = static_cast<double>(observed[i]) - e;
    fit.statistic += diff * diff / e;
  }
  fit.degrees_of_freedom = observed.size() - 1;
  boost::math::chi_squared dist(static_cast<double>(fit.degrees_of_freedom));
  fit.p_value = boost::math::cdf(boost::math::complement(dist, fit.statistic));
  return fit;
}

SimulationReport Simulate(const SessionSpec& spec, std::size_t trials,
                          const AdversaryConfig& adversary,
                          std::size_t threads) {
  RequireValid(ValidateSessionSpec(spec), "session spec");
  if (trials == 0) throw InvalidArgument("simulation needs at least one trial");
  const std::size_t n = spec.stakeholders().size();
  if (adversary.colluders > n) {
    throw InvalidArgument("more colluders than stakeholders");
  }

  std::vector<KeyPair> keys;
  std::vector<PublicKey> publics;
  for (std::size_t i = 0; i < n; ++i) {
    keys.push_back(KeyPair::Generate());
    publics.push_back(keys.back().public_key());
  }
  std::sort(publics.begin(), publics.end(), [](const auto& a, const auto& b) {
    return a.ComputeFingerprint() < b.ComputeFingerprint();
  });
  std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
    return a.public_key().ComputeFingerprint() <
           b.public_key().ComputeFingerprint();
  });

  std::vector<StakeholderId> roster;
  for (std::size_t i = 0; i < n; ++i) {
    roster.push_back(
        {publics[i].ComputeFingerprint(), spec.stakeholders()[i].display_name});
  }
  SessionSpec sim = spec;
  for (auto& d : sim.draws) d.stakeholders = roster;
  const KeyRing ring(publics);

  const Opening fixed{Mask{},
                      std::vector<Share>(sim.draws.size(),
                                         Share{adversary.fixed_share})};

  SimulationReport report;
  report.trials = trials;
  report.stakeholders = n;
  report.adversary = adversary;
  report.no_honest_party = adversary.colluders == n;

  // Ed25519 signatures are deterministic, so a colluder's fixed opening
  // yields the same commit bytes in every trial.
  std::vector<Contribution> fixed_contributions;
  for (std::size_t i = 0; i < adversary.colluders; ++i) {
    fixed_contributions.push_back(PrepareContribution(sim, keys[i], fixed));
  }

  using Counts = std::vector<std::vector<std::uint64_t>>;
  Counts counts;
  for (const auto& d : sim.draws) counts.emplace_back(d.eligible.size(), 0);

  auto run = [&](std::size_t begin, std::size_t end, Counts& local,
                 std::size_t& completed) {
    std::vector<Contribution> round(n);
    for (std::size_t t = begin; t < end; ++t) {
      DrawSession observer = DrawSession::Observe(sim, ring);
      for (std::size_t i = 0; i < n; ++i) {
        round[i] = i < adversary.colluders ? fixed_contributions[i]
                                           : PrepareContribution(sim, keys[i]);
        observer.Receive(round[i].commit);
      }
      for (const auto& c : round) {
        observer.Receive(RevealMessage{c.commit.sender, c.opening.mask,
                                       c.opening.shares});
      }
      if (observer.phase() != Phase::kComplete) continue;
      ++completed;
      const auto outcome = observer.Outcome();
      for (std::size_t k = 0; k < outcome.size(); ++k) {
        ++local[k][sim.draws[k].eligible.EntryIndexAt(outcome[k].d)];
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(
      threads == 0 ? std::thread::hardware_concurrency() : threads, 1,
      std::max<std::size_t>(1, trials / 1000));
  std::vector<Counts> partial(workers, counts);
  std::vector<std::size_t> completed(workers, 0);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        run(trials * w / workers, trials * (w + 1) / workers, partial[w],
            completed[w]);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  for (std::size_t w = 0; w < workers; ++w) {
    report.completed += completed[w];
    for (std::size_t k = 0; k < counts.size(); ++k) {
      for (std::size_t i = 0; i < counts[k].size(); ++i) {
        counts[k][i] += partial[w][k][i];
      }
    }
  }

  for (std::size_t k = 0; k < sim.draws.size(); ++k) {
    const auto& list = sim.draws[k].eligible;
    DrawTally tally{sim.draws[k].did, {}, {}};
    std::vector<double> expected;
    const double space = static_cast<double>(list.index_space());
    const double total = static_cast<double>(report.completed);
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto& e = list.entries()[i];
      CandidateTally c;
      c.candidate = e.candidate;
      c.weight = e.weight;
      c.count = counts[k][i];
      c.expected = static_cast<double>(e.weight) / space;
      c.frequency = total > 0 ? static_cast<double>(c.count) / total : 0;
      c.sigma = total > 0 ? std::sqrt(c.expected * (1 - c.expected) / total) : 0;
      expected.push_back(c.expected);
      tally.candidates.push_back(std::move(c));
    }
    if (list.size() >= 2 && report.completed > 0) {
      tally.fit = ChiSquare(counts[k], expected);
    }
    report.draws.push_back(std::move(tally));
  }
  return report;
}

json SimulationToJson(const SimulationReport& report) {
  json draws = json::array();
  for (const auto& d : report.draws) {
    json cands = json::array();
    for (const auto& c : d.candidates) {
      cands.push_back({{"candidate", c.candidate},
                       {"weight", c.weight},
                       {"count", c.count},
                       {"expected", c.expected},
                       {"frequency", c.frequency},
                       {"sigma", c.sigma}});
    }
    draws.push_back({{"did", d.did.Render()},
                     {"candidates", cands},
                     {"chi_square", d.fit.statistic},
                     {"degrees_of_freedom", d.fit.degrees_of_freedom},
                     {"p_value", d.fit.p_value}});
  }
  return {{"trials", report.trials},
          {"completed", report.completed},
          {"stakeholders", report.stakeholders},
          {"colluders", report.adversary.colluders},
          {"fixed_share", std::to_string(report.adversary.fixed_share)},
          {"no_honest_party", report.no_honest_party},
          {"draws", draws}};
}

std::string FormatSimulation(const SimulationReport& report) {
  std::ostringstream out;
  if (report.no_honest_party) {
    out << "WARNING: every stakeholder colludes; with no honest party the "
           "outcome is not guaranteed to be uniform or unpredictable.\n";
  }
  out << "trials " << report.trials << " (completed " << report.completed
      << "), stakeholders " << report.stakeholders << ", colluders "
      << report.adversary.colluders << "\n";
  for (const auto& d : report.draws) {
    out << "\n" << d.did.Render() << "\n";
    out << std::left << std::setw(24) << "candidate" << std::right
        << std::setw(10) << "count" << std::setw(12) << "frequency"
        << std::setw(12) << "expected" << std::setw(10) << "z" << "\n";
    for (const auto& c : d.candidates) {
      const double z = c.sigma > 0 ? (c.frequency - c.expected) / c.sigma : 0;
      out << std::left << std::setw(24) << c.candidate << std::right
          << std::setw(10) << c.count << std::fixed << std::setprecision(6)
          << std::setw(12) << c.frequency << std::setw(12) << c.expected
          << std::setprecision(2) << std::setw(10) << z << "\n";
    }
    out << std::setprecision(4) << "chi-square " << d.fit.statistic << " (df "
        << d.fit.degrees_of_freedom << "), p-value " << std::setprecision(6)
        << d.fit.p_value << "\n";
    out.unsetf(std::ios::floatfield);
  }
  return out.str();
}

}  // namespace sortition
