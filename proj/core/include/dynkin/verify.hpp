// Copyright 2026 The Dynkin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Brute-force certification of equilibria and the invariant suite that every
// best-response trace must satisfy.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dynkin/game.hpp"

namespace dynkin {

struct Deviation {
  std::optional<StoppingTime> strategy;  // most profitable deviation
  double value = 0.0;                    // its assessment
  double gain = 0.0;                     // value minus the candidate's assessment
};

struct NashReport {
  bool passed = false;
  double j1 = 0.0;
  double j2 = 0.0;
  Deviation agent1;
  Deviation agent2;
  std::uint64_t strategies = 0;  // |Theta|
};

// Every unilateral deviation over Theta; passes when no deviation gains more
// than g.config.tol_eq. Ties keep the first deviation in enumeration order.
NashReport nash_check(const GameInstance& g, const StoppingTime& tau1, const StoppingTime& tau2);

// All pure Nash pairs, agent-1 strategy major, both in enumeration order.
// Throws EnumerationLimitExceeded when |Theta|^2 exceeds g.config.enum_limit.
std::vector<std::pair<StoppingTime, StoppingTime>> all_nash_pairs(const GameInstance& g);

struct CheckItem {
  std::string name;
  bool passed = true;
  std::uint64_t evaluated = 0;
  std::string counterexample;  // first failure, empty when passed
};

struct InvariantReport {
  std::vector<CheckItem> items;
  bool deviations_exhaustive = true;

  bool passed() const;
  const CheckItem* find(const std::string& name) const;
};

struct InvariantOptions {
  std::uint64_t exhaustive_limit = 4096;  // enumerate Theta up to this size
  std::size_t sample_size = 128;          // otherwise sample this many strategies
  std::uint64_t seed = 0x5eed;
  bool oracle = true;                     // brute-force value check when feasible
};

// Replays the trace against the game and checks every structural property
// of the construction: freezing at the opponent's stop, tilde before the
// opponent and before the agent's earlier iterate, the update rule, the
// coincidence of value and payoff at tilde, optimality of each iterate and
// monotone stabilization.
InvariantReport trace_invariants(const GameInstance& g, const EquilibriumResult& result,
                                 const InvariantOptions& options = {});

}  // namespace dynkin
