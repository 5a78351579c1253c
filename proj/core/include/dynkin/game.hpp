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

// Two-player non-zero-sum Dynkin game with Bermudan strategies.
//
// Agent i receives X^i when it stops first (ties count as agent 1 stopping)
// and Y^i when the other agent does. The equilibrium is built by alternating
// capped best responses starting from tau_1 = tau_2 = T; the odd and even
// iterates decrease pathwise and their fixpoint is a Nash pair.

#include <cstdint>
#include <optional>
#include <vector>

#include "dynkin/evaluation.hpp"
#include "dynkin/lattice.hpp"
#include "dynkin/stopping.hpp"
#include "dynkin/strategy.hpp"

namespace dynkin {

enum class Agent { kFirst = 1, kSecond = 2 };

struct GameConfig {
  double tol_eq = kEqualityTolerance;
  std::size_t max_iter = 0;  // 0 selects 2 * |nodes| + 4
  std::uint64_t enum_limit = kDefaultEnumerationLimit;
};

struct GameInstance {
  SchedulePtr schedule;
  EvaluationOperator rho1;
  EvaluationOperator rho2;
  AdaptedProcess x1, y1, x2, y2;
  GameConfig config;

  const EventTree& tree() const { return schedule->tree(); }
  const EvaluationOperator& rho(Agent a) const { return a == Agent::kFirst ? rho1 : rho2; }
  const AdaptedProcess& x(Agent a) const { return a == Agent::kFirst ? x1 : x2; }
  const AdaptedProcess& y(Agent a) const { return a == Agent::kFirst ? y1 : y2; }
  std::size_t default_max_iter() const { return 2 * tree().size() + 4; }
};

// Checks payoff coverage, X <= Y on exercisable nodes and leaves, and X == Y
// at leaves. Throws ValidationError{A1|A2|operator} naming offending nodes.
void validate(const GameInstance& g);

// Payoff of each agent per leaf.
RandomVariable payoff_i1(const GameInstance& g, const StoppingTime& tau1, const StoppingTime& tau2);
RandomVariable payoff_i2(const GameInstance& g, const StoppingTime& tau1, const StoppingTime& tau2);

// Assessments at time 0.
double assess_j1(const GameInstance& g, const StoppingTime& tau1, const StoppingTime& tau2);
double assess_j2(const GameInstance& g, const StoppingTime& tau1, const StoppingTime& tau2);
double assess(const GameInstance& g, Agent agent, const StoppingTime& tau1,
              const StoppingTime& tau2);

// The payoff family an agent faces when the opponent plays `opponent`: X
// strictly before the opponent's stop, Y at the opponent's stop node frozen
// from there on.
AdaptedProcess best_response_payoff(const GameInstance& g, Agent agent,
                                    const StoppingTime& opponent);

struct BestResponse {
  StoppingTime tilde;  // minimal optimal stopping time of the capped problem
  StoppingTime next;   // the agent's next iterate
  double value0;       // V(0)
  ValueFamily values;
};

BestResponse best_response(const GameInstance& g, Agent agent, const StoppingTime& opponent,
                           const StoppingTime& own_previous);

struct TraceEntry {
  int n = 0;  // iterate index; odd = agent 1, even = agent 2
  std::optional<StoppingTime> tilde;  // empty for the two initial iterates
  StoppingTime tau;
  std::optional<double> value0;

  Agent agent() const { return n % 2 == 1 ? Agent::kFirst : Agent::kSecond; }
};

struct EquilibriumResult {
  StoppingTime tau1_star;
  StoppingTime tau2_star;
  double j1 = 0.0;
  double j2 = 0.0;
  std::vector<TraceEntry> trace;  // trace[k].n == k + 1
  std::size_t iterations = 0;     // best-response steps
  bool converged = false;

  const TraceEntry& at(int n) const { return trace.at(static_cast<std::size_t>(n - 1)); }
};

// Alternating best responses until the odd and even iterates both repeat.
// Throws NoConvergence after max_iter best-response steps.
EquilibriumResult solve(const GameInstance& g, std::optional<std::size_t> max_iter = std::nullopt);

}  // namespace dynkin
