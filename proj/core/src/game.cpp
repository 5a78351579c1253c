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

#include "dynkin/game.hpp"

#include <string>

#include "dynkin/error.hpp"

namespace dynkin {

void validate(const GameInstance& g) {
  const ExerciseSchedule& sched = *g.schedule;
  const EventTree& t = sched.tree();
  if (g.rho1.size() != t.size() || g.rho2.size() != t.size()) {
    throw Error(ErrorCode::kValidationError, "operator built for another tree", {},
                ValidationKind::kOperator);
  }
  for (const AdaptedProcess* p : {&g.x1, &g.y1, &g.x2, &g.y2}) {
    if (p->size() != t.size()) {
      throw Error(ErrorCode::kValidationError, "payoff process has the wrong size", {},
                  ValidationKind::kTree);
    }
  }
  std::vector<NodeId> missing;
  std::vector<NodeId> a1;
  std::vector<NodeId> a2;
  for (NodeIndex v = 0; v < t.size(); ++v) {
    if (!sched.admissible_stop(v)) continue;
    if (!g.x1.has(v) || !g.y1.has(v) || !g.x2.has(v) || !g.y2.has(v)) {
      missing.push_back(t.id(v));
      continue;
    }
    if (g.x1[v] > g.y1[v] || g.x2[v] > g.y2[v]) a1.push_back(t.id(v));
    if (t.is_leaf(v) && (g.x1[v] != g.y1[v] || g.x2[v] != g.y2[v])) a2.push_back(t.id(v));
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::kMissingPayoff, "payoffs missing at exercisable or terminal nodes",
                missing);
  }
  auto list = [](const std::vector<NodeId>& ids) {
    std::string s;
    for (NodeId id : ids) s += (s.empty() ? "" : ", ") + std::to_string(id);
    return s;
  };
  if (!a2.empty()) {
    throw Error(ErrorCode::kValidationError, "X differs from Y at terminal node(s) " + list(a2),
                a2, ValidationKind::kA2);
  }
  if (!a1.empty()) {
    throw Error(ErrorCode::kValidationError, "X exceeds Y at node(s) " + list(a1), a1,
                ValidationKind::kA1);
  }
}

namespace {

void require_schedule(const GameInstance& g, const StoppingTime& a, const StoppingTime& b) {
  if (a.schedule_ptr() != g.schedule || b.schedule_ptr() != g.schedule) {
    throw Error(ErrorCode::kSchemaMismatch, "strategies do not belong to the game's schedule");
  }
}

// Payoff of `agent` at each stop node of tau1 ^ tau2.
AdaptedProcess payoff_at_meet(const GameInstance& g, Agent agent, const StoppingTime& tau1,
                              const StoppingTime& ended) {
  AdaptedProcess eta(g.tree().size());
  for (NodeIndex m : ended.stop_nodes()) {
    const bool first_stops = tau1.stops_at(m);  // tau1 <= tau2 on this atom
    if (agent == Agent::kFirst) {
      eta[m] = first_stops ? g.x1[m] : g.y1[m];
    } else {
      eta[m] = first_stops ? g.y2[m] : g.x2[m];
    }
  }
  return eta;
}

RandomVariable payoff_leafwise(const GameInstance& g, Agent agent, const StoppingTime& tau1,
                               const StoppingTime& tau2) {
  require_schedule(g, tau1, tau2);
  const StoppingTime ended = meet(tau1, tau2);
  return evaluate_family_at(payoff_at_meet(g, agent, tau1, ended), ended);
}

}  // namespace

RandomVariable payoff_i1(const GameInstance& g, const StoppingTime& tau1, const StoppingTime& tau2) {
  return payoff_leafwise(g, Agent::kFirst, tau1, tau2);
}

RandomVariable payoff_i2(const GameInstance& g, const StoppingTime& tau1, const StoppingTime& tau2) {
  return payoff_leafwise(g, Agent::kSecond, tau1, tau2);
}

double assess(const GameInstance& g, Agent agent, const StoppingTime& tau1,
              const StoppingTime& tau2) {
  require_schedule(g, tau1, tau2);
  const StoppingTime ended = meet(tau1, tau2);
  return rho_at_root(g.rho(agent), ended, payoff_at_meet(g, agent, tau1, ended));
}

double assess_j1(const GameInstance& g, const StoppingTime& tau1, const StoppingTime& tau2) {
  return assess(g, Agent::kFirst, tau1, tau2);
}

double assess_j2(const GameInstance& g, const StoppingTime& tau1, const StoppingTime& tau2) {
  return assess(g, Agent::kSecond, tau1, tau2);
}

AdaptedProcess best_response_payoff(const GameInstance& g, Agent agent,
                                    const StoppingTime& opponent) {
  if (opponent.schedule_ptr() != g.schedule) {
    throw Error(ErrorCode::kSchemaMismatch, "opponent strategy belongs to another schedule");
  }
  const EventTree& t = g.tree();
  const AdaptedProcess& x = g.x(agent);
  const AdaptedProcess& y = g.y(agent);
  AdaptedProcess xi(t.size());
  for (NodeIndex v = 0; v < t.size(); ++v) {
    xi[v] = opponent.strictly_before(v) ? x[v] : y[opponent.governing_stop(v)];
  }
  return xi;
}

BestResponse best_response(const GameInstance& g, Agent agent, const StoppingTime& opponent,
                           const StoppingTime& own_previous) {
  const AdaptedProcess xi = best_response_payoff(g, agent, opponent);
  ValueFamily vf = value_family(g.rho(agent), xi, opponent);
  StoppingTime tilde = minimal_optimal(vf, g.config.tol_eq);
  // Keep the earlier of tilde and the previous own iterate where it beats the
  // opponent; elsewhere fall back to the previous own iterate.
  const StoppingTime lower = meet(tilde, own_previous);
  StoppingTime next = concatenate(lower, strictly_before_on(lower, opponent), own_previous);
  const double value0 = vf.values[g.tree().root()];
  return {std::move(tilde), std::move(next), value0, std::move(vf)};
}

EquilibriumResult solve(const GameInstance& g, std::optional<std::size_t> max_iter) {
  const std::size_t limit = max_iter.value_or(
      g.config.max_iter != 0 ? g.config.max_iter : g.default_max_iter());
  const StoppingTime horizon = StoppingTime::at_horizon(g.schedule);
  std::vector<TraceEntry> trace;
  trace.push_back({1, std::nullopt, horizon, std::nullopt});
  trace.push_back({2, std::nullopt, horizon, std::nullopt});

  std::size_t steps = 0;
  auto step = [&](Agent agent) {
    if (++steps > limit) {
      throw Error(ErrorCode::kNoConvergence,
                  "no fixpoint after " + std::to_string(limit) + " best-response steps");
    }
    const std::size_t size = trace.size();
    const StoppingTime& opponent = trace[size - 1].tau;
    const StoppingTime& own_previous = trace[size - 2].tau;
    BestResponse br = best_response(g, agent, opponent, own_previous);
    trace.push_back({static_cast<int>(size + 1), std::move(br.tilde), std::move(br.next), br.value0});
  };

  for (;;) {
    step(Agent::kFirst);
    step(Agent::kSecond);
    const std::size_t k = trace.size();
    if (trace[k - 2].tau == trace[k - 4].tau && trace[k - 1].tau == trace[k - 3].tau) break;
  }

  const StoppingTime tau1 = trace[trace.size() - 2].tau;
  const StoppingTime tau2 = trace.back().tau;
  const double j1 = assess_j1(g, tau1, tau2);
  const double j2 = assess_j2(g, tau1, tau2);
  return {tau1, tau2, j1, j2, std::move(trace), steps, true};
}

}  // namespace dynkin
