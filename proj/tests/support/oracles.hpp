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

// Reference computations that bypass the backward recursion: path
// probabilities multiplied out leaf by leaf, one-shot certainty equivalents,
// and explicit enumeration of prior selections. Only used on small trees.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dynkin/evaluation.hpp"
#include "dynkin/game.hpp"
#include "dynkin/lattice.hpp"
#include "dynkin/strategy.hpp"

namespace dynkin::testing {

inline double path_probability(const EventTree& t, NodeIndex v) {
  double p = 1.0;
  for (; v != t.root(); v = t.parent(v)) p *= t.edge_prob(v);
  return p;
}

// E[eta(tau)] from the root.
inline double linear_oracle(const EventTree& t, const StoppingTime& tau, const AdaptedProcess& eta) {
  double sum = 0.0;
  for (std::size_t l = 0; l < t.leaf_count(); ++l) {
    sum += path_probability(t, t.leaves()[l]) * eta[tau.stop_for_leaf(l)];
  }
  return sum;
}

// (1/gamma) ln E[exp(gamma eta(tau))] in one shot.
inline double entropic_oracle(const EventTree& t, const StoppingTime& tau,
                              const AdaptedProcess& eta, double gamma) {
  double sum = 0.0;
  for (std::size_t l = 0; l < t.leaf_count(); ++l) {
    sum += path_probability(t, t.leaves()[l]) * std::exp(gamma * eta[tau.stop_for_leaf(l)]);
  }
  return std::log(sum) / gamma;
}

// Extreme expectation over every joint selection of one prior per node that
// lies strictly above tau.
inline double multiprior_oracle(const EventTree& t, const PriorSets& priors, Direction dir,
                                const StoppingTime& tau, const AdaptedProcess& eta) {
  std::vector<NodeIndex> live;
  for (NodeIndex v = 0; v < t.size(); ++v) {
    if (tau.strictly_before(v)) live.push_back(v);
  }
  std::vector<std::size_t> choice(live.size(), 0);
  std::vector<std::size_t> slot(t.size(), 0);
  double best = dir == Direction::kInf ? std::numeric_limits<double>::infinity()
                                       : -std::numeric_limits<double>::infinity();
  for (;;) {
    for (std::size_t k = 0; k < live.size(); ++k) slot[live[k]] = choice[k];
    double sum = 0.0;
    for (std::size_t l = 0; l < t.leaf_count(); ++l) {
      const NodeIndex stop = tau.stop_for_leaf(l);
      double p = 1.0;
      for (NodeIndex v = stop; v != t.root(); v = t.parent(v)) {
        const NodeIndex parent = t.parent(v);
        p *= priors[parent][slot[parent]][v - t.first_child(parent)];
      }
      // Leaves below the same stop node share one term; count it once.
      if (t.leaf_begin(stop) == l) sum += p * eta[stop];
    }
    best = dir == Direction::kInf ? std::min(best, sum) : std::max(best, sum);
    std::size_t k = 0;
    while (k < live.size() && ++choice[k] == priors[live[k]].size()) choice[k++] = 0;
    if (k == live.size()) break;
  }
  return best;
}

inline double rho_oracle(const EvaluationOperator& op, const StoppingTime& tau,
                         const AdaptedProcess& eta) {
  const EventTree& t = tau.tree();
  switch (op.kind()) {
    case OperatorKind::kLinear:
      return linear_oracle(t, tau, eta);
    case OperatorKind::kEntropic:
      return entropic_oracle(t, tau, eta, op.gamma());
    case OperatorKind::kMultiprior:
      return multiprior_oracle(t, op.priors(), op.direction(), tau, eta);
    case OperatorKind::kCustom:
      break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

// The payoff indicator split written out leaf by leaf: agent 1 is
// responsible whenever tau1 <= tau2.
inline std::vector<double> payoff_oracle(const GameInstance& g, Agent agent,
                                         const StoppingTime& tau1, const StoppingTime& tau2) {
  const EventTree& t = g.tree();
  std::vector<double> out(t.leaf_count());
  for (std::size_t l = 0; l < t.leaf_count(); ++l) {
    const NodeIndex a = tau1.stop_for_leaf(l);
    const NodeIndex b = tau2.stop_for_leaf(l);
    const bool first = t.stage(a) <= t.stage(b);
    if (agent == Agent::kFirst) {
      out[l] = first ? g.x1[a] : g.y1[b];
    } else {
      out[l] = first ? g.y2[a] : g.x2[b];
    }
  }
  return out;
}

// Assessment through the reference evaluation of the meet.
inline double assess_oracle(const GameInstance& g, Agent agent, const StoppingTime& tau1,
                            const StoppingTime& tau2) {
  const EventTree& t = g.tree();
  const std::vector<double> pay = payoff_oracle(g, agent, tau1, tau2);
  const StoppingTime ended = meet(tau1, tau2);
  AdaptedProcess eta(t.size());
  for (std::size_t l = 0; l < t.leaf_count(); ++l) eta[ended.stop_for_leaf(l)] = pay[l];
  return rho_oracle(g.rho(agent), ended, eta);
}

}  // namespace dynkin::testing
