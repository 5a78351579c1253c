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

// Small hand-checkable instances shared by the unit and acceptance tests.

#include <memory>
#include <string>
#include <vector>

#include "dynkin/evaluation.hpp"
#include "dynkin/game.hpp"
#include "dynkin/lattice.hpp"
#include "dynkin/strategy.hpp"

namespace dynkin::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(DYNKIN_FIXTURE_DIR) + "/" + name;
}

// Root 0 with children u = 1 and d = 2, probabilities 1/2, dates (0, 1).
inline TreeSpec b1_spec() {
  return {{{0, 0, {{1, 0.5}, {2, 0.5}}}, {1, 1, {}}, {2, 1, {}}}, {0.0, 1.0}};
}
inline constexpr NodeId kU = 1;
inline constexpr NodeId kD = 2;

inline TreePtr make_tree(const TreeSpec& spec) {
  return std::make_shared<const EventTree>(build_tree(spec));
}

inline SchedulePtr b1_schedule() { return ExerciseSchedule::all_stages(make_tree(b1_spec())); }

// Deterministic two-date path 0 -> 1.
inline TreeSpec d2_spec() { return {{{0, 0, {{1, 1.0}}}, {1, 1, {}}}, {0.0, 1.0}}; }

inline AdaptedProcess process(const EventTree& t, const std::vector<std::pair<NodeId, double>>& v) {
  AdaptedProcess p(t.size());
  for (const auto& [id, x] : v) p[t.index_of(id)] = x;
  return p;
}

// X1(0)=1, Y1(0)=2, X1(T)=Y1(T)=0 and the same for agent 2; linear operators.
inline GameInstance d2_game() {
  SchedulePtr s = ExerciseSchedule::all_stages(make_tree(d2_spec()));
  const EventTree& t = s->tree();
  AdaptedProcess x = process(t, {{0, 1.0}, {1, 0.0}});
  AdaptedProcess y = process(t, {{0, 2.0}, {1, 0.0}});
  return {s, make_linear(t), make_linear(t), x, y, x, y, GameConfig{}};
}

// X == Y == c everywhere on a binary tree of the given depth.
inline GameInstance constant_game(double c, int depth = 2) {
  SchedulePtr s = ExerciseSchedule::all_stages(make_tree(balanced_tree_spec(depth, 2)));
  const EventTree& t = s->tree();
  AdaptedProcess p(t.size(), c);
  return {s, make_linear(t), make_entropic(t, 1.0), p, p, p, p, GameConfig{}};
}

// g(x, y) = x - y: constant on nothing, decreasing in the second child.
inline EvaluationOperator broken_difference(const EventTree& t) {
  return make_custom(
      t,
      [](NodeIndex, std::span<const double> c) {
        double v = c[0];
        for (std::size_t k = 1; k < c.size(); ++k) v -= c[k];
        return v;
      },
      "difference");
}

inline StoppingTime stops(const SchedulePtr& s, const std::vector<NodeId>& ids) {
  std::vector<NodeIndex> idx;
  for (NodeId id : ids) idx.push_back(s->tree().index_of(id));
  return StoppingTime(s, idx);
}

}  // namespace dynkin::testing
