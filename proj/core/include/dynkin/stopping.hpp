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

// Single-agent optimal stopping over Bermudan strategies, optionally capped
// by an opponent's stopping time: the game is over at the cap, and the value
// from there on is the payoff at the cap node.

#include <cstdint>
#include <optional>

#include "dynkin/evaluation.hpp"
#include "dynkin/lattice.hpp"
#include "dynkin/strategy.hpp"

namespace dynkin {

inline constexpr double kEqualityTolerance = 1e-9;

struct ValueFamily {
  AdaptedProcess values;  // V at every node
  AdaptedProcess payoff;  // xi
  StoppingTime cap;
};

// Backward induction. Nodes at or after the cap carry the payoff at the cap
// node; above the cap V(v) = max(xi(v) if exercisable, g_v(V at children)).
// Throws MissingPayoff when xi is absent at an exercisable node or a leaf.
ValueFamily value_family(const EvaluationOperator& op, const AdaptedProcess& xi,
                         const StoppingTime& cap);
ValueFamily value_family(const EvaluationOperator& op, const AdaptedProcess& xi,
                         const SchedulePtr& schedule);  // uncapped (cap == T)

// First entry into {V == xi} (within tol) among admissible stop nodes.
StoppingTime minimal_optimal(const ValueFamily& vf, double tol = kEqualityTolerance);

// Same stopping time obtained the other way round: first entry into
// {V == reward}, stopped at the cap at the latest. `reward` is the payoff the
// agent receives when stopping strictly before the cap.
StoppingTime minimal_optimal_before_cap(const ValueFamily& vf, const AdaptedProcess& reward,
                                        double tol = kEqualityTolerance);

// Oracle: for every tau >= s, evaluates rho_{s, tau ^ cap} on xi read at
// tau ^ cap and keeps the nodewise maximum at s's stop nodes.
AdaptedProcess brute_force_value(const EvaluationOperator& op, const AdaptedProcess& xi,
                                 const StoppingTime& cap, const StoppingTime& s,
                                 std::uint64_t limit = kDefaultEnumerationLimit);

// Value family of the payoff xi * 1_A, where A is a union of atoms of s
// (NotMeasurable otherwise). Only values at or after s are meaningful.
ValueFamily localized_value(const EvaluationOperator& op, const AdaptedProcess& xi,
                            const LeafSet& event, const StoppingTime& s,
                            const std::optional<StoppingTime>& cap = std::nullopt);

}  // namespace dynkin
