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

#include "dynkin/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dynkin/error.hpp"

namespace dynkin {

ValueFamily value_family(const EvaluationOperator& op, const AdaptedProcess& xi,
                         const StoppingTime& cap) {
  const ExerciseSchedule& sched = cap.schedule();
  const EventTree& t = sched.tree();
  if (xi.size() != t.size() || op.size() != t.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "payoff, operator and cap disagree on the tree");
  }
  for (NodeIndex v = 0; v < t.size(); ++v) {
    if (sched.admissible_stop(v) && !xi.has(v)) {
      throw Error(ErrorCode::kMissingPayoff, "no payoff at node " + std::to_string(t.id(v)),
                  {t.id(v)});
    }
  }
  AdaptedProcess values(t.size());
  for (NodeIndex v = t.size(); v-- > 0;) {
    if (cap.at_or_after(v)) {
      values[v] = xi[cap.governing_stop(v)];
      continue;
    }
    const std::span<const double> kids{values.values().data() + t.first_child(v),
                                       t.child_count(v)};
    double continuation = op.aggregate(v, kids);
    values[v] = sched.exercisable(v) ? std::max(xi[v], continuation) : continuation;
  }
  return {std::move(values), xi, cap};
}

ValueFamily value_family(const EvaluationOperator& op, const AdaptedProcess& xi,
                         const SchedulePtr& schedule) {
  return value_family(op, xi, StoppingTime::at_horizon(schedule));
}

StoppingTime minimal_optimal(const ValueFamily& vf, double tol) {
  const EventTree& t = vf.cap.tree();
  std::vector<bool> region(t.size(), false);
  for (NodeIndex v = 0; v < t.size(); ++v) {
    region[v] = vf.payoff.has(v) && std::abs(vf.values[v] - vf.payoff[v]) <= tol;
  }
  return first_hitting(vf.cap.schedule_ptr(), region);
}

StoppingTime minimal_optimal_before_cap(const ValueFamily& vf, const AdaptedProcess& reward,
                                        double tol) {
  const EventTree& t = vf.cap.tree();
  std::vector<bool> region(t.size(), false);
  for (NodeIndex v = 0; v < t.size(); ++v) {
    region[v] = reward.has(v) && std::abs(vf.values[v] - reward[v]) <= tol;
  }
  return meet(first_hitting(vf.cap.schedule_ptr(), region), vf.cap);
}

AdaptedProcess brute_force_value(const EvaluationOperator& op, const AdaptedProcess& xi,
                                 const StoppingTime& cap, const StoppingTime& s,
                                 std::uint64_t limit) {
  if (cap.schedule_ptr() != s.schedule_ptr()) {
    throw Error(ErrorCode::kSchemaMismatch, "cap and S belong to different schedules");
  }
  const EventTree& t = s.tree();
  AdaptedProcess best(t.size());
  AdaptedProcess eta(t.size());
  std::vector<double> scratch;
  for_each_theta(
      s.schedule_ptr(), s,
      [&](const StoppingTime& tau) {
        // The game ends at tau ^ cap; where that is before S the outcome is
        // already known at S and is carried forward unchanged.
        const StoppingTime ended = meet(tau, cap);
        const StoppingTime horizon = join(ended, s);
        for (NodeIndex w : horizon.stop_nodes()) {
          eta[w] = xi[ended.stop_for_leaf(t.leaf_begin(w))];
        }
        backward_values(op, horizon, eta, scratch);
        for (NodeIndex v : s.stop_nodes()) {
          if (!best.has(v) || scratch[v] > best[v]) best[v] = scratch[v];
        }
      },
      limit);
  return best;
}

ValueFamily localized_value(const EvaluationOperator& op, const AdaptedProcess& xi,
                            const LeafSet& event, const StoppingTime& s,
                            const std::optional<StoppingTime>& cap) {
  const EventTree& t = s.tree();
  if (event.size() != t.leaf_count()) {
    throw Error(ErrorCode::kNotMeasurable, "event has the wrong number of leaves");
  }
  for (NodeIndex v : s.stop_nodes()) {
    for (std::size_t l = t.leaf_begin(v); l < t.leaf_end(v); ++l) {
      if (event[l] != event[t.leaf_begin(v)]) {
        throw Error(ErrorCode::kNotMeasurable,
                    "event splits the atom of node " + std::to_string(t.id(v)), {t.id(v)});
      }
    }
  }
  AdaptedProcess masked(t.size());
  for (NodeIndex v = 0; v < t.size(); ++v) {
    if (!xi.has(v)) continue;
    const bool inside = s.at_or_after(v) && event[t.leaf_begin(v)];
    masked[v] = inside ? xi[v] : 0.0;
  }
  return value_family(op, masked, cap ? *cap : StoppingTime::at_horizon(s.schedule_ptr()));
}

}  // namespace dynkin
