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

#include "dynkin/strategy.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "dynkin/error.hpp"

namespace dynkin {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Per-leaf stop nodes of a node set; kNoNode marks uncovered leaves.
// Returns false when two nodes of the set lie on the same path.
bool assign_leaves(const EventTree& tree, const std::vector<NodeIndex>& nodes,
                   std::vector<NodeIndex>& leaf_stop) {
  leaf_stop.assign(tree.leaf_count(), kNoNode);
  for (NodeIndex v : nodes) {
    for (std::size_t l = tree.leaf_begin(v); l < tree.leaf_end(v); ++l) {
      if (leaf_stop[l] != kNoNode) return false;
      leaf_stop[l] = v;
    }
  }
  return true;
}

std::vector<NodeId> to_ids(const EventTree& tree, const std::vector<NodeIndex>& nodes) {
  std::vector<NodeId> ids;
  ids.reserve(nodes.size());
  for (NodeIndex v : nodes) ids.push_back(tree.id(v));
  return ids;
}

void require_same_schedule(const StoppingTime& a, const StoppingTime& b) {
  if (a.schedule_ptr() != b.schedule_ptr()) {
    throw Error(ErrorCode::kSchemaMismatch, "stopping times belong to different schedules");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ExerciseSchedule

ExerciseSchedule::ExerciseSchedule(TreePtr tree, std::vector<std::vector<NodeIndex>> cuts,
                                   bool all_stages)
    : tree_(std::move(tree)), cuts_(std::move(cuts)), all_stages_(all_stages) {
  exercise_indices_.resize(tree_->size());
  cut_leaf_.resize(cuts_.size());
  for (std::size_t k = 0; k < cuts_.size(); ++k) {
    std::sort(cuts_[k].begin(), cuts_[k].end());
    for (NodeIndex v : cuts_[k]) exercise_indices_[v].push_back(k);
    assign_leaves(*tree_, cuts_[k], cut_leaf_[k]);
  }
}

SchedulePtr ExerciseSchedule::all_stages(TreePtr tree) {
  std::vector<std::vector<NodeIndex>> cuts;
  const int m = tree->horizon();
  for (int s = 0; s <= m; ++s) {
    auto nodes = tree->nodes_at_stage(s);
    cuts.emplace_back(nodes.begin(), nodes.end());
  }
  if (m == 0) cuts.push_back(cuts.front());  // K >= 1 even when the root is the horizon
  return SchedulePtr(new ExerciseSchedule(std::move(tree), std::move(cuts), true));
}

SchedulePtr ExerciseSchedule::from_cuts(TreePtr tree, std::vector<std::vector<NodeIndex>> cuts) {
  const EventTree& t = *tree;
  if (cuts.size() < 2) {
    throw Error(ErrorCode::kInvalidSchedule, "schedule needs theta_0 and theta_K (K >= 1)");
  }
  std::vector<std::vector<NodeIndex>> leaf_nodes(cuts.size());
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    for (NodeIndex v : cuts[k]) {
      if (v >= t.size()) {
        throw Error(ErrorCode::kInvalidSchedule, "theta_" + std::to_string(k) +
                                                     " names an unknown node index");
      }
    }
    std::sort(cuts[k].begin(), cuts[k].end());
    if (std::adjacent_find(cuts[k].begin(), cuts[k].end()) != cuts[k].end() ||
        !assign_leaves(t, cuts[k], leaf_nodes[k]) ||
        std::find(leaf_nodes[k].begin(), leaf_nodes[k].end(), kNoNode) != leaf_nodes[k].end()) {
      throw Error(ErrorCode::kInvalidSchedule,
                  "theta_" + std::to_string(k) + " is not an exact cut", to_ids(t, cuts[k]));
    }
  }
  if (cuts.front() != std::vector<NodeIndex>{t.root()}) {
    throw Error(ErrorCode::kInvalidSchedule, "theta_0 must be the root");
  }
  std::vector<NodeIndex> leaves(t.leaves().begin(), t.leaves().end());
  if (cuts.back() != leaves) {
    throw Error(ErrorCode::kInvalidSchedule, "theta_K must be the set of leaves");
  }
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    for (std::size_t l = 0; l < t.leaf_count(); ++l) {
      if (t.stage(leaf_nodes[k][l]) > t.stage(leaf_nodes[k + 1][l])) {
        throw Error(ErrorCode::kInvalidSchedule,
                    "theta_" + std::to_string(k) + " exceeds theta_" + std::to_string(k + 1),
                    {t.id(leaf_nodes[k][l])});
      }
    }
  }
  return SchedulePtr(new ExerciseSchedule(std::move(tree), std::move(cuts), false));
}

// ---------------------------------------------------------------------------
// StoppingTime

StoppingTime::StoppingTime(Unchecked, SchedulePtr schedule, std::vector<NodeIndex> stops,
                           std::vector<NodeIndex> leaf_stops)
    : schedule_(std::move(schedule)), stops_(std::move(stops)), leaf_stop_(std::move(leaf_stops)) {}

StoppingTime::StoppingTime(SchedulePtr schedule, std::vector<NodeIndex> stop_nodes)
    : schedule_(std::move(schedule)), stops_(std::move(stop_nodes)) {
  const EventTree& t = tree();
  std::sort(stops_.begin(), stops_.end());
  for (NodeIndex v : stops_) {
    if (v >= t.size()) throw Error(ErrorCode::kInvalidStoppingTime, "unknown node index");
    if (!schedule_->admissible_stop(v)) {
      throw Error(ErrorCode::kInvalidStoppingTime,
                  "node " + std::to_string(t.id(v)) + " is neither exercisable nor terminal",
                  {t.id(v)});
    }
  }
  if (std::adjacent_find(stops_.begin(), stops_.end()) != stops_.end() ||
      !assign_leaves(t, stops_, leaf_stop_)) {
    throw Error(ErrorCode::kInvalidStoppingTime, "a path meets more than one stop node",
                to_ids(t, stops_));
  }
  for (std::size_t l = 0; l < leaf_stop_.size(); ++l) {
    if (leaf_stop_[l] == kNoNode) {
      throw Error(ErrorCode::kInvalidStoppingTime,
                  "path to leaf " + std::to_string(t.id(t.leaves()[l])) + " never stops",
                  {t.id(t.leaves()[l])});
    }
  }
}

StoppingTime StoppingTime::at_root(SchedulePtr schedule) {
  const NodeIndex root = schedule->tree().root();
  return StoppingTime(std::move(schedule), std::vector<NodeIndex>{root});
}

StoppingTime StoppingTime::at_horizon(SchedulePtr schedule) {
  const auto leaves = schedule->tree().leaves();
  std::vector<NodeIndex> stops(leaves.begin(), leaves.end());
  std::vector<NodeIndex> leaf_stops = stops;
  return StoppingTime(Unchecked{}, std::move(schedule), std::move(stops), std::move(leaf_stops));
}

StoppingTime StoppingTime::from_leaf_stops(SchedulePtr schedule,
                                           std::vector<NodeIndex> leaf_stops) {
  const EventTree& t = schedule->tree();
  if (leaf_stops.size() != t.leaf_count()) {
    throw Error(ErrorCode::kInvalidStoppingTime, "one stop node per leaf is required");
  }
  std::vector<NodeIndex> stops;
  for (std::size_t l = 0; l < leaf_stops.size(); ++l) {
    const NodeIndex v = leaf_stops[l];
    const NodeIndex leaf = t.leaves()[l];
    if (v >= t.size() || !t.is_ancestor_or_self(v, leaf)) {
      throw Error(ErrorCode::kInvalidStoppingTime,
                  "stop node is not on the path to leaf " + std::to_string(t.id(leaf)),
                  {t.id(leaf)});
    }
    if (l == t.leaf_begin(v)) {
      for (std::size_t m = t.leaf_begin(v); m < t.leaf_end(v); ++m) {
        if (leaf_stops[m] != v) {
          throw Error(ErrorCode::kInvalidStoppingTime,
                      "stop rule is not adapted below node " + std::to_string(t.id(v)),
                      {t.id(v)});
        }
      }
      if (!schedule->admissible_stop(v)) {
        throw Error(ErrorCode::kInvalidStoppingTime,
                    "node " + std::to_string(t.id(v)) + " is neither exercisable nor terminal",
                    {t.id(v)});
      }
      stops.push_back(v);
    }
  }
  std::sort(stops.begin(), stops.end());
  return StoppingTime(Unchecked{}, std::move(schedule), std::move(stops), std::move(leaf_stops));
}

bool StoppingTime::stops_at(NodeIndex v) const {
  return leaf_stop_[tree().leaf_begin(v)] == v;
}

std::vector<NodeId> StoppingTime::stop_ids() const { return to_ids(tree(), stops_); }

// ---------------------------------------------------------------------------
// Canonical partition

CanonicalPartition canonical_partition(const StoppingTime& tau) {
  const ExerciseSchedule& sched = tau.schedule();
  const EventTree& t = sched.tree();
  const std::size_t leaves = t.leaf_count();
  CanonicalPartition out;
  out.a.assign(sched.K() + 1, LeafSet(leaves, false));
  out.abar.assign(leaves, true);
  for (std::size_t l = 0; l < leaves; ++l) {
    const NodeIndex stop = tau.stop_for_leaf(l);
    for (std::size_t k = 0; k <= sched.K(); ++k) {
      const NodeIndex theta = sched.theta_node(k, l);
      const bool before_horizon = !t.is_leaf(theta);
      if (stop == theta && (k == 0 || before_horizon)) {
        out.a[k][l] = true;
        out.abar[l] = false;
        break;
      }
    }
  }
  return out;
}

StoppingTime reconstruct(const SchedulePtr& schedule, const CanonicalPartition& partition) {
  const ExerciseSchedule& sched = *schedule;
  const EventTree& t = sched.tree();
  const std::size_t leaves = t.leaf_count();
  if (partition.a.size() > sched.K() + 1 || partition.abar.size() != leaves) {
    throw Error(ErrorCode::kInvalidStoppingTime, "partition does not match the schedule");
  }
  std::vector<NodeIndex> leaf_stops(leaves, kNoNode);
  for (std::size_t l = 0; l < leaves; ++l) {
    int hits = partition.abar[l] ? 1 : 0;
    if (partition.abar[l]) leaf_stops[l] = t.leaves()[l];
    for (std::size_t k = 0; k < partition.a.size(); ++k) {
      if (partition.a[k].size() != leaves) {
        throw Error(ErrorCode::kInvalidStoppingTime, "partition does not match the schedule");
      }
      if (partition.a[k][l]) {
        ++hits;
        leaf_stops[l] = sched.theta_node(k, l);
      }
    }
    if (hits != 1) {
      throw Error(ErrorCode::kInvalidStoppingTime,
                  "sets do not partition the leaves at leaf " + std::to_string(t.id(t.leaves()[l])),
                  {t.id(t.leaves()[l])});
    }
  }
  return StoppingTime::from_leaf_stops(schedule, std::move(leaf_stops));
}

// ---------------------------------------------------------------------------
// Lattice operations

namespace {

template <class Pick>
StoppingTime pointwise(const StoppingTime& a, const StoppingTime& b, Pick pick) {
  require_same_schedule(a, b);
  const EventTree& t = a.tree();
  std::vector<NodeIndex> out(t.leaf_count());
  for (std::size_t l = 0; l < out.size(); ++l) {
    const NodeIndex x = a.stop_for_leaf(l);
    const NodeIndex y = b.stop_for_leaf(l);
    out[l] = pick(t.stage(x), t.stage(y)) ? x : y;
  }
  return StoppingTime::from_leaf_stops(a.schedule_ptr(), std::move(out));
}

}  // namespace

StoppingTime meet(const StoppingTime& a, const StoppingTime& b) {
  return pointwise(a, b, [](int x, int y) { return x <= y; });
}

StoppingTime join(const StoppingTime& a, const StoppingTime& b) {
  return pointwise(a, b, [](int x, int y) { return x >= y; });
}

bool leq(const StoppingTime& a, const StoppingTime& b) {
  require_same_schedule(a, b);
  for (std::size_t l = 0; l < a.tree().leaf_count(); ++l) {
    if (a.stage_for_leaf(l) > b.stage_for_leaf(l)) return false;
  }
  return true;
}

LeafSet equal_on(const StoppingTime& a, const StoppingTime& b) {
  require_same_schedule(a, b);
  LeafSet out(a.tree().leaf_count());
  for (std::size_t l = 0; l < out.size(); ++l) out[l] = a.stop_for_leaf(l) == b.stop_for_leaf(l);
  return out;
}

LeafSet strictly_before_on(const StoppingTime& a, const StoppingTime& b) {
  require_same_schedule(a, b);
  LeafSet out(a.tree().leaf_count());
  for (std::size_t l = 0; l < out.size(); ++l) out[l] = a.stage_for_leaf(l) < b.stage_for_leaf(l);
  return out;
}

StoppingTime concatenate(const StoppingTime& tau, const LeafSet& event,
                         const StoppingTime& other) {
  require_same_schedule(tau, other);
  const EventTree& t = tau.tree();
  if (event.size() != t.leaf_count()) {
    throw Error(ErrorCode::kNotMeasurable, "event has the wrong number of leaves");
  }
  const StoppingTime lower = meet(tau, other);
  for (NodeIndex v : lower.stop_nodes()) {
    const bool first = event[t.leaf_begin(v)];
    for (std::size_t l = t.leaf_begin(v); l < t.leaf_end(v); ++l) {
      if (event[l] != first) {
        throw Error(ErrorCode::kNotMeasurable,
                    "event splits the atom of node " + std::to_string(t.id(v)), {t.id(v)});
      }
    }
  }
  std::vector<NodeIndex> out(t.leaf_count());
  for (std::size_t l = 0; l < out.size(); ++l) {
    out[l] = event[l] ? tau.stop_for_leaf(l) : other.stop_for_leaf(l);
  }
  return StoppingTime::from_leaf_stops(tau.schedule_ptr(), std::move(out));
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return b > std::numeric_limits<std::uint64_t>::max() - a
             ? std::numeric_limits<std::uint64_t>::max()
             : a + b;
}

bool may_stop(const ExerciseSchedule& sched, const std::optional<StoppingTime>& from,
              NodeIndex v) {
  return sched.admissible_stop(v) && (!from || from->at_or_after(v));
}

}  // namespace

std::uint64_t count_theta(const ExerciseSchedule& schedule,
                          const std::optional<StoppingTime>& from) {
  const EventTree& t = schedule.tree();
  std::vector<std::uint64_t> count(t.size(), 0);
  for (NodeIndex v = t.size(); v-- > 0;) {
    std::uint64_t c = may_stop(schedule, from, v) ? 1 : 0;
    if (!t.is_leaf(v)) {
      std::uint64_t product = 1;
      for (std::size_t k = 0; k < t.child_count(v); ++k) {
        product = saturating_mul(product, count[t.first_child(v) + k]);
      }
      c = saturating_add(c, product);
    }
    count[v] = c;
  }
  return count[t.root()];
}

class ThetaEnumerator {
 public:
  static void run(const SchedulePtr& schedule, const std::optional<StoppingTime>& from,
                  const std::function<void(const StoppingTime&)>& visit) {
    const EventTree& t = schedule->tree();
    const std::size_t n = t.size();
    enum : char { kDead, kStop, kContinue };
    std::vector<char> state(n, kDead);
    std::vector<char> can_stop(n);
    for (NodeIndex v = 0; v < n; ++v) can_stop[v] = may_stop(*schedule, from, v);

    auto live = [&](NodeIndex v) { return v == 0 || state[t.parent(v)] == kContinue; };

    std::size_t i = 0;
    for (;;) {
      // Descend: take the first option at every remaining node.
      for (; i < n; ++i) {
        if (!live(i)) {
          state[i] = kDead;
        } else {
          state[i] = can_stop[i] ? kStop : kContinue;
        }
      }
      std::vector<NodeIndex> stops;
      std::vector<NodeIndex> leaf_stops(t.leaf_count());
      for (NodeIndex v = 0; v < n; ++v) {
        if (state[v] == kStop) {
          stops.push_back(v);
          for (std::size_t l = t.leaf_begin(v); l < t.leaf_end(v); ++l) leaf_stops[l] = v;
        }
      }
      visit(StoppingTime(StoppingTime::Unchecked{}, schedule, std::move(stops),
                         std::move(leaf_stops)));
      // Backtrack to the last node whose second option is still open.
      for (;;) {
        if (i == 0) return;
        --i;
        if (state[i] == kStop && !t.is_leaf(i)) {
          state[i] = kContinue;
          ++i;
          break;
        }
      }
    }
  }
};

void for_each_theta(const SchedulePtr& schedule, const std::optional<StoppingTime>& from,
                    const std::function<void(const StoppingTime&)>& visit,
                    std::uint64_t limit) {
  if (from && from->schedule_ptr() != schedule) {
    throw Error(ErrorCode::kSchemaMismatch, "lower bound belongs to another schedule");
  }
  const std::uint64_t count = count_theta(*schedule, from);
  if (count > limit) {
    throw Error(ErrorCode::kEnumerationLimitExceeded,
                std::to_string(count) + " strategies exceed the limit " + std::to_string(limit));
  }
  ThetaEnumerator::run(schedule, from, visit);
}

std::vector<StoppingTime> enumerate_theta(const SchedulePtr& schedule,
                                          const std::optional<StoppingTime>& from,
                                          std::uint64_t limit) {
  std::vector<StoppingTime> out;
  for_each_theta(schedule, from, [&](const StoppingTime& tau) { out.push_back(tau); }, limit);
  return out;
}

// ---------------------------------------------------------------------------

RandomVariable evaluate_family_at(const AdaptedProcess& phi, const StoppingTime& tau) {
  const EventTree& t = tau.tree();
  if (phi.size() != t.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "process and stopping time live on different trees");
  }
  RandomVariable out(t.leaf_count());
  for (std::size_t l = 0; l < out.size(); ++l) {
    const NodeIndex v = tau.stop_for_leaf(l);
    if (!phi.has(v)) {
      throw Error(ErrorCode::kMissingValues, "no value at node " + std::to_string(t.id(v)),
                  {t.id(v)});
    }
    out[l] = phi[v];
  }
  return out;
}

StoppingTime first_hitting(const SchedulePtr& schedule, const std::vector<bool>& region) {
  const EventTree& t = schedule->tree();
  if (region.size() != t.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "region is not indexed by the tree's nodes");
  }
  std::vector<char> covered(t.size(), 0);
  std::vector<NodeIndex> leaf_stops(t.leaf_count());
  for (NodeIndex v = 0; v < t.size(); ++v) {
    if (v != 0 && covered[t.parent(v)]) {
      covered[v] = 1;
      continue;
    }
    const bool hit = t.is_leaf(v) || (region[v] && schedule->exercisable(v));
    if (hit) {
      covered[v] = 1;
      for (std::size_t l = t.leaf_begin(v); l < t.leaf_end(v); ++l) leaf_stops[l] = v;
    }
  }
  return StoppingTime::from_leaf_stops(schedule, std::move(leaf_stops));
}

StoppingTime random_stopping_time(const SchedulePtr& schedule, std::mt19937_64& rng,
                                  const std::optional<StoppingTime>& from, double stop_prob) {
  const EventTree& t = schedule->tree();
  std::vector<char> covered(t.size(), 0);
  std::vector<NodeIndex> leaf_stops(t.leaf_count());
  for (NodeIndex v = 0; v < t.size(); ++v) {
    if (v != 0 && covered[t.parent(v)]) {
      covered[v] = 1;
      continue;
    }
    bool stop = t.is_leaf(v);
    if (!stop && may_stop(*schedule, from, v)) stop = uniform01(rng) < stop_prob;
    if (stop) {
      covered[v] = 1;
      for (std::size_t l = t.leaf_begin(v); l < t.leaf_end(v); ++l) leaf_stops[l] = v;
    }
  }
  return StoppingTime::from_leaf_stops(schedule, std::move(leaf_stops));
}

}  // namespace dynkin
