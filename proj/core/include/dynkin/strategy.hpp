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

// Bermudan stopping strategies on an event tree.
//
// A stopping time is an exact cut of the tree: every root-to-leaf path meets
// exactly one stop node. It is Bermudan when each stop node is a leaf (the
// horizon T) or lies on one of the exercise cuts theta_0 <= ... <= theta_K.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "dynkin/lattice.hpp"

namespace dynkin {

// Indicator over leaf ordinals, i.e. an event in the terminal sigma-algebra.
using LeafSet = std::vector<bool>;
// Per-leaf real values (a random variable on the finite sample space).
using RandomVariable = std::vector<double>;

inline constexpr std::uint64_t kDefaultEnumerationLimit = 1'000'000;

class ExerciseSchedule;
using SchedulePtr = std::shared_ptr<const ExerciseSchedule>;
using TreePtr = std::shared_ptr<const EventTree>;

class ExerciseSchedule {
 public:
  // theta_k = the stage-k cut for k = 0..M (K = max(M, 1)).
  static SchedulePtr all_stages(TreePtr tree);
  // Explicit cuts given as node index lists. Throws InvalidSchedule unless
  // theta_0 = {root}, theta_K = all leaves, K >= 1, every entry is an exact
  // cut and the sequence is pathwise non-decreasing.
  static SchedulePtr from_cuts(TreePtr tree, std::vector<std::vector<NodeIndex>> cuts);

  const EventTree& tree() const noexcept { return *tree_; }
  const TreePtr& tree_ptr() const noexcept { return tree_; }
  std::size_t K() const noexcept { return cuts_.size() - 1; }
  const std::vector<NodeIndex>& theta(std::size_t k) const { return cuts_[k]; }
  // Node of theta_k on the path to the given leaf.
  NodeIndex theta_node(std::size_t k, std::size_t leaf_ord) const {
    return cut_leaf_[k][leaf_ord];
  }

  bool exercisable(NodeIndex v) const { return !exercise_indices_[v].empty(); }
  // Indices k with v in theta_k.
  const std::vector<std::size_t>& exercise_indices(NodeIndex v) const {
    return exercise_indices_[v];
  }
  bool admissible_stop(NodeIndex v) const {
    return tree_->is_leaf(v) || exercisable(v);
  }
  bool is_all_stages() const noexcept { return all_stages_; }

 private:
  ExerciseSchedule(TreePtr tree, std::vector<std::vector<NodeIndex>> cuts, bool all_stages);

  TreePtr tree_;
  std::vector<std::vector<NodeIndex>> cuts_;
  std::vector<std::vector<NodeIndex>> cut_leaf_;
  std::vector<std::vector<std::size_t>> exercise_indices_;
  bool all_stages_ = false;
};

// An element of Theta. Immutable value type; two stopping times compare
// equal when they share a schedule and have the same stop nodes.
class StoppingTime {
 public:
  // Validates the cut and the Bermudan support (InvalidStoppingTime).
  StoppingTime(SchedulePtr schedule, std::vector<NodeIndex> stop_nodes);

  static StoppingTime at_root(SchedulePtr schedule);     // tau == 0
  static StoppingTime at_horizon(SchedulePtr schedule);  // tau == T
  // Builds from the stop node governing each leaf; the assignment must be
  // measurable (all leaves below a stop node agree) and Bermudan.
  static StoppingTime from_leaf_stops(SchedulePtr schedule, std::vector<NodeIndex> leaf_stops);

  const ExerciseSchedule& schedule() const noexcept { return *schedule_; }
  const SchedulePtr& schedule_ptr() const noexcept { return schedule_; }
  const EventTree& tree() const noexcept { return schedule_->tree(); }

  // Sorted ascending.
  const std::vector<NodeIndex>& stop_nodes() const noexcept { return stops_; }
  NodeIndex stop_for_leaf(std::size_t leaf_ord) const { return leaf_stop_[leaf_ord]; }
  const std::vector<NodeIndex>& leaf_stops() const noexcept { return leaf_stop_; }
  int stage_for_leaf(std::size_t leaf_ord) const { return tree().stage(leaf_stop_[leaf_ord]); }

  bool stops_at(NodeIndex v) const;
  // v lies on the cut or below it.
  bool at_or_after(NodeIndex v) const {
    return tree().stage(leaf_stop_[tree().leaf_begin(v)]) <= tree().stage(v);
  }
  // v lies strictly above the cut (the game has not stopped at v).
  bool strictly_before(NodeIndex v) const { return !at_or_after(v); }
  // Stop node governing an at-or-after node v.
  NodeIndex governing_stop(NodeIndex v) const { return leaf_stop_[tree().leaf_begin(v)]; }

  std::vector<NodeId> stop_ids() const;

  friend bool operator==(const StoppingTime& a, const StoppingTime& b) {
    return a.schedule_ == b.schedule_ && a.stops_ == b.stops_;
  }

 private:
  struct Unchecked {};
  StoppingTime(Unchecked, SchedulePtr schedule, std::vector<NodeIndex> stops,
               std::vector<NodeIndex> leaf_stops);
  friend class ThetaEnumerator;

  SchedulePtr schedule_;
  std::vector<NodeIndex> stops_;
  std::vector<NodeIndex> leaf_stop_;
};

// Canonical sets: A_0 = {tau = theta_0},
// A_{k+1} = {tau = theta_{k+1}, theta_{k+1} < T} minus the earlier A's,
// abar = the complement of their union.
struct CanonicalPartition {
  std::vector<LeafSet> a;  // K + 1 sets
  LeafSet abar;
};

CanonicalPartition canonical_partition(const StoppingTime& tau);
// Inverse of canonical_partition. Accepts any partition whose sets are
// measurable at their theta (non-canonical inputs are normalized).
StoppingTime reconstruct(const SchedulePtr& schedule, const CanonicalPartition& partition);

StoppingTime meet(const StoppingTime& a, const StoppingTime& b);  // pointwise min
StoppingTime join(const StoppingTime& a, const StoppingTime& b);  // pointwise max
bool leq(const StoppingTime& a, const StoppingTime& b);           // a <= b on every path

// tau on `event`, other on the complement. The event must be a union of
// atoms of the sigma-algebra at meet(tau, other) (NotMeasurable otherwise).
StoppingTime concatenate(const StoppingTime& tau, const LeafSet& event,
                         const StoppingTime& other);

// Leaves on which a and b stop at the same node / a stops strictly earlier.
LeafSet equal_on(const StoppingTime& a, const StoppingTime& b);
LeafSet strictly_before_on(const StoppingTime& a, const StoppingTime& b);

// |Theta| (or |Theta_from|), saturating at UINT64_MAX.
std::uint64_t count_theta(const ExerciseSchedule& schedule,
                          const std::optional<StoppingTime>& from = std::nullopt);

// Calls `visit` on every element of Theta (>= from, if given) exactly once.
// Order: a node's "stop here" branch precedes its "continue" branch, nodes
// decided in index order; for trees whose ids increase in breadth-first order
// this is lexicographic order of the sorted stop-node id lists.
// Throws EnumerationLimitExceeded when the count exceeds `limit`.
void for_each_theta(const SchedulePtr& schedule, const std::optional<StoppingTime>& from,
                    const std::function<void(const StoppingTime&)>& visit,
                    std::uint64_t limit = kDefaultEnumerationLimit);

std::vector<StoppingTime> enumerate_theta(const SchedulePtr& schedule,
                                          const std::optional<StoppingTime>& from = std::nullopt,
                                          std::uint64_t limit = kDefaultEnumerationLimit);

// phi read at tau, one value per leaf. Throws MissingValues when phi is not
// supplied at a stop node.
RandomVariable evaluate_family_at(const AdaptedProcess& phi, const StoppingTime& tau);

// First entry into `region` (indexed by node) along each path, restricted to
// admissible stop nodes and completed by T.
StoppingTime first_hitting(const SchedulePtr& schedule, const std::vector<bool>& region);

// Random element of Theta (>= from, if given): each live admissible node
// stops with probability `stop_prob`.
StoppingTime random_stopping_time(const SchedulePtr& schedule, std::mt19937_64& rng,
                                  const std::optional<StoppingTime>& from = std::nullopt,
                                  double stop_prob = 0.5);

}  // namespace dynkin
