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

// Finite event trees standing in for a filtered probability space. Each
// node is an atom of the sigma-algebra at its stage; leaves are the atoms
// of the terminal sigma-algebra (the sample space itself).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dynkin {

using NodeId = std::int64_t;      // external, user-facing id
using NodeIndex = std::size_t;    // dense internal index (BFS order)

inline constexpr NodeIndex kNoNode = std::numeric_limits<NodeIndex>::max();
inline constexpr double kProbabilityTolerance = 1e-12;

struct ChildSpec {
  NodeId id;
  double prob;
};

struct NodeSpec {
  NodeId id;
  int stage;
  std::vector<ChildSpec> children;
};

struct TreeSpec {
  std::vector<NodeSpec> nodes;
  // dates[s] is the calendar time of stage s; dates.back() is the horizon T.
  std::vector<double> dates;
};

// Immutable tree. Internal indices follow a breadth-first traversal with
// siblings sorted by id, so the root is index 0, a parent always precedes its
// children, the children of a node are contiguous, and the leaves below any
// node form a contiguous range of leaf ordinals.
class EventTree {
 public:
  std::size_t size() const noexcept { return ids_.size(); }
  int horizon() const noexcept { return horizon_; }  // M, the last stage
  NodeIndex root() const noexcept { return 0; }

  NodeId id(NodeIndex i) const { return ids_[i]; }
  NodeIndex index_of(NodeId id) const;  // throws UnknownNode
  bool contains(NodeId id) const { return index_.contains(id); }

  int stage(NodeIndex i) const { return stages_[i]; }
  NodeIndex parent(NodeIndex i) const { return parents_[i]; }
  bool is_leaf(NodeIndex i) const { return child_count_[i] == 0; }

  NodeIndex first_child(NodeIndex i) const { return first_child_[i]; }
  std::size_t child_count(NodeIndex i) const { return child_count_[i]; }
  std::span<const double> child_probs(NodeIndex i) const {
    return {probs_.data() + first_child_[i], child_count_[i]};
  }
  // Transition probability from the parent into i (1 for the root).
  double edge_prob(NodeIndex i) const { return probs_[i]; }

  std::span<const NodeIndex> leaves() const { return leaves_; }
  std::size_t leaf_count() const { return leaves_.size(); }
  std::size_t leaf_ordinal(NodeIndex leaf) const { return leaf_begin_[leaf]; }
  std::size_t leaf_begin(NodeIndex i) const { return leaf_begin_[i]; }
  std::size_t leaf_end(NodeIndex i) const { return leaf_end_[i]; }

  std::span<const NodeIndex> nodes_at_stage(int stage) const;
  double date(int stage) const { return dates_[static_cast<std::size_t>(stage)]; }
  std::span<const double> dates() const { return dates_; }

  // The node at `stage` on the path from the root to i; i itself when
  // stage == stage(i). Requires stage <= stage(i).
  NodeIndex ancestor_at(NodeIndex i, int stage) const;
  bool is_ancestor_or_self(NodeIndex ancestor, NodeIndex i) const;

  // Probability of the atom i (product of transition probabilities).
  double path_prob(NodeIndex i) const;

 private:
  friend EventTree build_tree(const TreeSpec& spec);
  EventTree() = default;

  std::vector<NodeId> ids_;
  std::unordered_map<NodeId, NodeIndex> index_;
  std::vector<int> stages_;
  std::vector<NodeIndex> parents_;
  std::vector<NodeIndex> first_child_;
  std::vector<std::size_t> child_count_;
  std::vector<double> probs_;
  std::vector<NodeIndex> leaves_;
  std::vector<std::size_t> leaf_begin_;
  std::vector<std::size_t> leaf_end_;
  std::vector<std::size_t> stage_begin_;
  std::vector<NodeIndex> all_indices_;
  std::vector<double> dates_;
  int horizon_ = 0;
};

// Validates and builds. Errors: DuplicateNodeId, ProbabilitySumViolation,
// DanglingChild, LeafAtWrongStage, NonIncreasingDates, NotATree.
EventTree build_tree(const TreeSpec& spec);

// A full `branching`-ary tree with `depth` stages after the root, uniform
// transition probabilities, ids assigned in breadth-first order and dates
// 0, 1/depth, ..., 1.
TreeSpec balanced_tree_spec(int depth, int branching);

// One real number per node. NaN marks "not supplied".
class AdaptedProcess {
 public:
  AdaptedProcess() = default;
  explicit AdaptedProcess(std::size_t size,
                          double fill = std::numeric_limits<double>::quiet_NaN())
      : values_(size, fill) {}
  explicit AdaptedProcess(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](NodeIndex i) const { return values_[i]; }
  double& operator[](NodeIndex i) { return values_[i]; }
  bool has(NodeIndex i) const { return !std::isnan(values_[i]); }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const AdaptedProcess&, const AdaptedProcess&) = default;

 private:
  std::vector<double> values_;
};

// Every node in the subtree rooted at `node`, inclusive, in index order.
std::vector<NodeIndex> descendants(const EventTree& tree, NodeIndex node);

// True iff x is constant on the subtree below each node at `stage`.
// Throws StageOutOfRange.
bool is_measurable_at(const EventTree& tree, const AdaptedProcess& x, int stage);

}  // namespace dynkin
