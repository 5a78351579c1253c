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

#include "dynkin/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "dynkin/error.hpp"

namespace dynkin {

NodeIndex EventTree::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw Error(ErrorCode::kUnknownNode, "node " + std::to_string(id), {id});
  }
  return it->second;
}

std::span<const NodeIndex> EventTree::nodes_at_stage(int stage) const {
  if (stage < 0 || stage > horizon_) {
    throw Error(ErrorCode::kStageOutOfRange, "stage " + std::to_string(stage));
  }
  // Nodes of one stage are contiguous in BFS order.
  auto s = static_cast<std::size_t>(stage);
  return {all_indices_.data() + stage_begin_[s], stage_begin_[s + 1] - stage_begin_[s]};
}

NodeIndex EventTree::ancestor_at(NodeIndex i, int stage) const {
  while (stages_[i] > stage) i = parents_[i];
  return i;
}

bool EventTree::is_ancestor_or_self(NodeIndex ancestor, NodeIndex i) const {
  if (stages_[ancestor] > stages_[i]) return false;
  return ancestor_at(i, stages_[ancestor]) == ancestor;
}

double EventTree::path_prob(NodeIndex i) const {
  double p = 1.0;
  for (; i != 0; i = parents_[i]) p *= probs_[i];
  return p;
}

EventTree build_tree(const TreeSpec& spec) {
  if (spec.nodes.empty()) throw Error(ErrorCode::kNotATree, "tree has no nodes");

  std::unordered_map<NodeId, std::size_t> by_id;
  for (std::size_t k = 0; k < spec.nodes.size(); ++k) {
    if (!by_id.emplace(spec.nodes[k].id, k).second) {
      throw Error(ErrorCode::kDuplicateNodeId,
                  "node " + std::to_string(spec.nodes[k].id) + " listed twice",
                  {spec.nodes[k].id});
    }
  }

  std::vector<int> parent_count(spec.nodes.size(), 0);
  int max_stage = 0;
  for (const auto& node : spec.nodes) {
    if (node.stage < 0) {
      throw Error(ErrorCode::kNotATree, "negative stage at node " + std::to_string(node.id),
                  {node.id});
    }
    max_stage = std::max(max_stage, node.stage);
    double sum = 0.0;
    for (const auto& child : node.children) {
      auto it = by_id.find(child.id);
      if (it == by_id.end()) {
        throw Error(ErrorCode::kDanglingChild,
                    "node " + std::to_string(node.id) + " lists unknown child " +
                        std::to_string(child.id),
                    {node.id, child.id});
      }
      if (spec.nodes[it->second].stage != node.stage + 1) {
        throw Error(ErrorCode::kNotATree,
                    "child " + std::to_string(child.id) + " is not one stage after its parent",
                    {node.id, child.id});
      }
      if (!(child.prob > 0.0 && child.prob <= 1.0)) {
        throw Error(ErrorCode::kProbabilitySumViolation,
                    "transition probability outside (0,1] below node " +
                        std::to_string(node.id),
                    {node.id, child.id});
      }
      ++parent_count[it->second];
      sum += child.prob;
    }
    if (!node.children.empty() && std::abs(sum - 1.0) > kProbabilityTolerance) {
      throw Error(ErrorCode::kProbabilitySumViolation,
                  "children of node " + std::to_string(node.id) + " sum to " +
                      std::to_string(sum),
                  {node.id});
    }
  }

  std::size_t root_pos = spec.nodes.size();
  for (std::size_t k = 0; k < spec.nodes.size(); ++k) {
    if (parent_count[k] > 1) {
      throw Error(ErrorCode::kNotATree,
                  "node " + std::to_string(spec.nodes[k].id) + " has several parents",
                  {spec.nodes[k].id});
    }
    if (parent_count[k] == 0) {
      if (root_pos != spec.nodes.size()) {
        throw Error(ErrorCode::kNotATree, "more than one root",
                    {spec.nodes[root_pos].id, spec.nodes[k].id});
      }
      root_pos = k;
    }
  }
  if (root_pos == spec.nodes.size()) throw Error(ErrorCode::kNotATree, "no root");
  if (spec.nodes[root_pos].stage != 0) {
    throw Error(ErrorCode::kNotATree, "root is not at stage 0", {spec.nodes[root_pos].id});
  }

  for (const auto& node : spec.nodes) {
    if (node.children.empty() && node.stage != max_stage) {
      throw Error(ErrorCode::kLeafAtWrongStage,
                  "leaf " + std::to_string(node.id) + " at stage " +
                      std::to_string(node.stage) + ", horizon is " +
                      std::to_string(max_stage),
                  {node.id});
    }
  }

  std::vector<double> dates = spec.dates;
  if (dates.empty()) {
    for (int s = 0; s <= max_stage; ++s) dates.push_back(static_cast<double>(s));
  }
  if (dates.size() != static_cast<std::size_t>(max_stage) + 1) {
    throw Error(ErrorCode::kNonIncreasingDates,
                "expected " + std::to_string(max_stage + 1) + " dates, got " +
                    std::to_string(dates.size()));
  }
  if (dates.front() < 0.0) throw Error(ErrorCode::kNonIncreasingDates, "negative first date");
  for (std::size_t s = 1; s < dates.size(); ++s) {
    if (!(dates[s] > dates[s - 1])) {
      throw Error(ErrorCode::kNonIncreasingDates,
                  "date of stage " + std::to_string(s) + " does not increase");
    }
  }

  EventTree tree;
  tree.horizon_ = max_stage;
  tree.dates_ = std::move(dates);
  const std::size_t n = spec.nodes.size();
  tree.ids_.reserve(n);
  tree.stages_.reserve(n);
  tree.parents_.reserve(n);
  tree.probs_.reserve(n);

  // BFS; spec positions queued together with their parent index and edge prob.
  struct Pending {
    std::size_t pos;
    NodeIndex parent;
    double prob;
  };
  std::deque<Pending> queue{{root_pos, kNoNode, 1.0}};
  while (!queue.empty()) {
    Pending cur = queue.front();
    queue.pop_front();
    const NodeSpec& node = spec.nodes[cur.pos];
    NodeIndex me = tree.ids_.size();
    tree.ids_.push_back(node.id);
    tree.index_.emplace(node.id, me);
    tree.stages_.push_back(node.stage);
    tree.parents_.push_back(cur.parent);
    tree.probs_.push_back(cur.prob);
    std::vector<ChildSpec> kids = node.children;
    std::sort(kids.begin(), kids.end(),
              [](const ChildSpec& a, const ChildSpec& b) { return a.id < b.id; });
    for (const auto& kid : kids) queue.push_back({by_id.at(kid.id), me, kid.prob});
  }
  if (tree.ids_.size() != n) {
    throw Error(ErrorCode::kNotATree, "nodes unreachable from the root");
  }

  tree.first_child_.assign(n, kNoNode);
  tree.child_count_.assign(n, 0);
  for (NodeIndex i = 1; i < n; ++i) {
    NodeIndex p = tree.parents_[i];
    if (tree.first_child_[p] == kNoNode) tree.first_child_[p] = i;
    ++tree.child_count_[p];
  }
  for (NodeIndex i = 0; i < n; ++i) {
    if (tree.first_child_[i] == kNoNode) tree.first_child_[i] = n;  // empty span
  }

  tree.leaf_begin_.assign(n, 0);
  tree.leaf_end_.assign(n, 0);
  for (NodeIndex i = 0; i < n; ++i) {
    if (tree.child_count_[i] == 0) {
      tree.leaf_begin_[i] = tree.leaves_.size();
      tree.leaves_.push_back(i);
      tree.leaf_end_[i] = tree.leaves_.size();
    }
  }
  for (NodeIndex i = n; i-- > 0;) {
    if (tree.child_count_[i] == 0) continue;
    NodeIndex first = tree.first_child_[i];
    NodeIndex last = first + tree.child_count_[i] - 1;
    tree.leaf_begin_[i] = tree.leaf_begin_[first];
    tree.leaf_end_[i] = tree.leaf_end_[last];
  }

  tree.stage_begin_.assign(static_cast<std::size_t>(max_stage) + 2, n);
  for (NodeIndex i = n; i-- > 0;) {
    tree.stage_begin_[static_cast<std::size_t>(tree.stages_[i])] = i;
  }
  tree.all_indices_.resize(n);
  for (NodeIndex i = 0; i < n; ++i) tree.all_indices_[i] = i;
  return tree;
}

TreeSpec balanced_tree_spec(int depth, int branching) {
  TreeSpec spec;
  NodeId next = 1;
  std::vector<NodeId> frontier{0};
  spec.nodes.push_back({0, 0, {}});
  for (int s = 1; s <= depth; ++s) {
    std::vector<NodeId> next_frontier;
    for (NodeId parent : frontier) {
      for (int b = 0; b < branching; ++b) {
        NodeId id = next++;
        spec.nodes[static_cast<std::size_t>(parent)].children.push_back({id, 1.0 / branching});
        spec.nodes.push_back({id, s, {}});
        next_frontier.push_back(id);
      }
    }
    frontier = std::move(next_frontier);
  }
  for (int s = 0; s <= depth; ++s) {
    spec.dates.push_back(depth == 0 ? 1.0 : static_cast<double>(s) / depth);
  }
  return spec;
}

std::vector<NodeIndex> descendants(const EventTree& tree, NodeIndex node) {
  if (node >= tree.size()) {
    throw Error(ErrorCode::kUnknownNode, "node index " + std::to_string(node));
  }
  std::vector<NodeIndex> out{node};
  // Children are contiguous, so a BFS over the subtree is a scan of ranges.
  for (std::size_t k = 0; k < out.size(); ++k) {
    NodeIndex first = tree.first_child(out[k]);
    for (std::size_t c = 0; c < tree.child_count(out[k]); ++c) out.push_back(first + c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_measurable_at(const EventTree& tree, const AdaptedProcess& x, int stage) {
  if (stage < 0 || stage > tree.horizon()) {
    throw Error(ErrorCode::kStageOutOfRange, "stage " + std::to_string(stage));
  }
  for (NodeIndex atom : tree.nodes_at_stage(stage)) {
    const double v = x[atom];
    for (NodeIndex d : descendants(tree, atom)) {
      if (x[d] != v) return false;
    }
  }
  return true;
}

}  // namespace dynkin
