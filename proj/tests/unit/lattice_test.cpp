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

#include <cmath>

#include "doctest.h"
#include "dynkin/error.hpp"
#include "dynkin/lattice.hpp"
#include "support/fixtures.hpp"

namespace dynkin {
namespace {

using testing::b1_spec;

ErrorCode code_of(const TreeSpec& spec) {
  try {
    build_tree(spec);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("tree was accepted");
  return ErrorCode::kParseError;
}

TEST_SUITE("lattice") {
  TEST_CASE("single node tree") {
    const EventTree t = build_tree({{{7, 0, {}}}, {1.0}});
    CHECK(t.size() == 1);
    CHECK(t.horizon() == 0);
    CHECK(t.is_leaf(t.root()));
    CHECK(t.leaf_count() == 1);
  }

  TEST_CASE("B1 builds with three nodes") {
    const EventTree t = build_tree(b1_spec());
    CHECK(t.size() == 3);
    CHECK(t.horizon() == 1);
    CHECK(t.child_count(t.root()) == 2);
    CHECK(t.path_prob(t.index_of(testing::kU)) == doctest::Approx(0.5));
    CHECK(t.date(1) == 1.0);
  }

  TEST_CASE("structural errors") {
    TreeSpec bad = b1_spec();
    bad.nodes[0].children[1].prob = 0.6;
    CHECK(code_of(bad) == ErrorCode::kProbabilitySumViolation);

    bad = b1_spec();
    bad.nodes[2].id = 1;
    CHECK(code_of(bad) == ErrorCode::kDuplicateNodeId);

    bad = b1_spec();
    bad.nodes[0].children.push_back({9, 0.0});
    CHECK(code_of(bad) == ErrorCode::kDanglingChild);

    bad = {{{0, 0, {{1, 0.5}, {2, 0.5}}}, {1, 1, {{3, 1.0}}}, {2, 1, {}}, {3, 2, {}}}, {}};
    CHECK(code_of(bad) == ErrorCode::kLeafAtWrongStage);

    bad = b1_spec();
    bad.dates = {1.0, 1.0};
    CHECK(code_of(bad) == ErrorCode::kNonIncreasingDates);

    bad = b1_spec();
    bad.nodes[1].stage = 2;
    CHECK(code_of(bad) == ErrorCode::kNotATree);
  }

  TEST_CASE("index order is breadth first with sorted siblings") {
    const EventTree t =
        build_tree({{{5, 0, {{9, 0.5}, {3, 0.5}}}, {9, 1, {}}, {3, 1, {}}}, {}});
    CHECK(t.id(0) == 5);
    CHECK(t.id(1) == 3);
    CHECK(t.id(2) == 9);
    CHECK(t.dates().size() == 2);
  }

  TEST_CASE("descendants") {
    const EventTree t = build_tree(b1_spec());
    CHECK(descendants(t, t.root()).size() == 3);
    CHECK(descendants(t, t.index_of(testing::kU)) ==
          std::vector<NodeIndex>{t.index_of(testing::kU)});
    const EventTree b3 = build_tree(balanced_tree_spec(3, 2));
    CHECK(descendants(b3, 1).size() == 7);
    CHECK_THROWS_AS(b3.index_of(99), Error);
  }

  TEST_CASE("measurability at a stage") {
    const EventTree t = build_tree(b1_spec());
    AdaptedProcess x = testing::process(t, {{0, 0.0}, {1, 0.0}, {2, 1.0}});
    CHECK(is_measurable_at(t, x, 1));
    CHECK_FALSE(is_measurable_at(t, x, 0));
    AdaptedProcess c(t.size(), 5.0);
    CHECK(is_measurable_at(t, c, 0));
    try {
      is_measurable_at(t, c, 2);
      FAIL("stage 2 accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kStageOutOfRange);
    }
  }

  TEST_CASE("paths have one node per stage and probabilities sum to one") {
    for (int depth = 0; depth <= 4; ++depth) {
      for (int b = 1; b <= 3; ++b) {
        const EventTree t = build_tree(balanced_tree_spec(depth, b));
        double total = 0.0;
        for (NodeIndex leaf : t.leaves()) {
          total += t.path_prob(leaf);
          int stages = 0;
          for (NodeIndex v = leaf;; v = t.parent(v)) {
            ++stages;
            if (v == t.root()) break;
          }
          CHECK(stages == t.horizon() + 1);
        }
        CHECK(std::abs(total - 1.0) <= (depth + 1) * 1e-12);
      }
    }
  }
}

}  // namespace
}  // namespace dynkin
