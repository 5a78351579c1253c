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
#include <random>

#include "doctest.h"
#include "dynkin/error.hpp"
#include "dynkin/game.hpp"
#include "dynkin/io.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace dynkin {
namespace {

using testing::d2_game;

TEST_SUITE("game") {
  TEST_CASE("D2 payoffs and assessments") {
    const GameInstance g = d2_game();
    const StoppingTime zero = StoppingTime::at_root(g.schedule);
    const StoppingTime horizon = StoppingTime::at_horizon(g.schedule);
    CHECK(payoff_i1(g, zero, zero) == RandomVariable{1.0});
    CHECK(payoff_i2(g, zero, zero) == RandomVariable{2.0});
    CHECK(payoff_i1(g, horizon, zero) == RandomVariable{2.0});
    CHECK(payoff_i2(g, horizon, zero) == RandomVariable{1.0});
    CHECK(payoff_i1(g, horizon, horizon) == RandomVariable{0.0});
    CHECK(payoff_i2(g, horizon, horizon) == RandomVariable{0.0});

    CHECK(assess_j1(g, zero, zero) == 1.0);
    CHECK(assess_j1(g, horizon, zero) == 2.0);
    CHECK(assess_j1(g, zero, horizon) == 1.0);
    CHECK(assess_j1(g, horizon, horizon) == 0.0);
    CHECK(assess_j2(g, zero, horizon) == 2.0);
    CHECK(assess_j2(g, horizon, horizon) == 0.0);
  }

  TEST_CASE("D2 best responses") {
    const GameInstance g = d2_game();
    const StoppingTime zero = StoppingTime::at_root(g.schedule);
    const StoppingTime horizon = StoppingTime::at_horizon(g.schedule);
    const AdaptedProcess xi = best_response_payoff(g, Agent::kFirst, horizon);
    CHECK(xi[0] == 1.0);
    CHECK(xi[1] == 0.0);

    const BestResponse a = best_response(g, Agent::kFirst, horizon, horizon);
    CHECK(a.tilde == zero);
    CHECK(a.next == zero);
    CHECK(a.value0 == 1.0);

    const AdaptedProcess xi2 = best_response_payoff(g, Agent::kSecond, zero);
    CHECK(xi2[0] == 2.0);
    CHECK(xi2[1] == 2.0);
    const BestResponse b = best_response(g, Agent::kSecond, zero, horizon);
    CHECK(b.tilde == zero);
    CHECK(b.next == horizon);
    CHECK(b.value0 == 2.0);
  }

  TEST_CASE("D2 solve") {
    const GameInstance g = d2_game();
    const EquilibriumResult r = solve(g);
    const StoppingTime zero = StoppingTime::at_root(g.schedule);
    const StoppingTime horizon = StoppingTime::at_horizon(g.schedule);
    CHECK(r.converged);
    CHECK(r.tau1_star == zero);
    CHECK(r.tau2_star == horizon);
    CHECK(r.j1 == 1.0);
    CHECK(r.j2 == 2.0);
    CHECK(r.iterations <= 6);
    REQUIRE(r.trace.size() == 6);
    CHECK(r.at(1).tau == horizon);
    CHECK(r.at(2).tau == horizon);
    CHECK(r.at(3).tau == zero);
    CHECK(r.at(4).tau == horizon);
    CHECK(r.at(5).tau == zero);
    CHECK(r.at(6).tau == horizon);
    CHECK_FALSE(r.at(2).tilde.has_value());
    CHECK(r.at(3).value0 == 1.0);
  }

  TEST_CASE("stopping at once when the opponent stops at once") {
    for (int seed = 0; seed < 10; ++seed) {
      GenOptions o;
      o.seed = static_cast<std::uint64_t>(seed);
      o.depth = 3;
      const GameInstance g = gen_instance(o);
      const StoppingTime zero = StoppingTime::at_root(g.schedule);
      for (Agent a : {Agent::kFirst, Agent::kSecond}) {
        const BestResponse br = best_response(g, a, zero, StoppingTime::at_horizon(g.schedule));
        CHECK(br.tilde == zero);
        CHECK(br.value0 == g.y(a)[0]);
      }
    }
  }

  TEST_CASE("constant game") {
    const GameInstance g = testing::constant_game(2.5, 3);
    const EquilibriumResult r = solve(g);
    CHECK(r.converged);
    CHECK(std::abs(r.j1 - 2.5) <= 1e-12);
    CHECK(std::abs(r.j2 - 2.5) <= 1e-12);
    CHECK(r.tau1_star == StoppingTime::at_root(g.schedule));
  }

  TEST_CASE("payoffs and assessments agree with the reference split") {
    for (int seed = 0; seed < 12; ++seed) {
      GenOptions o;
      o.seed = 40 + static_cast<std::uint64_t>(seed);
      o.depth = 1 + seed % 3;
      o.branching = 2 + seed % 2;
      o.agent1 = parse_operator_choice(seed % 2 == 0 ? "entropic:2" : "multiprior-inf");
      o.agent2 = parse_operator_choice(seed % 3 == 0 ? "linear" : "entropic:0.5");
      const GameInstance g = gen_instance(o);
      const auto theta = enumerate_theta(g.schedule);
      if (theta.size() > 30) continue;
      for (const StoppingTime& t1 : theta) {
        for (const StoppingTime& t2 : theta) {
          CHECK(payoff_i1(g, t1, t2) == testing::payoff_oracle(g, Agent::kFirst, t1, t2));
          CHECK(payoff_i2(g, t1, t2) == testing::payoff_oracle(g, Agent::kSecond, t1, t2));
          CHECK(std::abs(assess_j1(g, t1, t2) -
                         testing::assess_oracle(g, Agent::kFirst, t1, t2)) <= 1e-9);
          CHECK(std::abs(assess_j2(g, t1, t2) -
                         testing::assess_oracle(g, Agent::kSecond, t1, t2)) <= 1e-9);
        }
      }
    }
  }

  TEST_CASE("the next iterate follows the update rule leaf by leaf") {
    std::mt19937_64 rng(8);
    for (int seed = 0; seed < 10; ++seed) {
      GenOptions o;
      o.seed = 70 + static_cast<std::uint64_t>(seed);
      o.depth = 3;
      o.branching = 2;
      const GameInstance g = gen_instance(o);
      const EventTree& t = g.tree();
      for (int trial = 0; trial < 10; ++trial) {
        const StoppingTime opp = random_stopping_time(g.schedule, rng);
        const StoppingTime prev = random_stopping_time(g.schedule, rng);
        const BestResponse br = best_response(g, Agent::kFirst, opp, prev);
        const StoppingTime lower = meet(br.tilde, prev);
        for (std::size_t l = 0; l < t.leaf_count(); ++l) {
          const NodeIndex expected = lower.stage_for_leaf(l) < opp.stage_for_leaf(l)
                                         ? lower.stop_for_leaf(l)
                                         : prev.stop_for_leaf(l);
          CHECK(br.next.stop_for_leaf(l) == expected);
        }
        CHECK(leq(br.tilde, opp));
      }
    }
  }

  TEST_CASE("validation") {
    GameInstance g = d2_game();
    g.x1[0] = 3.0;
    try {
      validate(g);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kValidationError);
      CHECK(e.validation_kind() == ValidationKind::kA1);
      CHECK(e.nodes() == std::vector<std::int64_t>{0});
    }
    g = d2_game();
    g.y2[1] = 1.0;
    try {
      validate(g);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.validation_kind() == ValidationKind::kA2);
      CHECK(e.nodes() == std::vector<std::int64_t>{1});
    }
    g = d2_game();
    g.x2 = AdaptedProcess(2);
    try {
      validate(g);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kMissingPayoff);
    }
  }

  TEST_CASE("iteration budget") {
    const GameInstance g = d2_game();
    CHECK(g.default_max_iter() == 8);
    try {
      solve(g, 2);
      FAIL("converged within two steps");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kNoConvergence);
    }
    CHECK(solve(g, 4).converged);
  }

  TEST_CASE("strategies from another schedule are rejected") {
    const GameInstance g = d2_game();
    const GameInstance h = d2_game();
    try {
      assess_j1(g, StoppingTime::at_root(h.schedule), StoppingTime::at_root(g.schedule));
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kSchemaMismatch);
    }
  }
}

}  // namespace
}  // namespace dynkin
