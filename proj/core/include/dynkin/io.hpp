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

// JSON instances, the random instance generator and machine-readable reports.
//
// Instance layout:
//   tree      {nodes: [{id, stage, children: [{id, prob}]}], dates: [...]}
//   schedule  "all-stages" or [[node ids of theta_0], ..., [theta_K]]
//   operators {agent1, agent2}: {kind, gamma?, direction?, priors?}
//   payoffs   {X1, Y1, X2, Y2}: {"<node id>": number}
//   config    {tol_eq, max_iter, enum_limit}

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dynkin/evaluation.hpp"
#include "dynkin/game.hpp"
#include "dynkin/verify.hpp"

namespace dynkin {

using Json = nlohmann::json;

// Throws ParseError for malformed JSON or missing keys, ValidationError with
// the offending node ids for structural and payoff violations.
GameInstance parse_instance(const Json& j);
GameInstance parse_instance_text(std::string_view text);
GameInstance load_instance(const std::string& path);

// Throws ValidationError{operator} for custom operators.
Json instance_to_json(const GameInstance& g);
Json operator_to_json(const EventTree& tree, const EvaluationOperator& op);
EvaluationOperator operator_from_json(const EventTree& tree, const Json& j);

// Two-space indented JSON with a trailing newline; key order is sorted so
// equal values always produce equal bytes.
std::string dump(const Json& j);
void write_file(const std::string& path, const std::string& text);
std::string read_file(const std::string& path);

// Operator names used by the generator and the command line: "linear",
// "entropic:<gamma>", "multiprior-inf", "multiprior-sup".
struct OperatorChoice {
  OperatorKind kind = OperatorKind::kLinear;
  double gamma = 1.0;
  Direction direction = Direction::kInf;
};
OperatorChoice parse_operator_choice(const std::string& name);
std::string to_string(const OperatorChoice& choice);
// Multiprior choices get the tree probabilities plus two priors drawn from
// integer weights 1..4 per internal node, seeded by `seed`.
EvaluationOperator make_operator(const EventTree& tree, const OperatorChoice& choice,
                                 std::uint64_t seed);

enum class ScheduleMode { kAllStages, kRandom };

struct GenOptions {
  std::uint64_t seed = 1;
  int depth = 2;      // 0..8
  int branching = 2;  // 1..4
  OperatorChoice agent1;
  OperatorChoice agent2;
  ScheduleMode schedule = ScheduleMode::kAllStages;
};

// Full tree with integer-weight transition probabilities, payoffs on the
// grid k/8 in [-8, 8] repaired to Y = max(X, Y) and Y = X at the leaves.
// Multiprior operators get the tree probabilities plus two random priors per
// node. Throws BadDimensions outside the size bounds.
GameInstance gen_instance(const GenOptions& options);

Json stopping_time_to_json(const StoppingTime& tau);
StoppingTime stopping_time_from_json(const SchedulePtr& schedule, const Json& j);

Json equilibrium_to_json(const EquilibriumResult& result);
// Rebuilds the result stored in a report against the given instance.
EquilibriumResult equilibrium_from_json(const GameInstance& g, const Json& report);

Json nash_to_json(const NashReport& report);
Json invariants_to_json(const InvariantReport& report);
Json axioms_to_json(const AxiomReport& report);

// {instance, equilibrium, trace}
Json solve_report(const GameInstance& g, const EquilibriumResult& result);
// solve_report plus {nash, invariants, passed}
Json verify_report(const GameInstance& g, const EquilibriumResult& result, const NashReport& nash,
                   const InvariantReport& invariants);

}  // namespace dynkin
