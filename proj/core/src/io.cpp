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

#include "dynkin/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <utility>

#include "dynkin/error.hpp"

namespace dynkin {
namespace {

[[noreturn]] void parse_error(const std::string& message) {
  throw Error(ErrorCode::kParseError, message);
}

// Structural errors from the core are re-raised as validation errors of the
// given kind, keeping the node ids.
template <typename F>
auto as_validation(ValidationKind kind, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kValidationError || e.code() == ErrorCode::kParseError) throw;
    throw Error(ErrorCode::kValidationError, e.what(), e.nodes(), kind);
  }
}

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing key '") + key + "'");
  return j.at(key);
}

template <typename T>
T get(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const Json::exception& e) {
    parse_error(std::string(what) + ": " + e.what());
  }
}

NodeId parse_id(const std::string& key) {
  std::size_t used = 0;
  NodeId id = 0;
  try {
    id = std::stoll(key, &used);
  } catch (const std::exception&) {
    parse_error("node id '" + key + "' is not an integer");
  }
  if (used != key.size()) parse_error("node id '" + key + "' is not an integer");
  return id;
}

TreeSpec tree_spec_from_json(const Json& j) {
  TreeSpec spec;
  const Json& nodes = require(j, "nodes");
  if (!nodes.is_array()) parse_error("tree.nodes must be an array");
  for (const Json& n : nodes) {
    NodeSpec node;
    node.id = get<NodeId>(require(n, "id"), "node id");
    node.stage = get<int>(require(n, "stage"), "node stage");
    if (n.contains("children")) {
      for (const Json& c : n.at("children")) {
        node.children.push_back(
            {get<NodeId>(require(c, "id"), "child id"), get<double>(require(c, "prob"), "prob")});
      }
    }
    spec.nodes.push_back(std::move(node));
  }
  if (j.contains("dates")) spec.dates = get<std::vector<double>>(j.at("dates"), "dates");
  return spec;
}

Json tree_to_json(const EventTree& t) {
  Json nodes = Json::array();
  for (NodeIndex v = 0; v < t.size(); ++v) {
    Json children = Json::array();
    const auto probs = t.child_probs(v);
    for (std::size_t k = 0; k < t.child_count(v); ++k) {
      children.push_back({{"id", t.id(t.first_child(v) + k)}, {"prob", probs[k]}});
    }
    nodes.push_back({{"id", t.id(v)}, {"stage", t.stage(v)}, {"children", std::move(children)}});
  }
  const auto dates = t.dates();
  return {{"nodes", std::move(nodes)}, {"dates", std::vector<double>(dates.begin(), dates.end())}};
}

std::vector<NodeIndex> indices_of(const EventTree& t, const Json& ids) {
  if (!ids.is_array()) parse_error("node set must be an array of ids");
  std::vector<NodeIndex> out;
  for (const Json& id : ids) out.push_back(t.index_of(get<NodeId>(id, "node id")));
  return out;
}

SchedulePtr schedule_from_json(const TreePtr& tree, const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "all-stages") parse_error("unknown schedule '" + j.dump() + "'");
    return ExerciseSchedule::all_stages(tree);
  }
  if (!j.is_array()) parse_error("schedule must be \"all-stages\" or a list of node sets");
  std::vector<std::vector<NodeIndex>> cuts;
  for (const Json& cut : j) cuts.push_back(indices_of(*tree, cut));
  return ExerciseSchedule::from_cuts(tree, std::move(cuts));
}

Json schedule_to_json(const ExerciseSchedule& s) {
  if (s.is_all_stages()) return "all-stages";
  Json cuts = Json::array();
  for (std::size_t k = 0; k <= s.K(); ++k) {
    Json cut = Json::array();
    for (NodeIndex v : s.theta(k)) cut.push_back(s.tree().id(v));
    cuts.push_back(std::move(cut));
  }
  return cuts;
}

AdaptedProcess process_from_json(const EventTree& t, const Json& j, const char* name) {
  if (!j.is_object()) parse_error(std::string("payoff ") + name + " must map node ids to numbers");
  AdaptedProcess p(t.size());
  for (const auto& [key, value] : j.items()) {
    const NodeId id = parse_id(key);
    if (!t.contains(id)) {
      throw Error(ErrorCode::kValidationError,
                  std::string("payoff ") + name + " names unknown node " + key, {id},
                  ValidationKind::kTree);
    }
    p[t.index_of(id)] = get<double>(value, name);
  }
  return p;
}

Json process_to_json(const EventTree& t, const AdaptedProcess& p) {
  Json out = Json::object();
  for (NodeIndex v = 0; v < t.size(); ++v) {
    if (p.has(v)) out[std::to_string(t.id(v))] = p[v];
  }
  return out;
}

std::uint64_t uniform(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

std::vector<double> random_weights(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (double& x : w) {
    x = static_cast<double>(1 + uniform(rng, 4));
    sum += x;
  }
  for (double& x : w) x /= sum;
  return w;
}

EvaluationOperator make_choice(const EventTree& tree, const OperatorChoice& c,
                               std::mt19937_64& rng) {
  switch (c.kind) {
    case OperatorKind::kLinear:
      return make_linear(tree);
    case OperatorKind::kEntropic:
      return make_entropic(tree, c.gamma);
    case OperatorKind::kMultiprior: {
      PriorSets priors(tree.size());
      for (NodeIndex v = 0; v < tree.size(); ++v) {
        if (tree.is_leaf(v)) continue;
        const auto p = tree.child_probs(v);
        priors[v].emplace_back(p.begin(), p.end());
        for (int k = 0; k < 2; ++k) priors[v].push_back(random_weights(rng, tree.child_count(v)));
      }
      return make_multiprior(tree, std::move(priors), c.direction);
    }
    case OperatorKind::kCustom:
      break;
  }
  throw Error(ErrorCode::kValidationError, "custom operators cannot be generated", {},
              ValidationKind::kOperator);
}

// Random cut lying pathwise at or after `previous` (given per node as
// "an ancestor-or-self is in the previous cut").
std::vector<NodeIndex> random_cut_after(const EventTree& t, const std::vector<bool>& past,
                                        std::mt19937_64& rng) {
  std::vector<NodeIndex> cut;
  std::vector<NodeIndex> stack{t.root()};
  while (!stack.empty()) {
    const NodeIndex v = stack.back();
    stack.pop_back();
    if (t.is_leaf(v) || (past[v] && uniform(rng, 2) == 0)) {
      cut.push_back(v);
      continue;
    }
    for (std::size_t k = t.child_count(v); k-- > 0;) stack.push_back(t.first_child(v) + k);
  }
  std::sort(cut.begin(), cut.end());
  return cut;
}

std::vector<bool> at_or_below(const EventTree& t, const std::vector<NodeIndex>& cut) {
  std::vector<bool> mark(t.size(), false);
  for (NodeIndex v : cut) mark[v] = true;
  for (NodeIndex v = 1; v < t.size(); ++v) mark[v] = mark[v] || mark[t.parent(v)];
  return mark;
}

Json counterexample_to_json(const Counterexample& c) {
  return {{"trial", c.trial},     {"node", c.node},           {"inputs", c.inputs},
          {"outputs", c.outputs}, {"violation", c.violation}, {"detail", c.detail}};
}

}  // namespace

// ---------------------------------------------------------------------------

EvaluationOperator operator_from_json(const EventTree& tree, const Json& j) {
  const std::string kind = get<std::string>(require(j, "kind"), "operator kind");
  return as_validation(ValidationKind::kOperator, [&] {
    if (kind == "linear") return make_linear(tree);
    if (kind == "entropic") return make_entropic(tree, get<double>(require(j, "gamma"), "gamma"));
    if (kind == "multiprior") {
      Direction dir = Direction::kInf;
      if (j.contains("direction")) {
        const std::string d = get<std::string>(j.at("direction"), "direction");
        if (d == "sup") {
          dir = Direction::kSup;
        } else if (d != "inf") {
          parse_error("direction must be inf or sup");
        }
      }
      PriorSets priors(tree.size());
      if (j.contains("priors")) {
        for (const auto& [key, sets] : j.at("priors").items()) {
          const NodeId id = parse_id(key);
          if (!tree.contains(id)) {
            throw Error(ErrorCode::kValidationError, "priors name unknown node " + key, {id},
                        ValidationKind::kOperator);
          }
          priors[tree.index_of(id)] =
              get<std::vector<std::vector<double>>>(sets, "priors");
        }
      }
      return make_multiprior(tree, std::move(priors), dir);
    }
    throw Error(ErrorCode::kValidationError, "unknown operator kind '" + kind + "'", {},
                ValidationKind::kOperator);
  });
}

Json operator_to_json(const EventTree& tree, const EvaluationOperator& op) {
  switch (op.kind()) {
    case OperatorKind::kLinear:
      return {{"kind", "linear"}};
    case OperatorKind::kEntropic:
      return {{"kind", "entropic"}, {"gamma", op.gamma()}};
    case OperatorKind::kMultiprior: {
      Json priors = Json::object();
      for (NodeIndex v = 0; v < op.priors().size(); ++v) {
        if (!op.priors()[v].empty()) priors[std::to_string(tree.id(v))] = op.priors()[v];
      }
      return {{"kind", "multiprior"}, {"direction", to_string(op.direction())}, {"priors", priors}};
    }
    case OperatorKind::kCustom:
      break;
  }
  throw Error(ErrorCode::kValidationError, "custom operator '" + op.name() + "' has no file form",
              {}, ValidationKind::kOperator);
}

GameInstance parse_instance(const Json& j) {
  if (!j.is_object()) parse_error("instance must be a JSON object");
  const TreeSpec spec = tree_spec_from_json(require(j, "tree"));
  auto tree = as_validation(ValidationKind::kTree,
                            [&] { return std::make_shared<const EventTree>(build_tree(spec)); });
  SchedulePtr schedule = as_validation(
      ValidationKind::kSchedule, [&] { return schedule_from_json(tree, require(j, "schedule")); });

  const Json& ops = require(j, "operators");
  const Json& pay = require(j, "payoffs");
  GameConfig config;
  if (j.contains("config")) {
    const Json& c = j.at("config");
    if (c.contains("tol_eq")) config.tol_eq = get<double>(c.at("tol_eq"), "tol_eq");
    if (c.contains("max_iter")) config.max_iter = get<std::size_t>(c.at("max_iter"), "max_iter");
    if (c.contains("enum_limit")) {
      config.enum_limit = get<std::uint64_t>(c.at("enum_limit"), "enum_limit");
    }
  }
  GameInstance g{schedule,
                 operator_from_json(*tree, require(ops, "agent1")),
                 operator_from_json(*tree, require(ops, "agent2")),
                 process_from_json(*tree, require(pay, "X1"), "X1"),
                 process_from_json(*tree, require(pay, "Y1"), "Y1"),
                 process_from_json(*tree, require(pay, "X2"), "X2"),
                 process_from_json(*tree, require(pay, "Y2"), "Y2"),
                 config};
  validate(g);
  return g;
}

GameInstance parse_instance_text(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    parse_error(e.what());
  }
  return parse_instance(j);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kParseError, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::kParseError, "write to '" + path + "' failed");
}

GameInstance load_instance(const std::string& path) { return parse_instance_text(read_file(path)); }

Json instance_to_json(const GameInstance& g) {
  const EventTree& t = g.tree();
  auto op_json = [&](const EvaluationOperator& op) { return operator_to_json(t, op); };
  return {{"tree", tree_to_json(t)},
          {"schedule", schedule_to_json(*g.schedule)},
          {"operators", {{"agent1", op_json(g.rho1)}, {"agent2", op_json(g.rho2)}}},
          {"payoffs",
           {{"X1", process_to_json(t, g.x1)},
            {"Y1", process_to_json(t, g.y1)},
            {"X2", process_to_json(t, g.x2)},
            {"Y2", process_to_json(t, g.y2)}}},
          {"config",
           {{"tol_eq", g.config.tol_eq},
            {"max_iter", g.config.max_iter},
            {"enum_limit", g.config.enum_limit}}}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

OperatorChoice parse_operator_choice(const std::string& name) {
  OperatorChoice c;
  if (name == "linear") return c;
  if (name == "multiprior-inf" || name == "multiprior") {
    c.kind = OperatorKind::kMultiprior;
    return c;
  }
  if (name == "multiprior-sup") {
    c.kind = OperatorKind::kMultiprior;
    c.direction = Direction::kSup;
    return c;
  }
  if (name == "entropic" || name.rfind("entropic:", 0) == 0) {
    c.kind = OperatorKind::kEntropic;
    if (name.size() > 9) {
      std::size_t used = 0;
      try {
        c.gamma = std::stod(name.substr(9), &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != name.size() - 9) parse_error("bad gamma in '" + name + "'");
    }
    return c;
  }
  parse_error("unknown operator '" + name + "'");
}

std::string to_string(const OperatorChoice& c) {
  switch (c.kind) {
    case OperatorKind::kEntropic: {
      std::ostringstream out;
      out << "entropic:" << c.gamma;
      return out.str();
    }
    case OperatorKind::kMultiprior:
      return "multiprior-" + to_string(c.direction);
    default:
      return "linear";
  }
}

EvaluationOperator make_operator(const EventTree& tree, const OperatorChoice& choice,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return make_choice(tree, choice, rng);
}

GameInstance gen_instance(const GenOptions& o) {
  if (o.depth < 0 || o.depth > 8 || o.branching < 1 || o.branching > 4) {
    throw Error(ErrorCode::kBadDimensions,
                "depth must lie in [0, 8] and branching in [1, 4], got depth " +
                    std::to_string(o.depth) + ", branching " + std::to_string(o.branching));
  }
  std::mt19937_64 rng(o.seed);
  TreeSpec spec = balanced_tree_spec(o.depth, o.branching);
  for (NodeSpec& n : spec.nodes) {
    const auto w = random_weights(rng, n.children.size());
    for (std::size_t k = 0; k < n.children.size(); ++k) n.children[k].prob = w[k];
  }
  auto tree = std::make_shared<const EventTree>(build_tree(spec));
  const EventTree& t = *tree;

  SchedulePtr schedule;
  if (o.schedule == ScheduleMode::kRandom && o.depth >= 2) {
    std::vector<std::vector<NodeIndex>> cuts{{t.root()}};
    for (int k = 1; k < o.depth; ++k) {
      cuts.push_back(random_cut_after(t, at_or_below(t, cuts.back()), rng));
    }
    std::vector<NodeIndex> leaves(t.leaves().begin(), t.leaves().end());
    cuts.push_back(std::move(leaves));
    schedule = ExerciseSchedule::from_cuts(tree, std::move(cuts));
  } else {
    schedule = ExerciseSchedule::all_stages(tree);
  }

  auto grid = [&] { return static_cast<double>(static_cast<int>(uniform(rng, 129)) - 64) / 8.0; };
  AdaptedProcess x1(t.size()), y1(t.size()), x2(t.size()), y2(t.size());
  for (NodeIndex v = 0; v < t.size(); ++v) {
    x1[v] = grid();
    y1[v] = grid();
    x2[v] = grid();
    y2[v] = grid();
    if (t.is_leaf(v)) {
      y1[v] = x1[v];
      y2[v] = x2[v];
    } else {
      y1[v] = std::max(x1[v], y1[v]);
      y2[v] = std::max(x2[v], y2[v]);
    }
  }
  EvaluationOperator rho1 = make_choice(t, o.agent1, rng);
  EvaluationOperator rho2 = make_choice(t, o.agent2, rng);
  GameInstance g{schedule, std::move(rho1), std::move(rho2), x1, y1, x2, y2, GameConfig{}};
  validate(g);
  return g;
}

// ---------------------------------------------------------------------------

Json stopping_time_to_json(const StoppingTime& tau) { return tau.stop_ids(); }

StoppingTime stopping_time_from_json(const SchedulePtr& schedule, const Json& j) {
  return StoppingTime(schedule, indices_of(schedule->tree(), j));
}

Json equilibrium_to_json(const EquilibriumResult& r) {
  Json trace = Json::array();
  for (const TraceEntry& e : r.trace) {
    Json entry = {{"n", e.n}, {"tau", stopping_time_to_json(e.tau)}};
    if (e.tilde) entry["tilde"] = stopping_time_to_json(*e.tilde);
    if (e.value0) entry["V0"] = *e.value0;
    trace.push_back(std::move(entry));
  }
  return {{"tau1_star", stopping_time_to_json(r.tau1_star)},
          {"tau2_star", stopping_time_to_json(r.tau2_star)},
          {"J1", r.j1},
          {"J2", r.j2},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"trace", std::move(trace)}};
}

EquilibriumResult equilibrium_from_json(const GameInstance& g, const Json& report) {
  const Json& eq = report.contains("equilibrium") ? report.at("equilibrium") : report;
  const SchedulePtr& s = g.schedule;
  try {
    std::vector<TraceEntry> trace;
    for (const Json& e : require(eq, "trace")) {
      TraceEntry entry{get<int>(require(e, "n"), "n"), std::nullopt,
                       stopping_time_from_json(s, require(e, "tau")), std::nullopt};
      if (e.contains("tilde")) entry.tilde = stopping_time_from_json(s, e.at("tilde"));
      if (e.contains("V0")) entry.value0 = get<double>(e.at("V0"), "V0");
      trace.push_back(std::move(entry));
    }
    return {stopping_time_from_json(s, require(eq, "tau1_star")),
            stopping_time_from_json(s, require(eq, "tau2_star")),
            get<double>(require(eq, "J1"), "J1"),
            get<double>(require(eq, "J2"), "J2"),
            std::move(trace),
            get<std::size_t>(require(eq, "iterations"), "iterations"),
            get<bool>(require(eq, "converged"), "converged")};
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParseError) throw;
    throw Error(ErrorCode::kParseError, std::string("equilibrium does not fit the instance: ") +
                                            e.what(), e.nodes());
  }
}

Json nash_to_json(const NashReport& r) {
  auto deviation = [](const Deviation& d) {
    Json j = {{"value", d.value}, {"gain", d.gain}};
    j["strategy"] = d.strategy ? stopping_time_to_json(*d.strategy) : Json();
    return j;
  };
  return {{"passed", r.passed},
          {"J1", r.j1},
          {"J2", r.j2},
          {"strategies", r.strategies},
          {"agent1", deviation(r.agent1)},
          {"agent2", deviation(r.agent2)}};
}

Json invariants_to_json(const InvariantReport& r) {
  Json checks = Json::array();
  for (const CheckItem& c : r.items) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"evaluated", c.evaluated},
                      {"counterexample", c.counterexample}});
  }
  return {{"passed", r.passed()},
          {"deviations_exhaustive", r.deviations_exhaustive},
          {"checks", std::move(checks)}};
}

Json axioms_to_json(const AxiomReport& r) {
  Json axioms = Json::array();
  for (const AxiomResult& a : r.axioms) {
    Json j = {{"name", a.name},
              {"checks", a.checks},
              {"failures", a.failures},
              {"passed", a.passed()}};
    j["counterexample"] = a.counterexample ? counterexample_to_json(*a.counterexample) : Json();
    axioms.push_back(std::move(j));
  }
  return {{"operator", r.operator_name},
          {"seed", r.seed},
          {"trials", r.trials},
          {"passed", r.passed()},
          {"axioms", std::move(axioms)}};
}

Json solve_report(const GameInstance& g, const EquilibriumResult& result) {
  return {{"instance", instance_to_json(g)}, {"equilibrium", equilibrium_to_json(result)}};
}

Json verify_report(const GameInstance& g, const EquilibriumResult& result, const NashReport& nash,
                   const InvariantReport& invariants) {
  Json j = solve_report(g, result);
  j["nash"] = nash_to_json(nash);
  j["invariants"] = invariants_to_json(invariants);
  j["passed"] = nash.passed && invariants.passed() && result.converged;
  return j;
}

}  // namespace dynkin
