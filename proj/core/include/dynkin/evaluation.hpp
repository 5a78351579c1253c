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

// Non-linear evaluation operators rho_{S,tau} generated by one-step
// aggregators g_v: (values at the children of v) -> value at v.
//
// Each built-in aggregator is constant-preserving, monotone and local, which
// on a tree gives admissibility, knowledge preservation, monotonicity,
// time-consistency and both zero-one laws for the backward recursion.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynkin/lattice.hpp"
#include "dynkin/strategy.hpp"

namespace dynkin {

enum class OperatorKind { kLinear, kEntropic, kMultiprior, kCustom };
enum class Direction { kInf, kSup };

std::string to_string(OperatorKind kind);
std::string to_string(Direction direction);

using Aggregator = std::function<double(NodeIndex node, std::span<const double> children)>;
// priors[v] = list of probability vectors over the children of v.
using PriorSets = std::vector<std::vector<std::vector<double>>>;

class EvaluationOperator {
 public:
  OperatorKind kind() const noexcept { return kind_; }
  double gamma() const noexcept { return gamma_; }
  Direction direction() const noexcept { return direction_; }
  const PriorSets& priors() const noexcept { return priors_; }
  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return weights_.size(); }

  double aggregate(NodeIndex v, std::span<const double> children) const;

 private:
  friend EvaluationOperator make_linear(const EventTree&);
  friend EvaluationOperator make_entropic(const EventTree&, double);
  friend EvaluationOperator make_multiprior(const EventTree&, PriorSets, Direction);
  friend EvaluationOperator make_custom(const EventTree&, Aggregator, std::string);

  OperatorKind kind_ = OperatorKind::kLinear;
  double gamma_ = 0.0;
  Direction direction_ = Direction::kInf;
  std::vector<std::vector<double>> weights_;  // transition probabilities per node
  PriorSets priors_;
  Aggregator custom_;
  std::string name_;
};

// Conditional expectation under the tree's probabilities.
EvaluationOperator make_linear(const EventTree& tree);
// (1/gamma) ln E[exp(gamma x)]. Throws BadGamma for gamma == 0 or non-finite.
EvaluationOperator make_entropic(const EventTree& tree, double gamma);
// inf (or sup) over the node's priors of the prior-weighted mean. Leaves take
// no priors; an internal node with an empty slot gets the tree probabilities.
// Throws BadPrior for wrong lengths, negative entries or sums away from 1.
EvaluationOperator make_multiprior(const EventTree& tree, PriorSets priors,
                                   Direction direction = Direction::kInf);
// Arbitrary aggregator; no properties are guaranteed.
EvaluationOperator make_custom(const EventTree& tree, Aggregator aggregator,
                               std::string name = "custom");

// Backward recursion from tau to S. `eta` is read at tau's stop nodes; the
// result holds rho_{S,tau}[eta] at S's stop nodes and NaN elsewhere.
// Throws OrderViolation unless S <= tau, MissingValues when eta is absent at
// a stop node of tau.
AdaptedProcess rho(const EvaluationOperator& op, const StoppingTime& s,
                   const StoppingTime& tau, const AdaptedProcess& eta);

// rho_{0,tau}[eta] as a scalar.
double rho_at_root(const EvaluationOperator& op, const StoppingTime& tau,
                   const AdaptedProcess& eta);

// Values at every node on or above tau's cut (NaN below); the workhorse
// behind rho. `out` is resized as needed so sweeps can reuse storage.
void backward_values(const EvaluationOperator& op, const StoppingTime& tau,
                     const AdaptedProcess& eta, std::vector<double>& out);

inline constexpr double kAxiomTolerance = 1e-9;

struct Counterexample {
  int trial = 0;
  NodeId node = 0;
  std::vector<double> inputs;
  std::vector<double> outputs;
  double violation = 0.0;
  std::string detail;
};

struct AxiomResult {
  std::string name;
  int checks = 0;
  int failures = 0;
  std::optional<Counterexample> counterexample;  // first failure
  bool passed() const { return failures == 0; }
};

struct AxiomReport {
  std::string operator_name;
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<AxiomResult> axioms;

  bool passed() const;
  const AxiomResult* find(const std::string& name) const;
};

// Randomized conformance harness: admissibility, knowledge preservation,
// monotonicity, consistency, generalized and usual zero-one laws, plus a
// Lipschitz continuity probe. Failures become report entries carrying the
// trial index, node and the offending inputs/outputs.
AxiomReport axiom_check(const EvaluationOperator& op, const SchedulePtr& schedule, int trials,
                        std::uint64_t seed, double tol = kAxiomTolerance);

}  // namespace dynkin
