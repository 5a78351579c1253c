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

#include "dynkin/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "dynkin/error.hpp"

namespace dynkin {

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::kLinear: return "linear";
    case OperatorKind::kEntropic: return "entropic";
    case OperatorKind::kMultiprior: return "multiprior";
    case OperatorKind::kCustom: return "custom";
  }
  return "unknown";
}

std::string to_string(Direction direction) {
  return direction == Direction::kInf ? "inf" : "sup";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::vector<double>> tree_weights(const EventTree& tree) {
  std::vector<std::vector<double>> w(tree.size());
  for (NodeIndex v = 0; v < tree.size(); ++v) {
    auto p = tree.child_probs(v);
    w[v].assign(p.begin(), p.end());
  }
  return w;
}

double weighted_mean(std::span<const double> weights, std::span<const double> x) {
  double sum = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) sum += weights[j] * x[j];
  return sum;
}

}  // namespace

double EvaluationOperator::aggregate(NodeIndex v, std::span<const double> children) const {
  switch (kind_) {
    case OperatorKind::kLinear:
      return weighted_mean(weights_[v], children);
    case OperatorKind::kEntropic: {
      // Shift by the extreme value of gamma * x so the exponent is <= 0.
      double shift = children[0];
      for (double x : children) shift = gamma_ > 0 ? std::max(shift, x) : std::min(shift, x);
      double sum = 0.0;
      const auto& w = weights_[v];
      for (std::size_t j = 0; j < children.size(); ++j) {
        sum += w[j] * std::exp(gamma_ * (children[j] - shift));
      }
      return shift + std::log(sum) / gamma_;
    }
    case OperatorKind::kMultiprior: {
      const auto& set = priors_[v];
      double best = weighted_mean(set.front(), children);
      for (std::size_t q = 1; q < set.size(); ++q) {
        const double m = weighted_mean(set[q], children);
        best = direction_ == Direction::kInf ? std::min(best, m) : std::max(best, m);
      }
      return best;
    }
    case OperatorKind::kCustom:
      return custom_(v, children);
  }
  return kNaN;
}

EvaluationOperator make_linear(const EventTree& tree) {
  EvaluationOperator op;
  op.kind_ = OperatorKind::kLinear;
  op.weights_ = tree_weights(tree);
  op.name_ = "linear";
  return op;
}

EvaluationOperator make_entropic(const EventTree& tree, double gamma) {
  if (gamma == 0.0 || !std::isfinite(gamma)) {
    throw Error(ErrorCode::kBadGamma, "entropic parameter must be finite and non-zero");
  }
  EvaluationOperator op;
  op.kind_ = OperatorKind::kEntropic;
  op.gamma_ = gamma;
  op.weights_ = tree_weights(tree);
  std::ostringstream name;
  name << "entropic(" << gamma << ")";
  op.name_ = name.str();
  return op;
}

EvaluationOperator make_multiprior(const EventTree& tree, PriorSets priors, Direction direction) {
  if (priors.size() > tree.size()) {
    throw Error(ErrorCode::kBadPrior, "more prior sets than nodes");
  }
  priors.resize(tree.size());
  for (NodeIndex v = 0; v < tree.size(); ++v) {
    auto& set = priors[v];
    const std::size_t kids = tree.child_count(v);
    if (kids == 0) {
      if (!set.empty()) {
        throw Error(ErrorCode::kBadPrior, "leaf " + std::to_string(tree.id(v)) + " has priors",
                    {tree.id(v)});
      }
      continue;
    }
    if (set.empty()) {
      auto p = tree.child_probs(v);
      set.emplace_back(p.begin(), p.end());
    }
    for (const auto& q : set) {
      if (q.size() != kids) {
        throw Error(ErrorCode::kBadPrior,
                    "prior length does not match the children of node " +
                        std::to_string(tree.id(v)),
                    {tree.id(v)});
      }
      double sum = 0.0;
      for (double x : q) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
          throw Error(ErrorCode::kBadPrior,
                      "negative prior weight at node " + std::to_string(tree.id(v)),
                      {tree.id(v)});
        }
        sum += x;
      }
      if (std::abs(sum - 1.0) > kProbabilityTolerance) {
        throw Error(ErrorCode::kBadPrior,
                    "prior does not sum to 1 at node " + std::to_string(tree.id(v)),
                    {tree.id(v)});
      }
    }
  }
  EvaluationOperator op;
  op.kind_ = OperatorKind::kMultiprior;
  op.direction_ = direction;
  op.weights_ = tree_weights(tree);
  op.priors_ = std::move(priors);
  op.name_ = "multiprior-" + to_string(direction);
  return op;
}

EvaluationOperator make_custom(const EventTree& tree, Aggregator aggregator, std::string name) {
  EvaluationOperator op;
  op.kind_ = OperatorKind::kCustom;
  op.weights_ = tree_weights(tree);
  op.custom_ = std::move(aggregator);
  op.name_ = std::move(name);
  return op;
}

// ---------------------------------------------------------------------------

void backward_values(const EvaluationOperator& op, const StoppingTime& tau,
                     const AdaptedProcess& eta, std::vector<double>& out) {
  const EventTree& t = tau.tree();
  if (op.size() != t.size() || eta.size() != t.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "operator, values and stopping time disagree on the tree");
  }
  out.assign(t.size(), kNaN);
  for (NodeIndex v = t.size(); v-- > 0;) {
    const int cut_stage = t.stage(tau.stop_for_leaf(t.leaf_begin(v)));
    if (cut_stage == t.stage(v)) {
      if (!eta.has(v)) {
        throw Error(ErrorCode::kMissingValues, "no value at stop node " + std::to_string(t.id(v)),
                    {t.id(v)});
      }
      out[v] = eta[v];
    } else if (cut_stage > t.stage(v)) {
      out[v] = op.aggregate(v, {out.data() + t.first_child(v), t.child_count(v)});
    }
  }
}

AdaptedProcess rho(const EvaluationOperator& op, const StoppingTime& s, const StoppingTime& tau,
                   const AdaptedProcess& eta) {
  if (!leq(s, tau)) throw Error(ErrorCode::kOrderViolation, "S is not below tau");
  std::vector<double> values;
  backward_values(op, tau, eta, values);
  AdaptedProcess out(tau.tree().size());
  for (NodeIndex v : s.stop_nodes()) out[v] = values[v];
  return out;
}

double rho_at_root(const EvaluationOperator& op, const StoppingTime& tau,
                   const AdaptedProcess& eta) {
  std::vector<double> values;
  backward_values(op, tau, eta, values);
  return values[tau.tree().root()];
}

// ---------------------------------------------------------------------------
// Axiom harness

bool AxiomReport::passed() const {
  return std::all_of(axioms.begin(), axioms.end(), [](const AxiomResult& a) { return a.passed(); });
}

const AxiomResult* AxiomReport::find(const std::string& name) const {
  for (const auto& a : axioms) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

namespace {

class Harness {
 public:
  Harness(const EvaluationOperator& op, const SchedulePtr& schedule, std::uint64_t seed, double tol)
      : op_(op), schedule_(schedule), tree_(schedule->tree()), rng_(seed), tol_(tol) {}

  AxiomResult& result(const std::string& name) {
    for (auto& r : results_) {
      if (r.name == name) return r;
    }
    results_.push_back({name, 0, 0, std::nullopt});
    return results_.back();
  }

  void record(const std::string& name, int trial, NodeIndex node, double lhs, double rhs,
              double allowed, std::vector<double> inputs, std::string detail) {
    AxiomResult& r = result(name);
    ++r.checks;
    const double violation = std::abs(lhs - rhs) - allowed;
    if (!(violation <= tol_)) fail(r, trial, node, {lhs, rhs}, violation, std::move(inputs),
                                   std::move(detail));
  }

  void record_le(const std::string& name, int trial, NodeIndex node, double lhs, double rhs,
                 std::vector<double> inputs, std::string detail) {
    AxiomResult& r = result(name);
    ++r.checks;
    const double violation = lhs - rhs;
    if (!(violation <= tol_)) fail(r, trial, node, {lhs, rhs}, violation, std::move(inputs),
                                   std::move(detail));
  }

  void run_trial(int trial) {
    admissibility(trial);
    knowledge_preservation(trial);
    monotonicity(trial);
    consistency(trial);
    generalized_zero_one(trial);
    zero_one(trial);
    continuity(trial);
  }

  std::vector<AxiomResult> take() { return std::move(results_); }

 private:
  void fail(AxiomResult& r, int trial, NodeIndex node, std::vector<double> outputs,
            double violation, std::vector<double> inputs, std::string detail) {
    ++r.failures;
    if (!r.counterexample) {
      r.counterexample = Counterexample{trial, tree_.id(node), std::move(inputs),
                                        std::move(outputs), violation, std::move(detail)};
    }
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }

  AdaptedProcess random_process() {
    AdaptedProcess x(tree_.size());
    for (NodeIndex v = 0; v < tree_.size(); ++v) x[v] = uniform(-4.0, 4.0);
    return x;
  }

  StoppingTime random_tau() { return random_stopping_time(schedule_, rng_); }
  StoppingTime random_after(const StoppingTime& s) { return random_stopping_time(schedule_, rng_, s); }

  // Random union of atoms of `s`.
  LeafSet random_event(const StoppingTime& s) {
    LeafSet a(tree_.leaf_count(), false);
    for (NodeIndex v : s.stop_nodes()) {
      const bool in = (rng_() & 1U) != 0;
      for (std::size_t l = tree_.leaf_begin(v); l < tree_.leaf_end(v); ++l) a[l] = in;
    }
    return a;
  }

  std::vector<double> inputs_at(const StoppingTime& tau, const AdaptedProcess& eta) const {
    std::vector<double> in;
    for (NodeIndex v : tau.stop_nodes()) in.push_back(eta[v]);
    return in;
  }

  std::string describe(const StoppingTime& s, const StoppingTime& tau) const {
    std::ostringstream out;
    out << "S={";
    for (NodeId id : s.stop_ids()) out << ' ' << id;
    out << " } tau={";
    for (NodeId id : tau.stop_ids()) out << ' ' << id;
    out << " }";
    return out.str();
  }

  void admissibility(int trial) {
    const StoppingTime tau = random_tau();
    const StoppingTime s1 = meet(random_tau(), tau);
    const StoppingTime s2 = meet(random_tau(), tau);
    const AdaptedProcess eta = random_process();
    const AdaptedProcess r1 = rho(op_, s1, tau, eta);
    const AdaptedProcess r2 = rho(op_, s2, tau, eta);
    for (NodeIndex v : s1.stop_nodes()) {
      if (!s2.stops_at(v)) continue;
      record("admissibility", trial, v, r1[v], r2[v], 0.0, inputs_at(tau, eta), describe(s1, tau));
    }
  }

  void knowledge_preservation(int trial) {
    // Node level: g_v(c, ..., c) = c.
    for (NodeIndex v = 0; v < tree_.size(); ++v) {
      if (tree_.is_leaf(v)) continue;
      for (double c : {-10.0, 0.0, 3.5, uniform(-8.0, 8.0)}) {
        std::vector<double> kids(tree_.child_count(v), c);
        record("knowledge_preservation", trial, v, op_.aggregate(v, kids), c, 0.0, kids,
               "constant children");
      }
    }
    // Operator level: an F_S-measurable payoff evaluated from tau back to S.
    const StoppingTime s = random_tau();
    const StoppingTime tau = random_after(s);
    const AdaptedProcess at_s = random_process();
    AdaptedProcess eta(tree_.size());
    for (NodeIndex w : tau.stop_nodes()) eta[w] = at_s[s.governing_stop(w)];
    const AdaptedProcess r = rho(op_, s, tau, eta);
    for (NodeIndex v : s.stop_nodes()) {
      record("knowledge_preservation", trial, v, r[v], at_s[v], 0.0, inputs_at(tau, eta),
             describe(s, tau));
    }
  }

  void monotonicity(int trial) {
    const StoppingTime tau = random_tau();
    const StoppingTime s = meet(random_tau(), tau);
    const AdaptedProcess low = random_process();
    AdaptedProcess high = low;
    for (NodeIndex w : tau.stop_nodes()) {
      if ((rng_() & 1U) != 0) high[w] += uniform(0.0, 2.0);
    }
    const AdaptedProcess r_low = rho(op_, s, tau, low);
    const AdaptedProcess r_high = rho(op_, s, tau, high);
    for (NodeIndex v : s.stop_nodes()) {
      std::vector<double> in = inputs_at(tau, low);
      const auto hi = inputs_at(tau, high);
      in.insert(in.end(), hi.begin(), hi.end());
      record_le("monotonicity", trial, v, r_low[v], r_high[v], std::move(in), describe(s, tau));
    }
  }

  void consistency(int trial) {
    const StoppingTime tau = random_tau();
    const StoppingTime mid = meet(random_tau(), tau);
    const StoppingTime s = meet(random_tau(), mid);
    const AdaptedProcess eta = random_process();
    const AdaptedProcess inner = rho(op_, mid, tau, eta);
    const AdaptedProcess two_step = rho(op_, s, mid, inner);
    const AdaptedProcess one_step = rho(op_, s, tau, eta);
    for (NodeIndex v : s.stop_nodes()) {
      record("consistency", trial, v, two_step[v], one_step[v], 0.0, inputs_at(tau, eta),
             describe(s, tau));
    }
  }

  void generalized_zero_one(int trial) {
    const StoppingTime s = random_tau();
    const AdaptedProcess family = random_process();
    const LeafSet a = random_event(s);
    const StoppingTime tau = random_after(s);
    const StoppingTime other = concatenate(tau, a, random_after(s));
    const AdaptedProcess r1 = rho(op_, s, tau, family);
    const AdaptedProcess r2 = rho(op_, s, other, family);
    for (NodeIndex v : s.stop_nodes()) {
      if (!a[tree_.leaf_begin(v)]) continue;
      record("generalized_zero_one_law", trial, v, r1[v], r2[v], 0.0, inputs_at(tau, family),
             describe(s, tau));
    }
  }

  void zero_one(int trial) {
    const StoppingTime s = random_tau();
    const StoppingTime tau = random_after(s);
    const LeafSet a = random_event(s);
    const AdaptedProcess eta = random_process();
    AdaptedProcess masked = eta;
    for (NodeIndex w : tau.stop_nodes()) {
      if (!a[tree_.leaf_begin(w)]) masked[w] = 0.0;
    }
    const AdaptedProcess r1 = rho(op_, s, tau, eta);
    const AdaptedProcess r2 = rho(op_, s, tau, masked);
    for (NodeIndex v : s.stop_nodes()) {
      if (!a[tree_.leaf_begin(v)]) continue;
      record("zero_one_law", trial, v, r1[v], r2[v], 0.0, inputs_at(tau, eta), describe(s, tau));
    }
  }

  void continuity(int trial) {
    constexpr double kDelta = 1e-8;
    constexpr double kLipschitz = 2.0;
    const StoppingTime tau = random_tau();
    const StoppingTime s = meet(random_tau(), tau);
    const AdaptedProcess eta = random_process();
    AdaptedProcess bumped = eta;
    for (NodeIndex w : tau.stop_nodes()) bumped[w] += kDelta;
    const AdaptedProcess r1 = rho(op_, s, tau, eta);
    const AdaptedProcess r2 = rho(op_, s, tau, bumped);
    for (NodeIndex v : s.stop_nodes()) {
      record("continuity", trial, v, r2[v], r1[v], kLipschitz * kDelta, inputs_at(tau, eta),
             describe(s, tau));
    }
  }

  const EvaluationOperator& op_;
  SchedulePtr schedule_;
  const EventTree& tree_;
  std::mt19937_64 rng_;
  double tol_;
  std::vector<AxiomResult> results_;
};

}  // namespace

AxiomReport axiom_check(const EvaluationOperator& op, const SchedulePtr& schedule, int trials,
                        std::uint64_t seed, double tol) {
  if (trials < 1) throw Error(ErrorCode::kBadDimensions, "axiom_check needs at least one trial");
  Harness harness(op, schedule, seed, tol);
  for (const char* name : {"admissibility", "knowledge_preservation", "monotonicity", "consistency",
                           "generalized_zero_one_law", "zero_one_law", "continuity"}) {
    harness.result(name);
  }
  for (int trial = 0; trial < trials; ++trial) harness.run_trial(trial);
  AxiomReport report;
  report.operator_name = op.name();
  report.seed = seed;
  report.trials = trials;
  report.axioms = harness.take();
  return report;
}

}  // namespace dynkin
