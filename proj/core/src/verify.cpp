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

#include "dynkin/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "dynkin/error.hpp"

namespace dynkin {

NashReport nash_check(const GameInstance& g, const StoppingTime& tau1, const StoppingTime& tau2) {
  NashReport report;
  report.j1 = assess_j1(g, tau1, tau2);
  report.j2 = assess_j2(g, tau1, tau2);
  report.agent1.gain = -std::numeric_limits<double>::infinity();
  report.agent2.gain = -std::numeric_limits<double>::infinity();
  for_each_theta(
      g.schedule, std::nullopt,
      [&](const StoppingTime& tau) {
        ++report.strategies;
        const double v1 = assess_j1(g, tau, tau2);
        if (v1 - report.j1 > report.agent1.gain) report.agent1 = {tau, v1, v1 - report.j1};
        const double v2 = assess_j2(g, tau1, tau);
        if (v2 - report.j2 > report.agent2.gain) report.agent2 = {tau, v2, v2 - report.j2};
      },
      g.config.enum_limit);
  report.passed = report.agent1.gain <= g.config.tol_eq && report.agent2.gain <= g.config.tol_eq;
  return report;
}

std::vector<std::pair<StoppingTime, StoppingTime>> all_nash_pairs(const GameInstance& g) {
  const std::uint64_t count = count_theta(*g.schedule);
  if (count > g.config.enum_limit || count * count > g.config.enum_limit) {
    throw Error(ErrorCode::kEnumerationLimitExceeded,
                std::to_string(count) + "^2 strategy pairs exceed the limit " +
                    std::to_string(g.config.enum_limit));
  }
  const std::vector<StoppingTime> theta = enumerate_theta(g.schedule, std::nullopt, count);
  const std::size_t n = theta.size();
  std::vector<double> j1(n * n);
  std::vector<double> j2(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      j1[i * n + j] = assess_j1(g, theta[i], theta[j]);
      j2[i * n + j] = assess_j2(g, theta[i], theta[j]);
    }
  }
  std::vector<double> best1(n, -std::numeric_limits<double>::infinity());  // per agent-2 choice
  std::vector<double> best2(n, -std::numeric_limits<double>::infinity());  // per agent-1 choice
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      best1[j] = std::max(best1[j], j1[i * n + j]);
      best2[i] = std::max(best2[i], j2[i * n + j]);
    }
  }
  std::vector<std::pair<StoppingTime, StoppingTime>> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (best1[j] - j1[i * n + j] <= g.config.tol_eq &&
          best2[i] - j2[i * n + j] <= g.config.tol_eq) {
        out.emplace_back(theta[i], theta[j]);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

bool InvariantReport::passed() const {
  return std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.passed; });
}

const CheckItem* InvariantReport::find(const std::string& name) const {
  for (const auto& c : items) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

std::string ids(const StoppingTime& tau) {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (NodeId id : tau.stop_ids()) {
    out << (first ? "" : ",") << id;
    first = false;
  }
  out << '}';
  return out.str();
}

class Checker {
 public:
  explicit Checker(InvariantReport& report) : report_(report) {}

  CheckItem& item(const std::string& name) {
    for (auto& c : report_.items) {
      if (c.name == name) return c;
    }
    report_.items.push_back({name, true, 0, {}});
    return report_.items.back();
  }

  void check(const std::string& name, bool ok, const std::string& where) {
    CheckItem& c = item(name);
    ++c.evaluated;
    if (!ok && c.passed) {
      c.passed = false;
      c.counterexample = where;
    }
  }

 private:
  InvariantReport& report_;
};

struct Replay {
  AdaptedProcess xi;
  ValueFamily vf;
};

}  // namespace

InvariantReport trace_invariants(const GameInstance& g, const EquilibriumResult& result,
                                 const InvariantOptions& options) {
  InvariantReport report;
  Checker c(report);
  const EventTree& t = g.tree();
  const double tol = g.config.tol_eq;
  const auto& trace = result.trace;
  const int last = static_cast<int>(trace.size());
  auto tau = [&](int n) -> const StoppingTime& { return result.at(n).tau; };
  auto here = [](int n) { return "n=" + std::to_string(n); };

  for (const char* name :
       {"trace_replays", "payoff_frozen_at_opponent", "value_frozen_at_opponent",
        "tilde_not_after_opponent", "tilde_two_routes_agree", "coincidence_at_tilde",
        "tilde_attains_value", "value_matches_oracle", "tilde_before_earlier_own",
        "next_from_tilde", "tilde_is_meet", "repeat_only_at_horizon", "iterates_decrease",
        "agent1_no_profitable_deviation", "agent2_no_profitable_deviation",
        "next_is_optimal", "fixpoint_reached"}) {
    c.item(name);
  }

  for (int n = 1; n <= last; ++n) {
    c.check("trace_replays", result.at(n).n == n, here(n) + " index out of sequence");
  }
  if (last < 2) return report;

  const bool oracle_feasible =
      options.oracle && count_theta(*g.schedule) <= g.config.enum_limit;

  // Per best-response entry: replay the capped problem.
  std::vector<std::optional<Replay>> replays(static_cast<std::size_t>(last) + 1);
  for (int n = 3; n <= last; ++n) {
    const TraceEntry& e = result.at(n);
    const Agent agent = e.agent();
    const StoppingTime& opp = tau(n - 1);
    const AdaptedProcess xi = best_response_payoff(g, agent, opp);
    ValueFamily vf = value_family(g.rho(agent), xi, opp);
    const StoppingTime tilde = minimal_optimal(vf, tol);
    const AdaptedProcess& y = g.y(agent);

    if (!e.tilde || !e.value0) {
      c.check("trace_replays", false, here(n) + " has no tilde or value");
      continue;
    }
    const BestResponse br = best_response(g, agent, opp, tau(n - 2));
    c.check("trace_replays",
            *e.tilde == tilde && br.next == e.tau &&
                std::abs(*e.value0 - vf.values[t.root()]) <= tol,
            here(n) + " stored iterate differs from replay: tau=" + ids(e.tau) +
                " replayed=" + ids(br.next));

    for (NodeIndex v = 0; v < t.size(); ++v) {
      if (!opp.at_or_after(v)) continue;
      const double frozen = y[opp.governing_stop(v)];
      c.check("payoff_frozen_at_opponent", xi[v] == frozen,
              here(n) + " node " + std::to_string(t.id(v)));
      c.check("value_frozen_at_opponent", std::abs(vf.values[v] - frozen) <= tol,
              here(n) + " node " + std::to_string(t.id(v)));
    }
    const StoppingTime& stored = *e.tilde;
    c.check("tilde_not_after_opponent", leq(stored, opp),
            here(n) + " tilde=" + ids(stored) + " opponent=" + ids(opp));
    c.check("tilde_two_routes_agree",
            minimal_optimal_before_cap(vf, g.x(agent), tol) == tilde,
            here(n) + " coincidence with payoff gives " + ids(tilde));

    const RandomVariable v_at = evaluate_family_at(vf.values, stored);
    const RandomVariable xi_at = evaluate_family_at(xi, stored);
    for (std::size_t l = 0; l < v_at.size(); ++l) {
      c.check("coincidence_at_tilde", std::abs(v_at[l] - xi_at[l]) <= tol,
              here(n) + " leaf " + std::to_string(t.id(t.leaves()[l])));
    }
    const double attained = rho_at_root(g.rho(agent), meet(stored, opp), xi);
    c.check("tilde_attains_value", std::abs(attained - *e.value0) <= tol,
            here(n) + " rho=" + std::to_string(attained) + " V0=" + std::to_string(*e.value0));

    if (oracle_feasible) {
      const StoppingTime root = StoppingTime::at_root(g.schedule);
      const AdaptedProcess bf = brute_force_value(g.rho(agent), xi, opp, root, g.config.enum_limit);
      c.check("value_matches_oracle", std::abs(bf[t.root()] - vf.values[t.root()]) <= tol,
              here(n) + " dp=" + std::to_string(vf.values[t.root()]) +
                  " brute=" + std::to_string(bf[t.root()]));
    }
    replays[static_cast<std::size_t>(n)] = Replay{xi, std::move(vf)};
  }

  // Cross-iterate relations.
  for (int m = 1; m + 2 <= last; ++m) {
    const auto& tilde = result.at(m + 2).tilde;
    if (!tilde) continue;
    c.check("tilde_before_earlier_own", leq(*tilde, tau(m)),
            here(m + 2) + " tilde=" + ids(*tilde) + " tau_" + std::to_string(m) + "=" +
                ids(tau(m)));
  }
  for (int n = 2; n + 1 <= last; ++n) {
    const auto& tilde_opt = result.at(n + 1).tilde;
    if (!tilde_opt) continue;
    const StoppingTime& tilde = *tilde_opt;
    const StoppingTime& next = tau(n + 1);
    for (std::size_t l = 0; l < t.leaf_count(); ++l) {
      const int ts = tilde.stage_for_leaf(l);
      const int cur = tau(n).stage_for_leaf(l);
      NodeIndex expected = kNoNode;
      if (ts < cur) {
        expected = tilde.stop_for_leaf(l);
      } else if (tilde.stop_for_leaf(l) == tau(n).stop_for_leaf(l)) {
        expected = tau(n - 1).stop_for_leaf(l);
      }
      c.check("next_from_tilde", next.stop_for_leaf(l) == expected,
              here(n + 1) + " leaf " + std::to_string(t.id(t.leaves()[l])) + " tau=" + ids(next));
    }
    c.check("tilde_is_meet", meet(next, tau(n)) == tilde,
            here(n + 1) + " tilde=" + ids(tilde) + " meet=" + ids(meet(next, tau(n))));
    c.check("iterates_decrease", leq(next, tau(n - 1)),
            here(n + 1) + " tau=" + ids(next) + " previous=" + ids(tau(n - 1)));
  }
  for (int n = 2; n <= last; ++n) {
    const LeafSet repeat = equal_on(tau(n), tau(n - 1));
    for (std::size_t l = 0; l < t.leaf_count(); ++l) {
      if (!repeat[l]) continue;
      for (int m = 1; m <= n; ++m) {
        c.check("repeat_only_at_horizon", t.is_leaf(tau(m).stop_for_leaf(l)),
                here(n) + " leaf " + std::to_string(t.id(t.leaves()[l])) + " tau_" +
                    std::to_string(m) + "=" + ids(tau(m)));
      }
    }
  }

  // Deviation checks over Theta or a seeded sample of it.
  std::vector<StoppingTime> deviations;
  if (count_theta(*g.schedule) <= options.exhaustive_limit) {
    deviations = enumerate_theta(g.schedule, std::nullopt, options.exhaustive_limit);
  } else {
    report.deviations_exhaustive = false;
    std::mt19937_64 rng(options.seed);
    for (std::size_t k = 0; k < options.sample_size; ++k) {
      deviations.push_back(random_stopping_time(g.schedule, rng));
    }
  }
  for (int n = 3; n <= last; ++n) {
    const TraceEntry& e = result.at(n);
    if (!e.value0) continue;
    if (e.agent() == Agent::kFirst) {
      const StoppingTime& opp = tau(n - 1);
      const double own = assess_j1(g, e.tau, opp);
      c.check("next_is_optimal", std::abs(own - *e.value0) <= tol,
              here(n) + " J1=" + std::to_string(own) + " V0=" + std::to_string(*e.value0));
      for (const StoppingTime& dev : deviations) {
        c.check("agent1_no_profitable_deviation", assess_j1(g, dev, opp) <= own + tol,
                here(n) + " deviation " + ids(dev));
      }
    } else {
      const StoppingTime& opp = tau(n - 1);
      const double own = assess_j2(g, opp, e.tau);
      c.check("next_is_optimal", std::abs(own - *e.value0) <= tol,
              here(n) + " J2=" + std::to_string(own) + " V0=" + std::to_string(*e.value0));
      for (const StoppingTime& dev : deviations) {
        c.check("agent2_no_profitable_deviation", assess_j2(g, opp, dev) <= own + tol,
                here(n) + " deviation " + ids(dev));
      }
    }
  }

  if (result.converged) {
    const bool fix = last >= 4 && tau(last - 1) == tau(last - 3) && tau(last) == tau(last - 2) &&
                     result.tau1_star == tau(last - 1) && result.tau2_star == tau(last);
    c.check("fixpoint_reached", fix, "final iterates do not repeat");
  }
  return report;
}

}  // namespace dynkin
