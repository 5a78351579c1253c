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

// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "dynkin/error.hpp"
#include "dynkin/io.hpp"
#include "dynkin/stopping.hpp"
#include "dynkin/verify.hpp"
#include "support/fixtures.hpp"
#include "support/sweep.hpp"

namespace dynkin {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Outcome {
  bool passed = true;
  std::string detail;
};

int failures = 0;

void report(int number, const char* name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::printf("%s %d %s: %s\n", o.passed ? "PASS" : "FAIL", number, name, o.detail.c_str());
  std::fflush(stdout);
  if (!o.passed) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome d2_golden() {
  const GameInstance g = load_instance(testing::fixture_path("d2.game"));
  const auto start = Clock::now();
  const EquilibriumResult r = solve(g);
  const double elapsed = ms_since(start);
  const StoppingTime zero = StoppingTime::at_root(g.schedule);
  const StoppingTime horizon = StoppingTime::at_horizon(g.schedule);
  const auto pairs = all_nash_pairs(g);
  const bool in_oracle =
      std::find(pairs.begin(), pairs.end(), std::pair{r.tau1_star, r.tau2_star}) != pairs.end();
  const bool ok = r.converged && r.tau1_star == zero && r.tau2_star == horizon &&
                  std::abs(r.j1 - 1.0) <= 1e-9 && std::abs(r.j2 - 2.0) <= 1e-9 &&
                  r.iterations <= 6 && elapsed < 10.0 && in_oracle;
  return {ok, fmt("tau1*=0 %s, tau2*=T %s, J1=%g J2=%g, %zu steps, %.3f ms, "
                  "%zu Nash pairs of 4, solver pair %s",
                  r.tau1_star == zero ? "yes" : "no", r.tau2_star == horizon ? "yes" : "no",
                  r.j1, r.j2, r.iterations, elapsed, pairs.size(),
                  in_oracle ? "among them" : "missing")};
}

struct SweepTotals {
  int converged = 0;
  int within_budget = 0;
  int nash = 0;
  double worst_gain = -1e300;
  double solve_nash_ms = 0.0;
  double oracle_err = 0.0;
  int oracle_checks = 0;
  int oracle_skipped = 0;
  int invariant_pass = 0;
  int exhaustive_required = 0;
  int exhaustive_done = 0;
  std::string first_failure;
  bool ran = false;
};

SweepTotals& sweep() {
  static SweepTotals s;
  if (s.ran) return s;
  s.ran = true;
  for (int i = 0; i < testing::kSweepSize; ++i) {
    const GameInstance g = testing::sweep_instance(i);
    const auto start = Clock::now();
    std::optional<EquilibriumResult> solved;
    try {
      solved = solve(g);
    } catch (const Error& e) {
      if (s.first_failure.empty()) s.first_failure = fmt("instance %d: %s", i, e.what());
      continue;
    }
    const EquilibriumResult& r = *solved;
    const NashReport nash = nash_check(g, r.tau1_star, r.tau2_star);
    s.solve_nash_ms += ms_since(start);
    s.converged += r.converged ? 1 : 0;
    s.within_budget += r.iterations <= g.default_max_iter() ? 1 : 0;
    s.nash += nash.passed ? 1 : 0;
    s.worst_gain = std::max({s.worst_gain, nash.agent1.gain, nash.agent2.gain});
    if (!nash.passed && s.first_failure.empty()) s.first_failure = fmt("instance %d not Nash", i);

    for (int n = 3; n <= static_cast<int>(r.trace.size()); ++n) {
      const Agent a = r.at(n).agent();
      const StoppingTime& opp = r.at(n - 1).tau;
      const AdaptedProcess xi = best_response_payoff(g, a, opp);
      const ValueFamily vf = value_family(g.rho(a), xi, opp);
      if (count_theta(*g.schedule) > g.config.enum_limit) {
        ++s.oracle_skipped;
        continue;
      }
      const AdaptedProcess bf =
          brute_force_value(g.rho(a), xi, opp, StoppingTime::at_root(g.schedule));
      s.oracle_err = std::max(s.oracle_err, std::abs(bf[0] - vf.values[0]));
      ++s.oracle_checks;
    }

    InvariantOptions options;
    options.oracle = false;  // covered above
    const InvariantReport inv = trace_invariants(g, r, options);
    s.invariant_pass += inv.passed() ? 1 : 0;
    if (count_theta(*g.schedule) <= options.exhaustive_limit) {
      ++s.exhaustive_required;
      s.exhaustive_done += inv.deviations_exhaustive ? 1 : 0;
    }
    if (!inv.passed() && s.first_failure.empty()) {
      for (const CheckItem& c : inv.items) {
        if (!c.passed) {
          s.first_failure = fmt("instance %d %s: %s", i, c.name.c_str(), c.counterexample.c_str());
          break;
        }
      }
    }
  }
  return s;
}

Outcome nash_sweep() {
  const SweepTotals& s = sweep();
  const int n = testing::kSweepSize;
  const bool ok = s.converged == n && s.within_budget == n && s.nash == n &&
                  s.worst_gain <= 1e-9 && s.solve_nash_ms < 60000.0;
  std::string d = fmt("converged %d/%d, within 2|nodes|+4 %d/%d, Nash %d/%d, "
                      "largest deviation gain %.3g, %.1f ms",
                      s.converged, n, s.within_budget, n, s.nash, n, s.worst_gain, s.solve_nash_ms);
  if (!s.first_failure.empty()) d += "; first failure: " + s.first_failure;
  return {ok, d};
}

Outcome oracle_equivalence() {
  const SweepTotals& s = sweep();
  return {s.oracle_err <= 1e-9 && s.oracle_skipped == 0 && s.oracle_checks > 0,
          fmt("%d best-response problems, max |V_dp - V_bf| = %.3g, %d skipped", s.oracle_checks,
              s.oracle_err, s.oracle_skipped)};
}

Outcome trace_suite() {
  const SweepTotals& s = sweep();
  const int n = testing::kSweepSize;
  return {s.invariant_pass == n && s.exhaustive_done == s.exhaustive_required,
          fmt("all checks pass on %d/%d traces, exhaustive deviations on %d/%d with |Theta| <= 4096",
              s.invariant_pass, n, s.exhaustive_done, s.exhaustive_required)};
}

Outcome axioms() {
  std::vector<SchedulePtr> schedules;
  for (auto [d, b] : {std::pair{4, 2}, {3, 3}, {2, 4}}) {
    schedules.push_back(
        ExerciseSchedule::all_stages(testing::make_tree(balanced_tree_spec(d, b))));
  }
  GenOptions o;
  o.seed = 77;
  o.depth = 4;
  o.branching = 2;
  o.schedule = ScheduleMode::kRandom;
  schedules.push_back(gen_instance(o).schedule);

  int runs = 0;
  int passed = 0;
  std::string failed;
  for (const SchedulePtr& s : schedules) {
    const EventTree& t = s->tree();
    for (const char* name : {"linear", "entropic:1", "entropic:2", "multiprior-inf"}) {
      const EvaluationOperator op = make_operator(t, parse_operator_choice(name), 5);
      for (std::uint64_t seed : {7, 11, 13}) {
        const AxiomReport r = axiom_check(op, s, 500, seed);
        ++runs;
        if (r.passed()) {
          ++passed;
        } else if (failed.empty()) {
          failed = fmt("%s seed %d", name, static_cast<int>(seed));
        }
      }
    }
  }
  const SchedulePtr b1 = testing::b1_schedule();
  const AxiomReport broken = axiom_check(testing::broken_difference(b1->tree()), b1, 500, 7);
  const AxiomResult* mono = broken.find("monotonicity");
  const bool caught = mono && !mono->passed() && mono->counterexample.has_value();
  std::string d = fmt("%d/%d operator runs pass all axioms; broken x-y aggregator %s", passed,
                      runs, caught ? "fails monotonicity" : "NOT caught");
  if (caught) {
    const Counterexample& c = *mono->counterexample;
    d += fmt(" (trial %d, node %lld, violation %.3g)", c.trial, static_cast<long long>(c.node),
             c.violation);
  }
  if (!failed.empty()) d += "; first failing: " + failed;
  return {passed == runs && caught, d};
}

Outcome localisation() {
  int triples = 0;
  int held = 0;
  double worst = 0.0;
  std::mt19937_64 rng(2024);
  for (const char* name : {"linear", "entropic:1", "multiprior-inf"}) {
    for (int i = 0; i < 100; ++i) {
      GenOptions o;
      o.seed = 9000 + static_cast<std::uint64_t>(i);
      o.depth = 1 + i % 4;
      o.branching = 1 + (i / 4) % 3;
      o.agent1 = parse_operator_choice(name);
      o.schedule = i % 5 == 2 ? ScheduleMode::kRandom : ScheduleMode::kAllStages;
      const GameInstance g = gen_instance(o);
      const EventTree& t = g.tree();
      const StoppingTime s = random_stopping_time(g.schedule, rng);
      LeafSet a(t.leaf_count(), false);
      for (NodeIndex stop : s.stop_nodes()) {
        const bool in = rng() % 2 == 0;
        for (std::size_t l = t.leaf_begin(stop); l < t.leaf_end(stop); ++l) a[l] = in;
      }
      const StoppingTime tau = random_stopping_time(g.schedule, rng, s);
      const ValueFamily v = value_family(g.rho1, g.x1, g.schedule);
      const ValueFamily va = localized_value(g.rho1, g.x1, a, s);
      const RandomVariable lhs = evaluate_family_at(va.values, tau);
      const RandomVariable rhs = evaluate_family_at(v.values, tau);
      double err = 0.0;
      for (std::size_t l = 0; l < a.size(); ++l) {
        if (a[l]) err = std::max(err, std::abs(lhs[l] - rhs[l]));
      }
      worst = std::max(worst, err);
      ++triples;
      held += err <= 1e-9 ? 1 : 0;
    }
  }
  return {held == triples, fmt("identity holds on %d/%d triples (100 per operator), max error %.3g",
                               held, triples, worst)};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "dynkin_acceptance";
  fs::create_directories(dir);
  auto file = [&](const std::string& n) { return (dir / n).string(); };
  std::ostringstream sink;
  std::vector<std::string> instances{testing::fixture_path("d2.game")};
  for (int i : {37, 118, 143}) {
    const std::string path = file("sweep" + std::to_string(i) + ".game");
    write_file(path, dump(instance_to_json(testing::sweep_instance(i))));
    instances.push_back(path);
  }
  int identical = 0;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    std::string texts[2][2];
    for (int run = 0; run < 2; ++run) {
      const std::string solved = file(fmt("s%zu_%d.report", k, run));
      const std::string verified = file(fmt("v%zu_%d.report", k, run));
      if (cli::run({"solve", "--instance", instances[k], "--out", solved}, sink, sink) != 0 ||
          cli::run({"verify", "--instance", instances[k], "--equilibrium", solved, "--out",
                    verified},
                   sink, sink) != 0) {
        fs::remove_all(dir);
        return {false, "solve or verify did not exit 0 on " + instances[k]};
      }
      texts[run][0] = read_file(solved);
      texts[run][1] = read_file(verified);
    }
    identical += texts[0][0] == texts[1][0] && texts[0][1] == texts[1][1] ? 1 : 0;
  }
  fs::remove_all(dir);
  return {identical == static_cast<int>(instances.size()),
          fmt("solve and verify reports byte-identical across two runs on %d/%zu instances",
              identical, instances.size())};
}

}  // namespace
}  // namespace dynkin

int main() {
  using namespace dynkin;
  report(1, "d2_golden", d2_golden);
  report(2, "nash_sweep", nash_sweep);
  report(3, "oracle_equivalence", oracle_equivalence);
  report(4, "trace_invariants", trace_suite);
  report(5, "operator_axioms", axioms);
  report(6, "localisation", localisation);
  report(7, "determinism", determinism);
  std::printf("%s: %d of 7 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
