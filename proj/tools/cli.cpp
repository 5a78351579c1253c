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

#include "cli.hpp"

#include <algorithm>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "dynkin/error.hpp"
#include "dynkin/evaluation.hpp"
#include "dynkin/game.hpp"
#include "dynkin/io.hpp"
#include "dynkin/verify.hpp"

namespace dynkin::cli {
namespace {

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

std::string operator_label(const EvaluationOperator& op) {
  if (op.kind() == OperatorKind::kEntropic) {
    std::ostringstream s;
    s << "entropic(gamma=" << op.gamma() << ")";
    return s.str();
  }
  return op.name();
}

std::string inspect_text(const GameInstance& g) {
  const EventTree& t = g.tree();
  const ExerciseSchedule& s = *g.schedule;
  std::ostringstream o;
  o << "nodes      " << t.size() << "\n";
  o << "leaves     " << t.leaf_count() << "\n";
  o << "horizon    stage " << t.horizon() << "\n";
  o << "dates     ";
  for (double d : t.dates()) o << ' ' << d;
  o << "\n";
  o << "schedule   " << (s.is_all_stages() ? "all-stages" : "explicit") << ", K = " << s.K()
    << "\n";
  o << "strategies " << count_theta(s) << " per agent\n";
  o << "agent1     " << operator_label(g.rho1) << "\n";
  o << "agent2     " << operator_label(g.rho2) << "\n";
  o << "config     tol_eq=" << g.config.tol_eq << " max_iter="
    << (g.config.max_iter != 0 ? g.config.max_iter : g.default_max_iter())
    << " enum_limit=" << g.config.enum_limit << "\n\n";
  o << std::setw(8) << "node" << std::setw(6) << "stage" << std::setw(10) << "X1"
    << std::setw(10) << "Y1" << std::setw(10) << "X2" << std::setw(10) << "Y2"
    << "  exercisable\n";
  auto cell = [&](const AdaptedProcess& p, NodeIndex v) {
    std::ostringstream c;
    if (p.has(v)) {
      c << p[v];
    } else {
      c << '-';
    }
    return c.str();
  };
  for (NodeIndex v = 0; v < t.size(); ++v) {
    o << std::setw(8) << t.id(v) << std::setw(6) << t.stage(v) << std::setw(10) << cell(g.x1, v)
      << std::setw(10) << cell(g.y1, v) << std::setw(10) << cell(g.x2, v) << std::setw(10)
      << cell(g.y2, v) << "  " << (s.exercisable(v) ? "yes" : "no") << "\n";
  }
  return o.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nash equilibria of non-zero-sum Dynkin games on finite event trees", "dynkin"};
  app.require_subcommand(1);

  std::string instance_path;
  std::string out_path;
  std::string equilibrium_path;

  auto* solve = app.add_subcommand("solve", "alternating best responses; writes the trace");
  solve->add_option("--instance", instance_path, "instance file")->required();
  solve->add_option("--out", out_path, "report file (default stdout)");

  auto* verify = app.add_subcommand("verify", "Nash check and trace invariants");
  verify->add_option("--instance", instance_path, "instance file (default: the report's)");
  verify->add_option("--equilibrium", equilibrium_path, "solve report (default: solve now)");
  verify->add_option("--out", out_path, "report file (default stdout)");

  std::string op_name = "linear";
  double gamma = 1.0;
  std::string direction = "inf";
  int trials = 500;
  std::uint64_t seed = 7;
  auto* axioms = app.add_subcommand("axioms", "randomized operator axiom checks");
  axioms->add_option("--operator", op_name, "linear | entropic | multiprior")
      ->check(CLI::IsMember({"linear", "entropic", "multiprior"}));
  axioms->add_option("--gamma", gamma, "entropic risk parameter");
  axioms->add_option("--direction", direction, "multiprior inf | sup")
      ->check(CLI::IsMember({"inf", "sup"}));
  axioms->add_option("--trials", trials, "trials per axiom")->check(CLI::PositiveNumber);
  axioms->add_option("--seed", seed, "random seed");
  axioms->add_option("--instance", instance_path, "tree and schedule (default: binary, depth 3)");
  axioms->add_option("--out", out_path, "report file (default stdout)");

  GenOptions gen_options;
  std::string operators = "linear";
  std::string schedule_mode = "all-stages";
  auto* gen = app.add_subcommand("gen", "random instance");
  gen->add_option("--seed", gen_options.seed, "random seed");
  gen->add_option("--depth", gen_options.depth, "tree depth, at most 8");
  gen->add_option("--branching", gen_options.branching, "children per node, at most 4");
  gen->add_option("--operators", operators, "one or two of linear, entropic:<gamma>, "
                                            "multiprior-inf, multiprior-sup, comma separated");
  gen->add_option("--schedule", schedule_mode, "all-stages | random")
      ->check(CLI::IsMember({"all-stages", "random"}));
  gen->add_option("--out", out_path, "instance file (default stdout)");

  auto* inspect = app.add_subcommand("inspect", "print an instance and its strategy counts");
  inspect->add_option("--instance", instance_path, "instance file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "dynkin: " << e.what() << "\n" << app.help();
    return kError;
  }

  try {
    if (*solve) {
      const GameInstance g = load_instance(instance_path);
      const EquilibriumResult r = dynkin::solve(g);
      emit(out_path, dump(solve_report(g, r)), out);
      return kPass;
    }
    if (*verify) {
      if (instance_path.empty() && equilibrium_path.empty()) {
        err << "dynkin verify: needs --instance, --equilibrium or both\n";
        return kError;
      }
      std::optional<Json> report;
      if (!equilibrium_path.empty()) report = Json::parse(read_file(equilibrium_path));
      const GameInstance g = !instance_path.empty() ? load_instance(instance_path)
                                                    : parse_instance(report->at("instance"));
      const EquilibriumResult r = report ? equilibrium_from_json(g, *report) : dynkin::solve(g);
      const NashReport nash = nash_check(g, r.tau1_star, r.tau2_star);
      const InvariantReport inv = trace_invariants(g, r);
      const Json j = verify_report(g, r, nash, inv);
      emit(out_path, dump(j), out);
      if (!j.at("passed").get<bool>()) {
        err << "dynkin verify: failed";
        if (!nash.passed) err << " nash";
        for (const CheckItem& c : inv.items) {
          if (!c.passed) err << " " << c.name;
        }
        err << "\n";
        return kFailedCheck;
      }
      return kPass;
    }
    if (*axioms) {
      SchedulePtr schedule;
      if (instance_path.empty()) {
        auto tree = std::make_shared<const EventTree>(build_tree(balanced_tree_spec(3, 2)));
        schedule = ExerciseSchedule::all_stages(tree);
      } else {
        schedule = load_instance(instance_path).schedule;
      }
      OperatorChoice choice;
      if (op_name == "entropic") {
        choice.kind = OperatorKind::kEntropic;
        choice.gamma = gamma;
      } else if (op_name == "multiprior") {
        choice.kind = OperatorKind::kMultiprior;
        choice.direction = direction == "sup" ? Direction::kSup : Direction::kInf;
      }
      const EvaluationOperator op = make_operator(schedule->tree(), choice, seed);
      const AxiomReport report = axiom_check(op, schedule, trials, seed);
      emit(out_path, dump(axioms_to_json(report)), out);
      return report.passed() ? kPass : kFailedCheck;
    }
    if (*gen) {
      std::vector<std::string> names;
      std::stringstream list(operators);
      for (std::string name; std::getline(list, name, ',');) names.push_back(name);
      if (names.empty() || names.size() > 2) {
        err << "dynkin gen: --operators takes one or two names\n";
        return kError;
      }
      gen_options.agent1 = parse_operator_choice(names.front());
      gen_options.agent2 = parse_operator_choice(names.back());
      gen_options.schedule =
          schedule_mode == "random" ? ScheduleMode::kRandom : ScheduleMode::kAllStages;
      emit(out_path, dump(instance_to_json(gen_instance(gen_options))), out);
      return kPass;
    }
    if (*inspect) {
      out << inspect_text(load_instance(instance_path));
      return kPass;
    }
  } catch (const Error& e) {
    err << "dynkin: " << e.what() << "\n";
    return kError;
  } catch (const Json::exception& e) {
    err << "dynkin: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

}  // namespace dynkin::cli
