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

#include <benchmark/benchmark.h>

#include "dynkin/io.hpp"
#include "dynkin/stopping.hpp"
#include "dynkin/verify.hpp"

namespace {

dynkin::GameInstance instance(int depth, int branching, const char* op) {
  dynkin::GenOptions o;
  o.seed = 42;
  o.depth = depth;
  o.branching = branching;
  o.agent1 = dynkin::parse_operator_choice(op);
  o.agent2 = dynkin::parse_operator_choice("entropic:1");
  return dynkin::gen_instance(o);
}

void BM_Solve(benchmark::State& state) {
  const auto g = instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                          "linear");
  for (auto _ : state) benchmark::DoNotOptimize(dynkin::solve(g));
  state.counters["nodes"] = static_cast<double>(g.tree().size());
}
BENCHMARK(BM_Solve)->Args({4, 2})->Args({3, 3})->Args({6, 2})->Args({8, 2})->Args({5, 4});

void BM_ValueFamily(benchmark::State& state) {
  const auto g = instance(static_cast<int>(state.range(0)), 3, "multiprior-inf");
  for (auto _ : state) {
    benchmark::DoNotOptimize(dynkin::value_family(g.rho1, g.x1, g.schedule));
  }
  state.counters["nodes"] = static_cast<double>(g.tree().size());
}
BENCHMARK(BM_ValueFamily)->DenseRange(2, 6, 2);

void BM_EnumerateTheta(benchmark::State& state) {
  const auto g = instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                          "linear");
  for (auto _ : state) {
    std::uint64_t n = 0;
    dynkin::for_each_theta(g.schedule, std::nullopt, [&](const dynkin::StoppingTime&) { ++n; });
    benchmark::DoNotOptimize(n);
  }
  state.counters["strategies"] = static_cast<double>(dynkin::count_theta(*g.schedule));
}
BENCHMARK(BM_EnumerateTheta)->Args({4, 2})->Args({3, 3})->Args({5, 2});

void BM_NashCheck(benchmark::State& state) {
  const auto g = instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                          "entropic:2");
  const auto r = dynkin::solve(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dynkin::nash_check(g, r.tau1_star, r.tau2_star));
  }
}
BENCHMARK(BM_NashCheck)->Args({4, 2})->Args({3, 3});

}  // namespace

BENCHMARK_MAIN();
