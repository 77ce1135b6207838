// Copyright 2026 The synthsel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include <random>

#include "synthsel/bandit.hpp"
#include "synthsel/budget.hpp"
#include "synthsel/enumerator.hpp"
#include "synthsel/features.hpp"
#include "synthsel/verify.hpp"

namespace {

using namespace synthsel;

constexpr const char* kMax3 =
    "(set-logic LIA)\n"
    "(synth-fun f ((v0 Int) (v1 Int) (v2 Int)) Int)\n"
    "(declare-var v0 Int)\n(declare-var v1 Int)\n(declare-var v2 Int)\n"
    "(constraint (>= (f v0 v1 v2) v0))\n"
    "(constraint (>= (f v0 v1 v2) v1))\n"
    "(constraint (>= (f v0 v1 v2) v2))\n"
    "(constraint (or (= v0 (f v0 v1 v2)) (or (= v1 (f v0 v1 v2)) (= v2 (f v0 v1 v2)))))\n"
    "(check-synth)\n";
constexpr const char* kMax2 =
    "(set-logic LIA)\n"
    "(synth-fun f ((v0 Int) (v1 Int)) Int)\n"
    "(declare-var v0 Int)\n(declare-var v1 Int)\n"
    "(constraint (>= (f v0 v1) v0))\n"
    "(constraint (>= (f v0 v1) v1))\n"
    "(constraint (or (= v0 (f v0 v1)) (= v1 (f v0 v1))))\n"
    "(check-synth)\n";
constexpr const char* kMax3Solution =
    "(define-fun f ((v0 Int) (v1 Int) (v2 Int)) Int "
    "(ite (>= v0 v1) (ite (>= v0 v2) v0 v2) (ite (>= v1 v2) v1 v2)))";

std::vector<SolverId> portfolio() {
  std::vector<SolverId> s{SolverId::enumerator()};
  for (const char* m : {"a", "b"}) {
    for (int i = 1; i <= 6; ++i) s.push_back(SolverId::llm(m, i));
  }
  return s;
}

BanditStore random_store(std::size_t n, const FeatureVector& like) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  const auto solvers = portfolio();
  BanditStore store;
  for (std::size_t i = 0; i < n; ++i) {
    FeatureVector f = like;
    for (double& v : f.values) v = u(rng) * 4;
    const SolverId& s = solvers[i % solvers.size()];
    store.append({f, s, u(rng), u(rng) * 100,
                  s.kind == SolverId::Kind::Enumerator ? kEnumeratorCost : u(rng) * 50000});
  }
  return store;
}

void BM_ParseQuery(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse_query(kMax3));
}
BENCHMARK(BM_ParseQuery);

void BM_Featurize(benchmark::State& state) {
  const SynthQuery q = parse_query(kMax3);
  for (auto _ : state) benchmark::DoNotOptimize(featurize(q, {}));
}
BENCHMARK(BM_Featurize);

void BM_VerifyInternal(benchmark::State& state) {
  const SynthQuery q = parse_query(kMax3);
  const Candidate c = parse_define_fun(kMax3Solution);
  for (auto _ : state) benchmark::DoNotOptimize(check_candidate_internal(q, c));
}
BENCHMARK(BM_VerifyInternal)->Unit(benchmark::kMillisecond);

void BM_RankSingle(benchmark::State& state) {
  const FeatureVector f = featurize(parse_query(kMax3), {});
  const BanditStore store = random_store(static_cast<std::size_t>(state.range(0)), f);
  const auto solvers = portfolio();
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(rank_single(store, f, 15, solvers, rng));
}
BENCHMARK(BM_RankSingle)->Arg(100)->Arg(1000)->Arg(10000);

void BM_BuildSchedule(benchmark::State& state) {
  const FeatureVector f = featurize(parse_query(kMax3), {});
  const BanditStore store = random_store(static_cast<std::size_t>(state.range(0)), f);
  const auto solvers = portfolio();
  for (auto _ : state) benchmark::DoNotOptimize(build_schedule(solvers, store, f, {}));
}
BENCHMARK(BM_BuildSchedule)->Arg(100)->Arg(1000);

void BM_CegisMaxOfTwo(benchmark::State& state) {
  const SynthQuery q = parse_query(kMax2);
  const Grammar g = default_grammar(q);
  InternalVerifier v;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cegis_solve(q, g, Clock::now() + std::chrono::seconds(30), v));
  }
}
BENCHMARK(BM_CegisMaxOfTwo)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
