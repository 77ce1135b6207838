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


#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <random>

#include "synthsel/budget.hpp"
#include "synthsel/error.hpp"

namespace synthsel {
namespace {

// Root of e^(-rate a) - e^(-rate B) = delta by bisection; independent of the
// closed form under test.
double tail_root(double rate, double budget, double delta) {
  double lo = 0, hi = budget;
  auto g = [&](double a) { return std::exp(-rate * a) - std::exp(-rate * budget) - delta; };
  if (g(lo) <= 0) return 0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0 ? lo : hi) = mid;
  }
  return hi;
}

// Rate whose allocate_one share of `budget` is `fraction` of it. The share
// is zero for very slow rates and falls off for fast ones, so step down from
// a fast rate until the share is exceeded, then bisect that bracket.
double rate_for_share(double fraction, double budget, double delta) {
  const double target = fraction * budget;
  double hi = 1e3;
  double lo = hi;
  while (tail_root(lo, budget, delta) < target) {
    hi = lo;
    lo /= 1.5;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (tail_root(mid, budget, delta) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

SolveRecord sample(const SolverId& s, double cost, double time) {
  return SolveRecord{FeatureVector{{0.0}}, s, 1.0, time, cost};
}

const FeatureVector kAt0{{0.0}};

TEST(Fit, Examples) {
  const std::vector<double> three{2, 2, 2};
  EXPECT_EQ(fit_exponential(three).rate, 0.5);
  EXPECT_EQ(fit_exponential(three).samples, 3u);
  const std::vector<double> one{10};
  EXPECT_EQ(fit_exponential(one).rate, 0.1);
  for (double u : {0.3, 7.0, 1234.5}) {
    const std::vector<double> constant(17, u);
    EXPECT_DOUBLE_EQ(fit_exponential(constant).rate, 1.0 / u);
  }
  EXPECT_THROW(fit_exponential(std::vector<double>{}), Error);
  EXPECT_THROW(fit_exponential(std::vector<double>{1, 0}), Error);
  EXPECT_THROW(fit_exponential(std::vector<double>{1, -2}), Error);
}

TEST(Fit, RecoversRateFromDraws) {
  std::mt19937_64 rng(20260);
  std::exponential_distribution<double> d(0.02);
  std::vector<double> xs(10000);
  for (auto& x : xs) x = d(rng);
  const double rate = fit_exponential(xs).rate;
  EXPECT_GE(rate, 0.019);
  EXPECT_LE(rate, 0.021);
}

TEST(AllocateOne, ClosedFormExample) {
  const double a = allocate_one({0.01, 1}, 1000, 0.05);
  EXPECT_NEAR(a, 299.5, 0.05);
  EXPECT_NEAR(a, tail_root(0.01, 1000, 0.05), 1e-6);
  EXPECT_LE(std::exp(-0.01 * a) - std::exp(-10.0), 0.05 + 1e-12);
}

TEST(AllocateOne, Limits) {
  EXPECT_LT(allocate_one({0.01, 1}, 1000, 0.999999), 0.01);
  const double cheap = allocate_one({1e6, 1}, 1000, 0.05);
  EXPECT_NEAR(cheap, -std::log(0.05) / 1e6, 1e-9);
  EXPECT_LT(cheap, 1e-3);
  // a slow solver is capped at the budget
  EXPECT_LE(allocate_one({1e-9, 1}, 1000, 0.05), 1000.0);
  EXPECT_THROW(allocate_one({0.01, 1}, 0, 0.05), Error);
  EXPECT_THROW(allocate_one({0.01, 1}, 10, 1.0), Error);
}

TEST(AllocateOne, Monotone) {
  double prev = 1e18;
  for (double delta = 0.01; delta < 0.99; delta += 0.01) {
    const double a = allocate_one({0.05, 1}, 100, delta);
    EXPECT_LE(a, prev);
    prev = a;
  }
  prev = 0;
  for (double b = 1; b < 500; b += 7) {
    const double a = allocate_one({0.05, 1}, b, 0.05);
    EXPECT_GE(a, prev);
    prev = a;
  }
}

TEST(AllocateOne, TailBoundOnRandomTriples) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> lr(-6, 2), lb(-1, 5), ld(0.001, 0.999);
  for (int i = 0; i < 2000; ++i) {
    const double rate = std::pow(10, lr(rng));
    const double b = std::pow(10, lb(rng));
    const double delta = ld(rng);
    const double a = allocate_one({rate, 1}, b, delta);
    EXPECT_GE(a, 0);
    EXPECT_LE(a, b);
    EXPECT_LE(std::exp(-rate * a) - std::exp(-rate * b), delta + 1e-9);
  }
}

TEST(AllocateSequence, SingleSolverTakesAll) {
  BanditStore store;
  const SolverId s = SolverId::llm("m", 1);
  store.append(sample(s, 5, 1));
  const std::vector<SolverId> ranking{s};
  const auto out = allocate_sequence(ranking, store, kAt0, 15, 1000, 0.05, BudgetDimension::Cost);
  EXPECT_EQ(out, std::vector<double>{1000});
}

TEST(AllocateSequence, GreedyRemainder) {
  const double budget = 1000, delta = 0.05;
  const double rate = rate_for_share(0.6, budget, delta);
  const SolverId a = SolverId::llm("m", 1), b = SolverId::llm("m", 2);
  BanditStore store;
  store.append(sample(a, 1 / rate, 1));
  store.append(sample(b, 1 / rate, 1));
  const std::vector<SolverId> ranking{a, b};
  const auto out =
      allocate_sequence(ranking, store, kAt0, 15, budget, delta, BudgetDimension::Cost);
  EXPECT_NEAR(out[0], 600, 1e-6);
  EXPECT_NEAR(out[1], 400, 1e-6);
}

TEST(AllocateSequence, ExhaustionZeroesTheRest) {
  const double budget = 1000, delta = 0.05;
  const double rate = rate_for_share(0.5, budget, delta);
  const SolverId a = SolverId::llm("m", 1), b = SolverId::llm("m", 2), c = SolverId::llm("m", 3);
  BanditStore store;
  for (const auto& s : {a, b, c}) store.append(sample(s, 1 / rate, 1));
  const std::vector<SolverId> ranking{a, b, c};
  const auto out =
      allocate_sequence(ranking, store, kAt0, 15, budget, delta, BudgetDimension::Cost);
  EXPECT_NEAR(out[0], 500, 1e-6);
  EXPECT_NEAR(out[0] + out[1], 1000, 1e-9);
  EXPECT_EQ(out[2], 0.0);
}

TEST(AllocateSequence, SamplelessSolversSplitEvenly) {
  const SolverId a = SolverId::llm("m", 1), b = SolverId::llm("m", 2), c = SolverId::llm("m", 3);
  const std::vector<SolverId> ranking{a, b, c};
  const auto out = allocate_sequence(ranking, BanditStore{}, kAt0, 15, 90, 0.05,
                                     BudgetDimension::Time);
  for (double v : out) EXPECT_DOUBLE_EQ(v, 30.0);
}

TEST(AllocateSequence, UsesOnlyNearestSamplesOfTheSolver) {
  const SolverId a = SolverId::llm("m", 1), b = SolverId::llm("m", 2);
  BanditStore store;
  store.append({FeatureVector{{0.0}}, a, 1, 1, 10});
  store.append({FeatureVector{{100.0}}, a, 1, 1, 10000});
  store.append({FeatureVector{{0.0}}, b, 1, 1, 50});
  const std::vector<SolverId> ranking{a, b};
  const auto out =
      allocate_sequence(ranking, store, kAt0, 1, 100000, 0.05, BudgetDimension::Cost);
  EXPECT_NEAR(out[0], allocate_one({0.1, 1}, 100000, 0.05), 1e-9);
}

TEST(Schedule, ZeroCostMeansZeroTime) {
  const SolverId a = SolverId::llm("m", 1), b = SolverId::llm("m", 2), c = SolverId::llm("m", 3);
  BanditStore store;
  const double rate = rate_for_share(0.5, 1000, 0.05);
  for (const auto& s : {a, b, c}) store.append(sample(s, 1 / rate, 1));
  const std::vector<SolverId> ranking{a, b, c};
  BudgetConfig cfg;
  cfg.cost = 1000;
  const SolverSchedule s = build_schedule(ranking, store, kAt0, cfg);
  EXPECT_EQ(s.entries[2].cost, 0.0);
  EXPECT_EQ(s.entries[2].time, 0.0);
  EXPECT_NEAR(s.total_time(), cfg.time, 1e-9);
}

TEST(Schedule, EnumeratorOnly) {
  const std::vector<SolverId> ranking{SolverId::enumerator()};
  const SolverSchedule s = build_schedule(ranking, BanditStore{}, kAt0, BudgetConfig{});
  ASSERT_EQ(s.entries.size(), 1u);
  EXPECT_EQ(s.entries[0].time, 100.0);
  EXPECT_EQ(s.entries[0].cost, 100000.0);
}

TEST(Schedule, FreedTimeGoesToFundedSolvers) {
  const SolverId a = SolverId::llm("m", 1), b = SolverId::llm("m", 2), c = SolverId::llm("m", 3);
  const double rate = rate_for_share(0.5, 1000, 0.05);
  BanditStore store;
  for (const auto& s : {a, b, c}) store.append(sample(s, 1 / rate, 4));
  BudgetConfig cfg;
  cfg.cost = 1000;
  const std::vector<SolverId> ranking{a, b, c};
  const SolverSchedule s = build_schedule(ranking, store, kAt0, cfg);
  // The time walk runs over the funded prefix only, so b absorbs c's share.
  const std::vector<SolverId> funded{a, b};
  const auto times = allocate_sequence(funded, store, kAt0, cfg.k, cfg.time, cfg.delta_time,
                                       BudgetDimension::Time);
  EXPECT_DOUBLE_EQ(s.entries[0].time, times[0]);
  EXPECT_DOUBLE_EQ(s.entries[1].time, times[1]);
  EXPECT_NEAR(s.entries[0].time + s.entries[1].time, cfg.time, 1e-9);
}

TEST(Schedule, RandomInvariants) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<SolverId> solvers{SolverId::enumerator()};
    for (int s = 1; s <= 6; ++s) solvers.push_back(SolverId::llm("m", s));
    std::shuffle(solvers.begin(), solvers.end(), rng);
    BanditStore store;
    const int n = static_cast<int>(u(rng) * 40);
    for (int i = 0; i < n; ++i) {
      const SolverId& s = solvers[static_cast<std::size_t>(u(rng) * solvers.size())];
      store.append({FeatureVector{{u(rng), u(rng)}}, s, u(rng), u(rng) * 100,
                    s.kind == SolverId::Kind::Enumerator ? 0.4 : u(rng) * 100000});
    }
    BudgetConfig cfg;
    const SolverSchedule sch = build_schedule(solvers, store, FeatureVector{{u(rng), u(rng)}}, cfg);
    EXPECT_LE(sch.total_cost(), cfg.cost * (1 + 1e-12));
    EXPECT_LE(sch.total_time(), cfg.time * (1 + 1e-12));
    EXPECT_NEAR(sch.total_cost(), cfg.cost, 1e-6);
    for (const auto& e : sch.entries) {
      EXPECT_GE(e.cost, 0.0);
      EXPECT_GE(e.time, 0.0);
      if (e.cost == 0) EXPECT_EQ(e.time, 0.0);
    }
  }
}

TEST(Schedule, LinearSplit) {
  const std::vector<SolverId> ranking{SolverId::enumerator(), SolverId::llm("m", 1),
                                      SolverId::llm("m", 2), SolverId::llm("m", 3)};
  const SolverSchedule s = build_linear_schedule(ranking, BudgetConfig{});
  for (const auto& e : s.entries) {
    EXPECT_EQ(e.time, 25.0);
    EXPECT_EQ(e.cost, 25000.0);
  }
}

TEST(Schedule, JsonRoundTrip) {
  const std::vector<SolverId> ranking{SolverId::enumerator(), SolverId::llm("m", 4)};
  const SolverSchedule s = build_linear_schedule(ranking, BudgetConfig{});
  const nlohmann::json j = s;
  const auto back = j.get<SolverSchedule>();
  ASSERT_EQ(back.entries.size(), 2u);
  EXPECT_EQ(back.entries[1].solver, SolverId::llm("m", 4));
  EXPECT_EQ(back.entries[1].time, 50.0);
}

}  // namespace
}  // namespace synthsel
