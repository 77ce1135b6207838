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
#include <random>

#include "e2e_fixture.hpp"
#include "synthsel/error.hpp"
#include "synthsel/orchestrator.hpp"
#include "test_util.hpp"

namespace synthsel {
namespace {

const SolverId kA = SolverId::llm("m", 1);
const SolverId kB = SolverId::llm("m", 2);

// Answers from a fixed table; solved outcomes carry a valid max-of-2 body.
class TablePortfolio final : public SolverPortfolio {
 public:
  struct Entry {
    bool solved;
    double time;
    double cost;
  };
  std::map<SolverId, Entry> table;
  std::vector<SolverId> calls;
  std::function<void()> on_run;

  std::vector<SolverId> solvers() const override {
    std::vector<SolverId> out;
    for (const auto& [s, e] : table) out.push_back(s);
    return out;
  }
  DeploymentOutcome run(const SolverId& solver, const QueryTask&, const ScheduleEntry&) override {
    if (on_run) on_run();
    calls.push_back(solver);
    const Entry& e = table.at(solver);
    DeploymentOutcome o;
    o.solver = solver;
    o.solved = e.solved;
    o.time = e.time;
    o.cost = e.cost;
    o.attempts = 1;
    if (e.solved) {
      o.candidate = parse_define_fun(testing::kMax2Solution);
      o.verdict.kind = VerificationResult::Kind::Valid;
    }
    return o;
  }
};

QueryTask max2_task(std::string id = "max2.sl") {
  QueryTask t;
  t.id = std::move(id);
  t.text = testing::max2_text();
  t.query = parse_query(t.text);
  return t;
}

RunConfig linear_config() {
  RunConfig c;
  c.selector = SelectorMode::LinearSingle;
  return c;
}

TEST(SolveQuery, FirstRankedSolverSolves) {
  TablePortfolio p;
  p.table = {{kA, {true, 3, 500}}, {kB, {true, 4, 600}}};
  RunState state;
  const QueryRecord rec = solve_query(max2_task(), linear_config(), state, p);
  ASSERT_EQ(rec.outcomes.size(), 1u);
  EXPECT_TRUE(rec.solved);
  EXPECT_EQ(rec.winner, rec.ranking.front());
  EXPECT_EQ(state.solver_store.size(), 1u);
  EXPECT_EQ(state.model_store.size(), 1u);
  EXPECT_EQ(state.model_store.records()[0].solver, SolverId::model_arm("m"));
  EXPECT_EQ(state.prompt_stores["m"].size(), 1u);
}

TEST(SolveQuery, SecondSolverSolvesAfterTheFirstFails) {
  TablePortfolio p;
  p.table = {{kA, {false, 50, 20000}}, {kB, {true, 4, 600}}};
  RunState state;
  const QueryTask task = max2_task();
  // a prior success of A near this query puts A first
  state.solver_store.append({featurize(task.query, {}), kA, 0.9, 2, 100});
  const QueryRecord rec = solve_query(task, linear_config(), state, p);
  ASSERT_EQ(rec.ranking.front(), kA);
  ASSERT_EQ(rec.outcomes.size(), 2u);
  EXPECT_FALSE(rec.outcomes[0].solved);
  EXPECT_TRUE(rec.outcomes[1].solved);
  EXPECT_EQ(rec.winner, kB);
  EXPECT_DOUBLE_EQ(rec.time, 54.0);
  EXPECT_DOUBLE_EQ(rec.cost, 20600.0);
  EXPECT_EQ(state.solver_store.size(), 2u);
  const SolveRecord& added = state.solver_store.records().back();
  EXPECT_EQ(added.solver, kB);
  // cost reward of the winner: (1 - 600 / 100000)^4
  EXPECT_DOUBLE_EQ(added.reward, std::pow(1.0 - 600.0 / 100000.0, 4));
}

TEST(SolveQuery, UnsolvedLeavesTheStoresUnchanged) {
  TablePortfolio p;
  p.table = {{kA, {false, 50, 100}}, {kB, {false, 50, 100}}};
  RunState state;
  const QueryRecord rec = solve_query(max2_task(), linear_config(), state, p);
  EXPECT_FALSE(rec.solved);
  EXPECT_FALSE(rec.winner.has_value());
  EXPECT_EQ(rec.outcomes.size(), 2u);
  EXPECT_TRUE(state.solver_store.empty());
  EXPECT_TRUE(state.model_store.empty());
  EXPECT_TRUE(state.prompt_stores.empty());
  EXPECT_DOUBLE_EQ(rec.rewards.binary, 0.0);
}

TEST(SolveQuery, OverrunIsFlagged) {
  TablePortfolio p;
  p.table = {{kA, {true, 80, 10}}};
  RunState state;
  const QueryRecord rec = solve_query(max2_task(), linear_config(), state, p);
  ASSERT_EQ(rec.schedule.entries.size(), 1u);
  EXPECT_TRUE(rec.events.empty());
  p.table = {{kA, {true, 101, 10}}};
  const QueryRecord late = solve_query(max2_task(), linear_config(), state, p);
  ASSERT_EQ(late.events.size(), 1u);
  EXPECT_NE(late.events[0].find("overran"), std::string::npos);
}

TEST(SolveQuery, LinearSplitIsEven) {
  TablePortfolio p;
  p.table = {{SolverId::enumerator(), {false, 25, 0.4}}, {kA, {false, 25, 0}},
             {kB, {false, 25, 0}}, {SolverId::llm("m", 3), {false, 25, 0}}};
  RunState state;
  const QueryRecord rec = solve_query(max2_task(), linear_config(), state, p);
  ASSERT_EQ(rec.schedule.entries.size(), 4u);
  for (const auto& e : rec.schedule.entries) {
    EXPECT_DOUBLE_EQ(e.time, 25.0);
    EXPECT_DOUBLE_EQ(e.cost, 25000.0);
  }
}

TEST(Par2, HandComputed) {
  QueryRecord solved;
  solved.solved = true;
  solved.time = 10;
  QueryRecord unsolved;
  unsolved.time = 37;
  EXPECT_DOUBLE_EQ(par2({solved}, 100), 10.0);
  EXPECT_DOUBLE_EQ(par2({unsolved}, 100), 200.0);
  EXPECT_DOUBLE_EQ(par2({solved, unsolved, solved}, 100), 220.0);
  EXPECT_DOUBLE_EQ(par2({}, 100), 0.0);
  EXPECT_THROW(par2({solved}, 0), Error);
  const std::vector<QueryRecord> all_unsolved(1269, unsolved);
  EXPECT_DOUBLE_EQ(par2(all_unsolved, 100), 253800.0);
}

OutcomeMatrix random_matrix(std::mt19937_64& rng, std::size_t queries, std::size_t solvers) {
  OutcomeMatrix m;
  m.solvers.push_back(SolverId::enumerator());
  for (std::size_t s = 1; s < solvers; ++s) m.solvers.push_back(SolverId::llm("m", 1 + s % 6));
  std::uniform_real_distribution<double> t(0.5, 150), c(100, 120000), u(0, 1);
  for (std::size_t q = 0; q < queries; ++q) {
    std::vector<MatrixCell> row;
    for (std::size_t s = 0; s < m.solvers.size(); ++s) row.push_back({u(rng) < 0.4, t(rng), c(rng)});
    m.rows["q" + std::to_string(q)] = row;
  }
  return m;
}

// Independent per-cell scoring under the full budget.
struct CellScore {
  bool solved;
  double time;
  Rewards rewards;
};

CellScore score_cell(const OutcomeMatrix& m, std::size_t i, const MatrixCell& cell,
                     const RewardBudget& b) {
  const double cost = m.solvers[i].kind == SolverId::Kind::Enumerator ? kEnumeratorCost : cell.cost;
  const bool solved = cell.solved && cell.time <= b.time && cost <= b.cost;
  const double time = solved ? cell.time : std::min(cell.time, b.time);
  return {solved, time, compute_rewards(b, time, std::min(cost, b.cost), solved)};
}

TEST(VirtualBest, OneSolverDominating) {
  OutcomeMatrix m;
  m.solvers = {kA, kB};
  m.rows["q0"] = {{true, 5, 100}, {true, 9, 900}};
  m.rows["q1"] = {{true, 7, 200}, {false, 50, 900}};
  const RewardBudget b;
  const auto vb = virtual_best(m, RewardKind::Cost, b);
  EXPECT_EQ(vb.choice.at("q0"), kA);
  EXPECT_EQ(vb.choice.at("q1"), kA);
  EXPECT_EQ(vb.aggregate.solved, 2u);
  EXPECT_DOUBLE_EQ(vb.aggregate.par2, 12.0);
  EXPECT_DOUBLE_EQ(vb.aggregate.reward_cost, std::pow(1 - 100 / 1e5, 4) + std::pow(1 - 200 / 1e5, 4));
}

TEST(VirtualBest, UnionOfDisjointSolvers) {
  OutcomeMatrix m;
  m.solvers = {kA, kB};
  for (int q = 0; q < 10; ++q) {
    const bool a = q % 2 == 0;
    m.rows["q" + std::to_string(q)] = {{a, 10, 1000}, {!a, 10, 1000}};
  }
  for (auto kind : {RewardKind::Time, RewardKind::Cost, RewardKind::Binary}) {
    const auto vb = virtual_best(m, kind, {});
    EXPECT_EQ(vb.aggregate.solved, 10u);
    EXPECT_DOUBLE_EQ(vb.aggregate.percent_solved, 100.0);
  }
}

TEST(VirtualBest, MatchesPerRowMaximum) {
  std::mt19937_64 rng(13);
  const RewardBudget b;
  for (int trial = 0; trial < 20; ++trial) {
    const OutcomeMatrix m = random_matrix(rng, 40, 7);
    for (auto kind : {RewardKind::Time, RewardKind::Cost, RewardKind::Binary}) {
      double total = 0;
      std::vector<double> per_solver(m.solvers.size(), 0);
      for (const auto& [q, row] : m.rows) {
        double best = 0;
        for (std::size_t i = 0; i < row.size(); ++i) {
          const double r = score_cell(m, i, row[i], b).rewards.get(kind);
          best = std::max(best, r);
          per_solver[i] += r;
        }
        total += best;
      }
      const auto vb = virtual_best(m, kind, b);
      EXPECT_NEAR(vb.aggregate.reward(kind), total, 1e-9);
      for (double s : per_solver) EXPECT_GE(vb.aggregate.reward(kind) + 1e-9, s);
    }
    // the binary optimum solves every row some solver can solve
    std::size_t solvable = 0;
    for (const auto& [q, row] : m.rows) {
      bool any = false;
      for (std::size_t i = 0; i < row.size(); ++i) any = any || score_cell(m, i, row[i], b).solved;
      solvable += any;
    }
    EXPECT_EQ(virtual_best(m, RewardKind::Binary, b).aggregate.solved, solvable);
  }
}

TEST(VirtualBest, IncompleteRowThrows) {
  OutcomeMatrix m;
  m.solvers = {kA, kB};
  m.rows["q0"] = {{true, 5, 100}};
  EXPECT_THROW(virtual_best(m, RewardKind::Cost, {}), Error);
}

class CorpusTest : public ::testing::Test {
 protected:
  testing::E2eFixture fx = testing::make_e2e_fixture();
  InternalVerifier verifier;

  RunReport run(const RunConfig& c) {
    MatrixPortfolio p(fx.matrix, verifier);
    RunState state = RunState::load({}, c.seed);
    return run_corpus(fx.tasks, c, p, state);
  }
};

TEST_F(CorpusTest, SameSeedSameReport) {
  RunConfig c;
  c.seed = 5;
  const std::string a = nlohmann::json(run(c)).dump();
  const std::string b = nlohmann::json(run(c)).dump();
  EXPECT_EQ(a, b);
  c.seed = 6;
  EXPECT_NE(a, nlohmann::json(run(c)).dump());
}

TEST_F(CorpusTest, OneQueryCorpus) {
  MatrixPortfolio p(fx.matrix, verifier);
  RunState state;
  const RunReport rep = run_corpus({fx.tasks[0]}, {}, p, state);
  EXPECT_EQ(rep.records.size(), 1u);
}

TEST_F(CorpusTest, ReportAggregatesRecomputeFromRecords) {
  RunConfig c;
  c.seed = 9;
  const RunReport rep = run(c);
  const RewardBudget b = c.reward_budget();
  std::size_t solved = 0;
  double p2 = 0, rt = 0, rc = 0, rb = 0, t = 0, cost = 0;
  for (const auto& r : rep.records) {
    double ot = 0, oc = 0;
    for (const auto& o : r.outcomes) {
      ot += o.time;
      oc += o.cost;
      EXPECT_LE(o.time, 100.0 + c.grace);
      if (o.solved) {
        ASSERT_TRUE(o.candidate.has_value());
        EXPECT_TRUE(o.verdict.is_valid());
      }
      const Rewards expect = compute_rewards(b, o.time, o.cost, o.solved);
      EXPECT_DOUBLE_EQ(o.rewards.cost, expect.cost);
    }
    EXPECT_NEAR(r.time, ot, 1e-9);
    EXPECT_NEAR(r.cost, oc, 1e-9);
    rt += r.rewards.time;
    rc += r.rewards.cost;
    rb += r.rewards.binary;
    p2 += r.solved ? r.time : 200.0;
    if (r.solved) {
      ++solved;
      t += r.time;
      cost += r.cost;
    }
  }
  const Aggregate a = rep.summary();
  EXPECT_EQ(a.queries, 60u);
  EXPECT_EQ(a.solved, solved);
  EXPECT_NEAR(a.par2, p2, 1e-9);
  EXPECT_NEAR(a.reward_time, rt, 1e-9);
  EXPECT_NEAR(a.reward_cost, rc, 1e-9);
  EXPECT_NEAR(a.reward_binary, rb, 1e-9);
  EXPECT_NEAR(a.avg_time, t / solved, 1e-9);
  EXPECT_NEAR(a.avg_cost, cost / solved, 1e-9);
  EXPECT_NEAR(a.percent_solved, 100.0 * solved / 60, 1e-9);
}

TEST_F(CorpusTest, OnlineOrdering) {
  RunConfig c;
  c.seed = 3;
  MatrixPortfolio inner(fx.matrix, verifier);
  RunState state;
  std::size_t solved_before = 0;
  RunHooks hooks;
  hooks.on_record = [&](const QueryRecord& r, std::size_t) {
    solved_before += r.solved;
    EXPECT_EQ(state.solver_store.size(), solved_before);
  };
  const RunReport rep = run_corpus(fx.tasks, c, inner, state, hooks);
  EXPECT_EQ(rep.records.size(), 60u);
}

TEST_F(CorpusTest, InterruptEndsEarly) {
  std::atomic<bool> stop{false};
  RunHooks hooks;
  hooks.interrupt = &stop;
  hooks.on_record = [&](const QueryRecord&, std::size_t i) {
    if (i == 4) stop = true;
  };
  MatrixPortfolio p(fx.matrix, verifier);
  RunState state;
  EXPECT_EQ(run_corpus(fx.tasks, {}, p, state, hooks).records.size(), 5u);
}

TEST_F(CorpusTest, MultiRunMeanAndStddev) {
  RunConfig c;
  c.runs = 4;
  c.seed = 11;
  const MultiRunReport multi = run_corpus_multi(
      fx.tasks, c, [&] { return std::make_unique<MatrixPortfolio>(fx.matrix, verifier); },
      [](std::uint64_t seed) { return RunState::load({}, seed); });
  ASSERT_EQ(multi.runs.size(), 4u);
  EXPECT_EQ(multi.runs[0].seed, 11u);
  double sum = 0, sq = 0;
  for (const auto& r : multi.runs) sum += r.summary().solved;
  const double mean = sum / 4;
  for (const auto& r : multi.runs) sq += std::pow(r.summary().solved - mean, 2);
  EXPECT_DOUBLE_EQ(multi.mean_solved(), mean);
  EXPECT_NEAR(multi.stddev_solved(), std::sqrt(sq / 4), 1e-12);
  const auto row = summarize(multi);
  EXPECT_EQ(row.runs, 4u);
  const std::string csv = summary_csv({row});
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "selector,reward_kind,percent_solved,solved,par2,reward_cost,reward_time,"
            "reward_binary,avg_time,avg_cost,solved_stddev,runs");
}

TEST_F(CorpusTest, CumulativePar2) {
  const RunReport rep = run({});
  const std::string csv = cumulative_par2_csv(rep);
  const auto last_line = csv.substr(csv.rfind('\n', csv.size() - 2) + 1);
  char expect[64];
  std::snprintf(expect, sizeof expect, "60,%.4f\n", rep.summary().par2);
  EXPECT_EQ(last_line, expect);
}

TEST_F(CorpusTest, Rescore) {
  RunConfig c;
  c.reward = RewardKind::Time;
  MultiRunReport multi;
  multi.runs.push_back(run(c));
  const MultiRunReport as_cost = rescore(multi, RewardKind::Cost);
  double total = 0;
  for (const auto& r : as_cost.runs[0].records) {
    total += compute_rewards({100, 100000}, r.time, r.cost, r.solved).cost;
  }
  EXPECT_EQ(as_cost.runs[0].reward, RewardKind::Cost);
  EXPECT_NEAR(as_cost.mean().reward_cost, total, 1e-9);
  EXPECT_EQ(nlohmann::json(rescore(multi, RewardKind::Time)).dump(),
            nlohmann::json(multi).dump());
  EXPECT_EQ(nlohmann::json(rescore(as_cost, RewardKind::Cost)).dump(),
            nlohmann::json(as_cost).dump());
  const MultiRunReport empty = rescore({}, RewardKind::Binary);
  EXPECT_EQ(empty.mean().solved, 0u);
  EXPECT_DOUBLE_EQ(empty.mean().reward_binary, 0.0);
}

TEST_F(CorpusTest, ReportJsonRoundTrip) {
  MultiRunReport multi;
  multi.runs.push_back(run({}));
  const auto j = nlohmann::json(multi);
  const MultiRunReport back = j.get<MultiRunReport>();
  EXPECT_EQ(nlohmann::json(back).dump(), j.dump());
}

}  // namespace
}  // namespace synthsel
