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

// The selection pipeline: featurize, rank, budget, deploy in order, learn.
// Also corpus runs, Par-2 scoring and the virtual best solver.

#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "synthsel/bandit.hpp"
#include "synthsel/budget.hpp"
#include "synthsel/enumerator.hpp"
#include "synthsel/llm.hpp"

namespace synthsel {

/// A query together with its identifier and source text.
struct QueryTask {
  std::string id;
  SynthQuery query;
  std::string text;
};

/// Reads and parses one file; the id is the path relative to `root`.
QueryTask load_task(const std::filesystem::path& path, const std::filesystem::path& root);

/// Every `*.sl` file below `dir`, sorted by generic path string.
std::vector<std::filesystem::path> discover_corpus(const std::filesystem::path& dir);

struct Rewards {
  double time = 0;
  double cost = 0;
  double binary = 0;

  double get(RewardKind kind) const;
};

Rewards compute_rewards(const RewardBudget& budget, double t, double c, bool solved);

/// One solver deployment on one query.
struct DeploymentOutcome {
  SolverId solver;
  bool solved = false;
  std::optional<Candidate> candidate;
  VerificationResult verdict;
  double time = 0;  // seconds charged
  double cost = 0;  // cost units charged
  Rewards rewards;
  std::size_t attempts = 0;
  std::string reason;
};

/// The solvers available to a run.
class SolverPortfolio {
 public:
  virtual ~SolverPortfolio() = default;
  virtual std::vector<SolverId> solvers() const = 0;
  /// Runs `solver` within `slice`. Rewards are filled in by the caller.
  virtual DeploymentOutcome run(const SolverId& solver, const QueryTask& task,
                                const ScheduleEntry& slice) = 0;
  /// Called once per solved query with the winning outcome.
  virtual void on_solved(const QueryTask& /*task*/, const DeploymentOutcome& /*winner*/) {}
};

/// The enumerator and LLM-prompt pairs, run for real.
class LivePortfolio final : public SolverPortfolio {
 public:
  LivePortfolio(Verifier& verifier, bool enumerator, EnumeratorConfig config = {})
      : verifier_(verifier), enumerator_(enumerator), config_(config) {}

  /// Adds one LLM-prompt pair per style. The backend must outlive this.
  void add_model(const std::string& model, LlmBackend& backend, std::vector<int> styles);

  std::vector<SolverId> solvers() const override;
  DeploymentOutcome run(const SolverId& solver, const QueryTask& task,
                        const ScheduleEntry& slice) override;
  /// Adds the solved query to the few-shot pool.
  void on_solved(const QueryTask& task, const DeploymentOutcome& winner) override;

  std::vector<FewShotExample>& few_shot_pool() { return pool_; }
  LlmOptions llm_options;

 private:
  struct Model {
    LlmBackend* backend = nullptr;
    std::vector<int> styles;
  };
  Verifier& verifier_;
  bool enumerator_;
  EnumeratorConfig config_;
  std::map<std::string, Model> models_;
  std::vector<FewShotExample> pool_;
};

/// Precomputed per-query, per-solver results for simulated runs.
struct MatrixCell {
  bool solved = false;
  double time = 0;  // time to solve, or to give up when unsolved
  double cost = 0;
};

class OutcomeMatrix {
 public:
  std::vector<SolverId> solvers;
  /// Rows parallel to `solvers`, keyed by query id.
  std::map<std::string, std::vector<MatrixCell>> rows;
  /// A correct define-fun per query; verified when a cell reports success.
  std::map<std::string, std::string> solutions;

  const MatrixCell& at(const std::string& query, const SolverId& solver) const;

  static OutcomeMatrix load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

void to_json(nlohmann::json& j, const OutcomeMatrix& m);
void from_json(const nlohmann::json& j, OutcomeMatrix& m);

/// Answers from an OutcomeMatrix in virtual time. A solved cell succeeds when
/// its time fits the slice and, for LLM solvers, its cost fits too; the
/// stored solution is then checked by the verifier.
class MatrixPortfolio final : public SolverPortfolio {
 public:
  MatrixPortfolio(const OutcomeMatrix& matrix, Verifier& verifier)
      : matrix_(matrix), verifier_(verifier) {}

  std::vector<SolverId> solvers() const override { return matrix_.solvers; }
  DeploymentOutcome run(const SolverId& solver, const QueryTask& task,
                        const ScheduleEntry& slice) override;

 private:
  const OutcomeMatrix& matrix_;
  Verifier& verifier_;
  std::map<std::string, std::pair<std::optional<Candidate>, VerificationResult>> checked_;
};

enum class SelectorMode { Single, Double, LinearSingle, LinearDouble, FixedSolver };

std::string_view to_string(SelectorMode mode);
SelectorMode parse_selector(std::string_view text);

struct RunConfig {
  SelectorMode selector = SelectorMode::Single;
  RewardKind reward = RewardKind::Cost;
  BudgetConfig budget;
  std::optional<SolverId> fixed_solver;
  FeatureConfig features;
  std::uint64_t seed = 0;
  std::size_t runs = 1;
  /// Allowed deadline overrun before an outcome is flagged.
  double grace = 0.5;

  RewardBudget reward_budget() const { return {budget.time, budget.cost}; }
};

/// Learned state carried from query to query.
struct RunState {
  /// Records of concrete solvers; ranks the single selector and feeds budgets.
  BanditStore solver_store;
  /// First layer of the double selector: model arms and the enumerator.
  BanditStore model_store;
  /// Second layer: per-model records of prompt styles.
  std::map<std::string, BanditStore> prompt_stores;
  Rng rng{0};

  static RunState load(const std::filesystem::path& dir, std::uint64_t seed);
  /// Appends records added since load to the files under `dir`.
  void flush(const std::filesystem::path& dir);
};

struct QueryRecord {
  std::string query;
  std::vector<SolverId> ranking;
  SolverSchedule schedule;
  std::vector<DeploymentOutcome> outcomes;
  std::optional<SolverId> winner;
  bool solved = false;
  double time = 0;  // summed over outcomes
  double cost = 0;  // summed over outcomes
  /// Query-level rewards from the summed time and cost.
  Rewards rewards;
  std::vector<std::string> events;
};

/// Featurize, rank, budget, deploy in ranked order until a verified solve,
/// then record the winner's reward in the stores.
QueryRecord solve_query(const QueryTask& task, const RunConfig& config, RunState& state,
                        SolverPortfolio& portfolio);

/// Sum over records of the elapsed time when solved, else 2 * T.
double par2(const std::vector<QueryRecord>& records, double time_budget);

struct Aggregate {
  std::size_t queries = 0;
  std::size_t solved = 0;
  double percent_solved = 0;
  double par2 = 0;
  double reward_time = 0;    // totals
  double reward_cost = 0;
  double reward_binary = 0;
  double avg_time = 0;       // over solved queries
  double avg_cost = 0;

  double reward(RewardKind kind) const;
};

Aggregate aggregate(const std::vector<QueryRecord>& records, double time_budget);

struct RunReport {
  std::string label;
  std::uint64_t seed = 0;
  RewardKind reward = RewardKind::Cost;
  double time_budget = 100.0;
  double cost_budget = 100000.0;
  std::vector<QueryRecord> records;
  /// Files that could not be read or parsed.
  std::vector<std::string> skipped;

  Aggregate summary() const { return aggregate(records, time_budget); }
};

struct RunHooks {
  /// Called after each query in processing order.
  std::function<void(const QueryRecord&, std::size_t index)> on_record;
  /// Checked between queries; a set flag ends the run early.
  const std::atomic<bool>* interrupt = nullptr;
};

/// Seed of run `r` derived from the base seed.
std::uint64_t derive_seed(std::uint64_t seed, std::size_t run);

/// Shuffles the tasks with the seed and solves them in order. Uses `state`
/// as is, so a warm state carries over.
RunReport run_corpus(const std::vector<QueryTask>& tasks, const RunConfig& config,
                     SolverPortfolio& portfolio, RunState& state, const RunHooks& hooks = {});

struct MultiRunReport {
  std::vector<RunReport> runs;

  double mean_solved() const;
  double stddev_solved() const;  // population
  /// Aggregate whose fields are the means over runs.
  Aggregate mean() const;
};

/// `config.runs` runs with derived seeds, each from a fresh state built by
/// `make_state` (called with the run's seed) and a fresh portfolio.
MultiRunReport run_corpus_multi(
    const std::vector<QueryTask>& tasks, const RunConfig& config,
    const std::function<std::unique_ptr<SolverPortfolio>()>& make_portfolio,
    const std::function<RunState(std::uint64_t)>& make_state, const RunHooks& hooks = {});

struct VirtualBest {
  std::map<std::string, std::optional<SolverId>> choice;
  Aggregate aggregate;
};

/// Per query, the solver with the highest reward of `kind` under the full
/// budget; ties go to the lower time, then cost, then matrix order. Throws
/// Error when a row is incomplete.
VirtualBest virtual_best(const OutcomeMatrix& matrix, RewardKind kind,
                         const RewardBudget& budget);

// ---- serialization --------------------------------------------------------

void to_json(nlohmann::json& j, const Rewards& r);
void from_json(const nlohmann::json& j, Rewards& r);
void to_json(nlohmann::json& j, const DeploymentOutcome& o);
void from_json(const nlohmann::json& j, DeploymentOutcome& o);
void to_json(nlohmann::json& j, const QueryRecord& r);
void from_json(const nlohmann::json& j, QueryRecord& r);
void to_json(nlohmann::json& j, const Aggregate& a);
void to_json(nlohmann::json& j, const RunReport& r);
void from_json(const nlohmann::json& j, RunReport& r);
void to_json(nlohmann::json& j, const MultiRunReport& r);
void from_json(const nlohmann::json& j, MultiRunReport& r);

struct SummaryRow {
  std::string label;
  Aggregate mean;
  double solved_stddev = 0;
  std::size_t runs = 1;
  RewardKind reward = RewardKind::Cost;
};

SummaryRow summarize(const MultiRunReport& report);
/// Header plus one line per row.
std::string summary_csv(const std::vector<SummaryRow>& rows);
/// "index,cumulative_par2" for every query of `report`.
std::string cumulative_par2_csv(const RunReport& report);

/// Recomputes every aggregate from the stored per-outcome values under
/// `kind`; nothing is re-run.
MultiRunReport rescore(MultiRunReport report, RewardKind kind);

}  // namespace synthsel
