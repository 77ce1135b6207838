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

#include "synthsel/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "synthsel/error.hpp"

namespace synthsel {

namespace fs = std::filesystem;

QueryTask load_task(const fs::path& path, const fs::path& root) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  QueryTask t;
  t.text = ss.str();
  t.id = root.empty() ? path.generic_string() : path.lexically_relative(root).generic_string();
  t.query = parse_query(t.text);
  return t;
}

std::vector<fs::path> discover_corpus(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".sl") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) {
    return a.generic_string() < b.generic_string();
  });
  return out;
}

double Rewards::get(RewardKind kind) const {
  switch (kind) {
    case RewardKind::Time:
      return time;
    case RewardKind::Cost:
      return cost;
    case RewardKind::Binary:
      return binary;
  }
  return 0;
}

Rewards compute_rewards(const RewardBudget& budget, double t, double c, bool solved) {
  return {reward(RewardKind::Time, budget, t, c, solved),
          reward(RewardKind::Cost, budget, t, c, solved),
          reward(RewardKind::Binary, budget, t, c, solved)};
}

// ---- live portfolio -------------------------------------------------------

void LivePortfolio::add_model(const std::string& model, LlmBackend& backend,
                              std::vector<int> styles) {
  for (int s : styles) prompt_style(s);  // validates
  models_[model] = {&backend, std::move(styles)};
}

std::vector<SolverId> LivePortfolio::solvers() const {
  std::vector<SolverId> out;
  if (enumerator_) out.push_back(SolverId::enumerator());
  for (const auto& [name, m] : models_) {
    for (int s : m.styles) out.push_back(SolverId::llm(name, s));
  }
  return out;
}

DeploymentOutcome LivePortfolio::run(const SolverId& solver, const QueryTask& task,
                                     const ScheduleEntry& slice) {
  DeploymentOutcome o;
  o.solver = solver;
  const auto start = Clock::now();
  if (solver.kind == SolverId::Kind::Enumerator) {
    if (!enumerator_) throw Error("the enumerator is not part of this portfolio");
    const auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(slice.time));
    try {
      const Grammar g = task.query.grammar ? *task.query.grammar : default_grammar(task.query);
      CegisResult r = cegis_solve(task.query, g, deadline, verifier_, config_);
      o.solved = r.status == CegisResult::Status::Solved;
      o.candidate = r.candidate;
      o.verdict = r.verdict;
      o.attempts = r.iterations + 1;
      o.reason = std::string(to_string(r.status));
      if (!r.reason.empty()) o.reason += ": " + r.reason;
    } catch (const Error& e) {
      o.reason = e.what();
    }
    o.time = std::chrono::duration<double>(Clock::now() - start).count();
    o.cost = kEnumeratorCost;
    return o;
  }
  const auto it = models_.find(solver.model);
  if (it == models_.end() ||
      std::find(it->second.styles.begin(), it->second.styles.end(), solver.style) ==
          it->second.styles.end()) {
    throw Error("solver " + to_string(solver) + " is not part of this portfolio");
  }
  LlmOutcome r = solve_with_llm(task.query, task.text, solver, {slice.time, slice.cost},
                                *it->second.backend, verifier_, pool_, llm_options);
  o.solved = r.solved;
  o.candidate = r.candidate;
  o.verdict = r.verdict;
  o.time = r.time;
  o.cost = r.cost;
  o.attempts = r.attempts;
  o.reason = r.reason;
  return o;
}

void LivePortfolio::on_solved(const QueryTask& task, const DeploymentOutcome& winner) {
  if (!winner.candidate) return;
  pool_.push_back({task.query.logic, task.text, print_define_fun(*winner.candidate)});
}

// ---- outcome matrix -------------------------------------------------------

const MatrixCell& OutcomeMatrix::at(const std::string& query, const SolverId& solver) const {
  const auto row = rows.find(query);
  if (row == rows.end()) throw Error("outcome matrix has no row for " + query);
  const auto col = std::find(solvers.begin(), solvers.end(), solver);
  if (col == solvers.end()) throw Error("outcome matrix has no column for " + to_string(solver));
  const auto i = static_cast<std::size_t>(col - solvers.begin());
  if (i >= row->second.size()) throw Error("outcome matrix row " + query + " is incomplete");
  return row->second[i];
}

void to_json(nlohmann::json& j, const OutcomeMatrix& m) {
  nlohmann::json rows = nlohmann::json::object();
  for (const auto& [q, cells] : m.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& c : cells) r.push_back({{"solved", c.solved}, {"time", c.time}, {"cost", c.cost}});
    rows[q] = std::move(r);
  }
  j = nlohmann::json{{"solvers", m.solvers}, {"rows", rows}, {"solutions", m.solutions}};
}

void from_json(const nlohmann::json& j, OutcomeMatrix& m) {
  j.at("solvers").get_to(m.solvers);
  m.rows.clear();
  for (const auto& [q, cells] : j.at("rows").items()) {
    auto& row = m.rows[q];
    for (const auto& c : cells) {
      row.push_back({c.at("solved").get<bool>(), c.at("time").get<double>(),
                     c.at("cost").get<double>()});
    }
  }
  m.solutions.clear();
  if (j.contains("solutions")) j["solutions"].get_to(m.solutions);
}

OutcomeMatrix OutcomeMatrix::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in).get<OutcomeMatrix>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void OutcomeMatrix::save(const fs::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << nlohmann::json(*this).dump(1) << '\n';
}

DeploymentOutcome MatrixPortfolio::run(const SolverId& solver, const QueryTask& task,
                                       const ScheduleEntry& slice) {
  const MatrixCell& cell = matrix_.at(task.id, solver);
  const bool enumerator = solver.kind == SolverId::Kind::Enumerator;
  DeploymentOutcome o;
  o.solver = solver;
  o.attempts = 1;
  bool ok = cell.solved && cell.time <= slice.time && (enumerator || cell.cost <= slice.cost);
  o.time = ok ? cell.time : std::min(cell.time, slice.time);
  o.cost = enumerator ? kEnumeratorCost : ok ? cell.cost : std::min(cell.cost, slice.cost);
  if (!ok) {
    o.reason = cell.solved ? "slice too small" : "no solution";
    return o;
  }
  auto found = checked_.find(task.id);
  if (found == checked_.end()) {
    std::optional<Candidate> cand;
    VerificationResult v;
    const auto sol = matrix_.solutions.find(task.id);
    if (sol == matrix_.solutions.end()) {
      v = VerificationResult::unknown("matrix", "no stored solution");
    } else {
      try {
        cand = extract_candidate(sol->second, AnswerForm::Smtlib, task.query.fun).candidate;
        v = verifier_.check(task.query, *cand, Clock::now() + std::chrono::seconds(60));
      } catch (const ExtractionError& e) {
        v = VerificationResult::unknown("matrix", e.what());
      }
    }
    found = checked_.emplace(task.id, std::make_pair(std::move(cand), std::move(v))).first;
  }
  o.verdict = found->second.second;
  if (o.verdict.is_valid()) {
    o.solved = true;
    o.candidate = found->second.first;
    o.reason = "verified";
  } else {
    o.reason = "stored solution rejected: " + to_string(o.verdict);
  }
  return o;
}

// ---- selection ------------------------------------------------------------

std::string_view to_string(SelectorMode mode) {
  switch (mode) {
    case SelectorMode::Single:
      return "single";
    case SelectorMode::Double:
      return "double";
    case SelectorMode::LinearSingle:
      return "linear-single";
    case SelectorMode::LinearDouble:
      return "linear-double";
    case SelectorMode::FixedSolver:
      return "fixed-solver";
  }
  return "?";
}

SelectorMode parse_selector(std::string_view text) {
  for (auto m : {SelectorMode::Single, SelectorMode::Double, SelectorMode::LinearSingle,
                 SelectorMode::LinearDouble, SelectorMode::FixedSolver}) {
    if (to_string(m) == text) return m;
  }
  throw Error("unknown selector '" + std::string(text) + "'");
}

namespace {

const fs::path kSolverStore = "solvers.jsonl";
const fs::path kModelStore = "models.jsonl";
const fs::path kPromptDir = "prompts";

std::vector<SolverId> rank(const FeatureVector& f, const RunConfig& config, RunState& state,
                           const std::vector<SolverId>& solvers) {
  const std::size_t k = config.budget.k;
  switch (config.selector) {
    case SelectorMode::Single:
    case SelectorMode::LinearSingle:
      return rank_single(state.solver_store, f, k, solvers, state.rng);
    case SelectorMode::Double:
    case SelectorMode::LinearDouble: {
      std::vector<SolverId> arms;
      std::map<std::string, std::vector<int>> prompts;
      for (const auto& s : solvers) {
        const SolverId a = s.arm();
        if (std::find(arms.begin(), arms.end(), a) == arms.end()) arms.push_back(a);
        if (s.kind == SolverId::Kind::Llm) prompts[s.model].push_back(s.style);
      }
      return rank_double(state.model_store, state.prompt_stores, f, k, arms, prompts, state.rng);
    }
    case SelectorMode::FixedSolver:
      if (!config.fixed_solver) throw Error("fixed-solver selector needs a solver");
      if (std::find(solvers.begin(), solvers.end(), *config.fixed_solver) == solvers.end()) {
        throw Error("solver " + to_string(*config.fixed_solver) + " is not in the portfolio");
      }
      return {*config.fixed_solver};
  }
  return {};
}

}  // namespace

RunState RunState::load(const fs::path& dir, std::uint64_t seed) {
  RunState s;
  s.rng.seed(seed);
  if (dir.empty()) return s;
  s.solver_store = BanditStore::load(dir / kSolverStore);
  s.model_store = BanditStore::load(dir / kModelStore);
  if (fs::is_directory(dir / kPromptDir)) {
    for (const auto& e : fs::directory_iterator(dir / kPromptDir)) {
      if (e.path().extension() != ".jsonl") continue;
      s.prompt_stores[e.path().stem().string()] = BanditStore::load(e.path());
    }
  }
  return s;
}

void RunState::flush(const fs::path& dir) {
  fs::create_directories(dir / kPromptDir);
  solver_store.flush(dir / kSolverStore);
  model_store.flush(dir / kModelStore);
  for (auto& [model, store] : prompt_stores) {
    store.flush(dir / kPromptDir / (model + ".jsonl"));
  }
}

QueryRecord solve_query(const QueryTask& task, const RunConfig& config, RunState& state,
                        SolverPortfolio& portfolio) {
  QueryRecord rec;
  rec.query = task.id;
  const FeatureVector f = featurize(task.query, config.features);
  rec.ranking = rank(f, config, state, portfolio.solvers());

  switch (config.selector) {
    case SelectorMode::Single:
    case SelectorMode::Double:
      rec.schedule = build_schedule(rec.ranking, state.solver_store, f, config.budget);
      break;
    case SelectorMode::LinearSingle:
    case SelectorMode::LinearDouble:
      rec.schedule = build_linear_schedule(rec.ranking, config.budget);
      break;
    case SelectorMode::FixedSolver:
      rec.schedule.entries = {{rec.ranking.front(), config.budget.time, config.budget.cost}};
      break;
  }

  const RewardBudget budget = config.reward_budget();
  for (const auto& slice : rec.schedule.entries) {
    const bool llm = slice.solver.kind == SolverId::Kind::Llm;
    if (slice.time <= 0 || (llm && slice.cost <= 0)) continue;
    DeploymentOutcome o = portfolio.run(slice.solver, task, slice);
    o.rewards = compute_rewards(budget, o.time, o.cost, o.solved);
    if (o.time > slice.time + config.grace) {
      rec.events.push_back(to_string(o.solver) + " overran its slice by " +
                           std::to_string(o.time - slice.time) + " s");
    }
    rec.time += o.time;
    rec.cost += o.cost;
    const bool solved = o.solved;
    rec.outcomes.push_back(std::move(o));
    if (solved) break;
  }

  if (!rec.outcomes.empty() && rec.outcomes.back().solved) {
    const DeploymentOutcome& w = rec.outcomes.back();
    rec.solved = true;
    rec.winner = w.solver;
    SolveRecord r{f, w.solver, w.rewards.get(config.reward), w.time, w.cost};
    state.solver_store.append(r);
    if (w.solver.kind == SolverId::Kind::Llm) state.prompt_stores[w.solver.model].append(r);
    r.solver = w.solver.arm();
    state.model_store.append(std::move(r));
    portfolio.on_solved(task, w);
  }
  rec.rewards = compute_rewards(budget, rec.time, rec.cost, rec.solved);
  return rec;
}

// ---- scoring --------------------------------------------------------------

double par2(const std::vector<QueryRecord>& records, double time_budget) {
  if (!(time_budget > 0)) throw Error("time budget must be positive");
  double s = 0;
  for (const auto& r : records) s += r.solved ? r.time : 2.0 * time_budget;
  return s;
}

double Aggregate::reward(RewardKind kind) const {
  switch (kind) {
    case RewardKind::Time:
      return reward_time;
    case RewardKind::Cost:
      return reward_cost;
    case RewardKind::Binary:
      return reward_binary;
  }
  return 0;
}

Aggregate aggregate(const std::vector<QueryRecord>& records, double time_budget) {
  Aggregate a;
  a.queries = records.size();
  a.par2 = par2(records, time_budget);
  for (const auto& r : records) {
    a.reward_time += r.rewards.time;
    a.reward_cost += r.rewards.cost;
    a.reward_binary += r.rewards.binary;
    if (!r.solved) continue;
    ++a.solved;
    a.avg_time += r.time;
    a.avg_cost += r.cost;
  }
  if (a.queries > 0) a.percent_solved = 100.0 * static_cast<double>(a.solved) / a.queries;
  if (a.solved > 0) {
    a.avg_time /= static_cast<double>(a.solved);
    a.avg_cost /= static_cast<double>(a.solved);
  }
  return a;
}

std::uint64_t derive_seed(std::uint64_t seed, std::size_t run) {
  if (run == 0) return seed;
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * run;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RunReport run_corpus(const std::vector<QueryTask>& tasks, const RunConfig& config,
                     SolverPortfolio& portfolio, RunState& state, const RunHooks& hooks) {
  RunReport rep;
  rep.label = config.selector == SelectorMode::FixedSolver && config.fixed_solver
                  ? to_string(*config.fixed_solver)
                  : std::string(to_string(config.selector));
  rep.seed = config.seed;
  rep.reward = config.reward;
  rep.time_budget = config.budget.time;
  rep.cost_budget = config.budget.cost;

  std::vector<std::size_t> order(tasks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng shuffle(config.seed);
  std::shuffle(order.begin(), order.end(), shuffle);

  for (std::size_t i = 0; i < order.size(); ++i) {
    if (hooks.interrupt && hooks.interrupt->load()) break;
    rep.records.push_back(solve_query(tasks[order[i]], config, state, portfolio));
    if (hooks.on_record) hooks.on_record(rep.records.back(), i);
  }
  return rep;
}

double MultiRunReport::mean_solved() const {
  if (runs.empty()) return 0;
  double s = 0;
  for (const auto& r : runs) s += static_cast<double>(r.summary().solved);
  return s / static_cast<double>(runs.size());
}

double MultiRunReport::stddev_solved() const {
  if (runs.empty()) return 0;
  const double m = mean_solved();
  double s = 0;
  for (const auto& r : runs) {
    const double d = static_cast<double>(r.summary().solved) - m;
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(runs.size()));
}

Aggregate MultiRunReport::mean() const {
  Aggregate m;
  if (runs.empty()) return m;
  const double n = static_cast<double>(runs.size());
  double solved = 0;
  double queries = 0;
  for (const auto& r : runs) {
    const Aggregate a = r.summary();
    queries += static_cast<double>(a.queries);
    solved += static_cast<double>(a.solved);
    m.percent_solved += a.percent_solved / n;
    m.par2 += a.par2 / n;
    m.reward_time += a.reward_time / n;
    m.reward_cost += a.reward_cost / n;
    m.reward_binary += a.reward_binary / n;
    m.avg_time += a.avg_time / n;
    m.avg_cost += a.avg_cost / n;
  }
  m.queries = static_cast<std::size_t>(std::llround(queries / n));
  m.solved = static_cast<std::size_t>(std::llround(solved / n));
  return m;
}

MultiRunReport run_corpus_multi(
    const std::vector<QueryTask>& tasks, const RunConfig& config,
    const std::function<std::unique_ptr<SolverPortfolio>()>& make_portfolio,
    const std::function<RunState(std::uint64_t)>& make_state, const RunHooks& hooks) {
  MultiRunReport out;
  for (std::size_t r = 0; r < std::max<std::size_t>(config.runs, 1); ++r) {
    if (hooks.interrupt && hooks.interrupt->load()) break;
    RunConfig c = config;
    c.seed = derive_seed(config.seed, r);
    RunState state = make_state(c.seed);
    auto portfolio = make_portfolio();
    out.runs.push_back(run_corpus(tasks, c, *portfolio, state, hooks));
  }
  return out;
}

VirtualBest virtual_best(const OutcomeMatrix& matrix, RewardKind kind,
                         const RewardBudget& budget) {
  VirtualBest vb;
  std::vector<QueryRecord> records;
  for (const auto& [query, cells] : matrix.rows) {
    if (cells.size() != matrix.solvers.size()) {
      throw Error("outcome matrix row " + query + " is incomplete");
    }
    std::optional<std::size_t> best;
    Rewards best_r;
    double best_t = 0;
    double best_c = 0;
    bool best_solved = false;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const MatrixCell& cell = cells[i];
      const bool enumerator = matrix.solvers[i].kind == SolverId::Kind::Enumerator;
      const double c = enumerator ? kEnumeratorCost : cell.cost;
      const bool solved = cell.solved && cell.time <= budget.time && c <= budget.cost;
      const double t = solved ? cell.time : std::min(cell.time, budget.time);
      const Rewards r = compute_rewards(budget, t, std::min(c, budget.cost), solved);
      const auto key = [](const Rewards& rr, RewardKind kk, bool s, double tt, double ccost) {
        return std::make_tuple(rr.get(kk), s, -tt, -ccost);
      };
      if (!best || key(r, kind, solved, t, c) > key(best_r, kind, best_solved, best_t, best_c)) {
        best = i;
        best_r = r;
        best_t = t;
        best_c = c;
        best_solved = solved;
      }
    }
    QueryRecord rec;
    rec.query = query;
    rec.solved = best_solved;
    rec.time = best_t;
    rec.cost = best_c;
    rec.rewards = best_r;
    if (best && best_solved) rec.winner = matrix.solvers[*best];
    vb.choice[query] = rec.winner;
    records.push_back(std::move(rec));
  }
  vb.aggregate = aggregate(records, budget.time);
  return vb;
}

// ---- serialization --------------------------------------------------------

void to_json(nlohmann::json& j, const Rewards& r) {
  j = nlohmann::json{{"time", r.time}, {"cost", r.cost}, {"binary", r.binary}};
}

void from_json(const nlohmann::json& j, Rewards& r) {
  j.at("time").get_to(r.time);
  j.at("cost").get_to(r.cost);
  j.at("binary").get_to(r.binary);
}

namespace {

std::string_view verdict_kind(VerificationResult::Kind k) {
  switch (k) {
    case VerificationResult::Kind::Valid:
      return "valid";
    case VerificationResult::Kind::Counterexample:
      return "counterexample";
    case VerificationResult::Kind::Unknown:
      return "unknown";
  }
  return "unknown";
}

}  // namespace

void to_json(nlohmann::json& j, const DeploymentOutcome& o) {
  j = nlohmann::json{
      {"solver", o.solver},
      {"solved", o.solved},
      {"candidate", o.candidate ? nlohmann::json(print_define_fun(*o.candidate)) : nlohmann::json(nullptr)},
      {"verdict",
       {{"kind", verdict_kind(o.verdict.kind)},
        {"verifier", o.verdict.verifier},
        {"bounded", o.verdict.bounded},
        {"reason", o.verdict.reason},
        {"counterexample", to_string(o.verdict.counterexample)}}},
      {"time", o.time},
      {"cost", o.cost},
      {"rewards", o.rewards},
      {"attempts", o.attempts},
      {"reason", o.reason}};
}

void from_json(const nlohmann::json& j, DeploymentOutcome& o) {
  j.at("solver").get_to(o.solver);
  j.at("solved").get_to(o.solved);
  o.candidate.reset();
  if (j.contains("candidate") && j["candidate"].is_string()) {
    o.candidate = parse_define_fun(j["candidate"].get<std::string>());
  }
  const auto& v = j.at("verdict");
  const std::string kind = v.at("kind").get<std::string>();
  o.verdict = VerificationResult{};
  o.verdict.kind = kind == "valid"            ? VerificationResult::Kind::Valid
                   : kind == "counterexample" ? VerificationResult::Kind::Counterexample
                                              : VerificationResult::Kind::Unknown;
  v.at("verifier").get_to(o.verdict.verifier);
  v.at("bounded").get_to(o.verdict.bounded);
  v.at("reason").get_to(o.verdict.reason);
  j.at("time").get_to(o.time);
  j.at("cost").get_to(o.cost);
  j.at("rewards").get_to(o.rewards);
  j.at("attempts").get_to(o.attempts);
  j.at("reason").get_to(o.reason);
}

void to_json(nlohmann::json& j, const QueryRecord& r) {
  j = nlohmann::json{{"query", r.query},
                     {"ranking", r.ranking},
                     {"schedule", r.schedule},
                     {"outcomes", r.outcomes},
                     {"winner", r.winner ? nlohmann::json(*r.winner) : nlohmann::json(nullptr)},
                     {"solved", r.solved},
                     {"time", r.time},
                     {"cost", r.cost},
                     {"rewards", r.rewards},
                     {"events", r.events}};
}

void from_json(const nlohmann::json& j, QueryRecord& r) {
  j.at("query").get_to(r.query);
  j.at("ranking").get_to(r.ranking);
  j.at("schedule").get_to(r.schedule);
  j.at("outcomes").get_to(r.outcomes);
  r.winner.reset();
  if (j.contains("winner") && !j["winner"].is_null()) r.winner = j["winner"].get<SolverId>();
  j.at("solved").get_to(r.solved);
  j.at("time").get_to(r.time);
  j.at("cost").get_to(r.cost);
  j.at("rewards").get_to(r.rewards);
  r.events.clear();
  if (j.contains("events")) j["events"].get_to(r.events);
}

void to_json(nlohmann::json& j, const Aggregate& a) {
  j = nlohmann::json{{"queries", a.queries},         {"solved", a.solved},
                     {"percent_solved", a.percent_solved}, {"par2", a.par2},
                     {"reward_time", a.reward_time}, {"reward_cost", a.reward_cost},
                     {"reward_binary", a.reward_binary}, {"avg_time", a.avg_time},
                     {"avg_cost", a.avg_cost}};
}

void to_json(nlohmann::json& j, const RunReport& r) {
  j = nlohmann::json{{"label", r.label},
                     {"seed", r.seed},
                     {"reward", std::string(to_string(r.reward))},
                     {"time_budget", r.time_budget},
                     {"cost_budget", r.cost_budget},
                     {"records", r.records},
                     {"skipped", r.skipped},
                     {"summary", r.summary()}};
}

void from_json(const nlohmann::json& j, RunReport& r) {
  j.at("label").get_to(r.label);
  j.at("seed").get_to(r.seed);
  r.reward = parse_reward_kind(j.at("reward").get<std::string>());
  j.at("time_budget").get_to(r.time_budget);
  j.at("cost_budget").get_to(r.cost_budget);
  j.at("records").get_to(r.records);
  r.skipped.clear();
  if (j.contains("skipped")) j["skipped"].get_to(r.skipped);
}

void to_json(nlohmann::json& j, const MultiRunReport& r) {
  j = nlohmann::json{{"runs", r.runs},
                     {"summary",
                      {{"runs", r.runs.size()},
                       {"mean_solved", r.mean_solved()},
                       {"stddev_solved", r.stddev_solved()},
                       {"mean", r.mean()}}}};
}

void from_json(const nlohmann::json& j, MultiRunReport& r) { j.at("runs").get_to(r.runs); }

SummaryRow summarize(const MultiRunReport& report) {
  SummaryRow row;
  row.label = report.runs.empty() ? "" : report.runs.front().label;
  row.mean = report.mean();
  row.solved_stddev = report.stddev_solved();
  row.runs = report.runs.size();
  row.reward = report.runs.empty() ? RewardKind::Cost : report.runs.front().reward;
  return row;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out =
      "selector,reward_kind,percent_solved,solved,par2,reward_cost,reward_time,reward_binary,"
      "avg_time,avg_cost,solved_stddev,runs\n";
  char buf[512];
  for (const auto& r : rows) {
    const Aggregate& a = r.mean;
    const double solved = a.queries == 0 ? 0 : a.percent_solved * a.queries / 100.0;
    std::snprintf(buf, sizeof buf, "%s,%s,%.2f,%.2f,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%zu\n",
                  r.label.c_str(), std::string(to_string(r.reward)).c_str(), a.percent_solved,
                  solved, a.par2, a.reward_cost, a.reward_time, a.reward_binary, a.avg_time,
                  a.avg_cost, r.solved_stddev, r.runs);
    out += buf;
  }
  return out;
}

std::string cumulative_par2_csv(const RunReport& report) {
  std::string out = "index,cumulative_par2\n";
  double total = 0;
  char buf[64];
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& r = report.records[i];
    total += r.solved ? r.time : 2.0 * report.time_budget;
    std::snprintf(buf, sizeof buf, "%zu,%.4f\n", i + 1, total);
    out += buf;
  }
  return out;
}

MultiRunReport rescore(MultiRunReport report, RewardKind kind) {
  for (auto& run : report.runs) {
    run.reward = kind;
    const RewardBudget budget{run.time_budget, run.cost_budget};
    for (auto& rec : run.records) {
      for (auto& o : rec.outcomes) o.rewards = compute_rewards(budget, o.time, o.cost, o.solved);
      rec.rewards = compute_rewards(budget, rec.time, rec.cost, rec.solved);
    }
  }
  return report;
}

}  // namespace synthsel
