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

// synthsel: solve one query, run a corpus, or re-score a report.
//
// Exit codes: 0 solved / success, 1 unsolved, 2 usage or parse error,
// 3 runtime failure (I/O, replay gap, transport setup).

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "synthsel/error.hpp"
#include "synthsel/orchestrator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace synthsel;

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitUnsolved = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted.store(true); }

class UsageError : public Error {
 public:
  using Error::Error;
};

// Raw command-line values; unset means "take the config file or default".
struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> selector;
  std::optional<std::string> reward;
  std::optional<double> time_budget;
  std::optional<double> cost_budget;
  std::optional<std::size_t> k;
  std::optional<double> delta1;
  std::optional<double> delta2;
  std::optional<std::string> state;
  std::optional<std::string> fixtures;
  std::optional<std::string> smt_cmd;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::optional<std::string> out;
  std::optional<std::string> solver;
  std::optional<std::string> matrix;
  std::optional<std::string> record;
  std::vector<std::string> models;
  bool tolerant_replay = false;
  bool no_enumerator = false;
};

struct ModelSpec {
  std::string name;
  std::vector<int> styles{1, 2, 3, 4, 5, 6};
  std::string endpoint;  // http backend when set
  std::string path = "/v1/chat/completions";
  std::string api_key_env;
  double temperature = 0.2;
};

struct Settings {
  RunConfig run;
  std::string state;
  std::string fixtures;
  std::string smt_cmd;
  std::string out;
  std::string matrix;
  std::string record;
  std::vector<ModelSpec> models;
  bool enumerator = true;
  bool tolerant_replay = false;
};

json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
}

// flag > config file > default
template <class T>
T pick(const std::optional<T>& flag, const json& cfg, const char* key, T fallback) {
  if (flag) return *flag;
  if (cfg.contains(key)) {
    try {
      return cfg[key].get<T>();
    } catch (const json::exception& e) {
      throw UsageError(std::string("config key '") + key + "': " + e.what());
    }
  }
  return fallback;
}

Settings resolve(const Flags& f) {
  const json cfg = f.config ? read_config(*f.config) : json::object();
  Settings s;
  RunConfig& r = s.run;
  try {
    r.selector = parse_selector(pick<std::string>(f.selector, cfg, "selector", "single"));
    r.reward = parse_reward_kind(pick<std::string>(f.reward, cfg, "reward", "cost"));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  r.budget.time = pick(f.time_budget, cfg, "time_budget", r.budget.time);
  r.budget.cost = pick(f.cost_budget, cfg, "cost_budget", r.budget.cost);
  r.budget.k = pick(f.k, cfg, "k", r.budget.k);
  r.budget.delta_time = pick(f.delta1, cfg, "delta1", r.budget.delta_time);
  r.budget.delta_cost = pick(f.delta2, cfg, "delta2", r.budget.delta_cost);
  r.seed = pick(f.seed, cfg, "seed", r.seed);
  r.runs = pick(f.runs, cfg, "runs", r.runs);
  r.grace = pick(std::optional<double>{}, cfg, "grace", r.grace);
  r.features.normalize_by_length =
      pick(std::optional<bool>{}, cfg, "normalize_features", false);
  if (!(r.budget.time > 0) || !(r.budget.cost > 0)) throw UsageError("budgets must be positive");
  if (r.budget.k == 0) throw UsageError("--k must be at least 1");
  if (!(r.budget.delta_time > 0 && r.budget.delta_time < 1) ||
      !(r.budget.delta_cost > 0 && r.budget.delta_cost < 1)) {
    throw UsageError("deltas must lie in (0, 1)");
  }
  if (r.runs == 0) throw UsageError("--runs must be at least 1");
  if (r.runs > 1 && (f.state || cfg.contains("state"))) {
    throw UsageError("--state cannot be combined with --runs > 1");
  }

  const std::string solver = pick<std::string>(f.solver, cfg, "solver", "");
  if (!solver.empty()) r.fixed_solver = parse_solver_id(solver);
  if (r.selector == SelectorMode::FixedSolver && !r.fixed_solver) {
    throw UsageError("--selector fixed-solver needs --solver");
  }
  if (r.fixed_solver && f.selector == std::nullopt && !cfg.contains("selector")) {
    r.selector = SelectorMode::FixedSolver;
  }

  s.state = pick<std::string>(f.state, cfg, "state", "");
  s.fixtures = pick<std::string>(f.fixtures, cfg, "fixtures", "");
  s.smt_cmd = pick<std::string>(f.smt_cmd, cfg, "smt_cmd", "");
  s.out = pick<std::string>(f.out, cfg, "out", "");
  s.matrix = pick<std::string>(f.matrix, cfg, "matrix", "");
  s.record = pick<std::string>(f.record, cfg, "record", "");
  s.enumerator = f.no_enumerator ? false : pick(std::optional<bool>{}, cfg, "enumerator", true);
  s.tolerant_replay =
      f.tolerant_replay || pick(std::optional<bool>{}, cfg, "tolerant_replay", false);

  if (!f.models.empty()) {
    for (const auto& m : f.models) s.models.push_back({m});
  } else if (cfg.contains("models")) {
    for (const auto& m : cfg["models"]) {
      ModelSpec spec;
      try {
        m.at("name").get_to(spec.name);
        if (m.contains("styles")) m["styles"].get_to(spec.styles);
        if (m.contains("endpoint")) m["endpoint"].get_to(spec.endpoint);
        if (m.contains("path")) m["path"].get_to(spec.path);
        if (m.contains("api_key_env")) m["api_key_env"].get_to(spec.api_key_env);
        if (m.contains("temperature")) m["temperature"].get_to(spec.temperature);
      } catch (const json::exception& e) {
        throw UsageError(std::string("config models: ") + e.what());
      }
      for (int st : spec.styles) {
        if (st < 1 || st > 6) throw UsageError("prompt styles must be in 1..6");
      }
      s.models.push_back(std::move(spec));
    }
  }
  for (const auto& m : s.models) {
    if (m.endpoint.empty() && s.fixtures.empty() && s.matrix.empty()) {
      throw UsageError("model " + m.name + " needs an endpoint or --fixtures");
    }
  }
  return s;
}

/// Owns the verifier, backends and matrix behind a portfolio.
struct Environment {
  std::unique_ptr<Verifier> verifier;
  std::optional<OutcomeMatrix> matrix;
  std::vector<ReplayEntry> replay_entries;
  std::map<std::string, std::unique_ptr<LlmBackend>> backends;  // per model
  std::map<std::string, std::unique_ptr<LlmBackend>> recorders;

  std::unique_ptr<SolverPortfolio> make_portfolio(const Settings& s) {
    if (matrix) return std::make_unique<MatrixPortfolio>(*matrix, *verifier);
    auto p = std::make_unique<LivePortfolio>(*verifier, s.enumerator);
    p->llm_options.tolerant_replay = s.tolerant_replay;
    for (const auto& m : s.models) {
      std::unique_ptr<LlmBackend>& b = backends[m.name];
      if (m.endpoint.empty()) {
        // Replay state restarts with every portfolio so runs stay independent.
        b = std::make_unique<ReplayBackend>(replay_entries);
      } else if (!b) {
        b = std::make_unique<HttpBackend>(
            HttpBackendConfig{m.endpoint, m.path, m.api_key_env, m.temperature});
      }
      LlmBackend* used = b.get();
      if (!s.record.empty()) {
        recorders[m.name] = std::make_unique<RecordingBackend>(*b, s.record);
        used = recorders[m.name].get();
      }
      p->add_model(m.name, *used, m.styles);
    }
    if (p->solvers().empty()) throw UsageError("the portfolio is empty");
    return p;
  }
};

Environment make_environment(const Settings& s) {
  Environment env;
  env.verifier = make_verifier(CheckConfig{}, s.smt_cmd);
  if (!s.matrix.empty()) env.matrix = OutcomeMatrix::load(s.matrix);
  if (!s.fixtures.empty()) env.replay_entries = ReplayBackend::read_entries(s.fixtures);
  return env;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

int cmd_solve(const std::string& file, const Flags& flags) {
  const Settings s = resolve(flags);
  QueryTask task;
  try {
    task = load_task(file, fs::path(file).parent_path());
  } catch (const ParseError& e) {
    std::cerr << file << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  }
  Environment env = make_environment(s);
  auto portfolio = env.make_portfolio(s);
  RunState state = RunState::load(s.state, s.run.seed);
  const QueryRecord rec = solve_query(task, s.run, state, *portfolio);
  if (!s.state.empty()) state.flush(s.state);
  if (!s.out.empty()) {
    fs::create_directories(s.out);
    write_file(fs::path(s.out) / "record.json", json(rec).dump(2) + "\n");
  }
  for (const auto& o : rec.outcomes) {
    std::cerr << to_string(o.solver) << ": " << (o.solved ? "solved" : "unsolved") << " in "
              << o.time << " s, cost " << o.cost << " (" << o.reason << ")\n";
  }
  if (rec.solved && rec.outcomes.back().candidate) {
    std::cout << print_define_fun(*rec.outcomes.back().candidate) << '\n';
    return kExitSolved;
  }
  std::cout << "UNSOLVED\n";
  return kExitUnsolved;
}

int cmd_run(const std::string& dir, const Flags& flags) {
  const Settings s = resolve(flags);
  if (!fs::is_directory(dir)) throw UsageError(dir + " is not a directory");
  const auto files = discover_corpus(dir);
  if (files.empty()) throw UsageError("no .sl files under " + dir);

  std::vector<QueryTask> tasks;
  std::vector<std::string> skipped;
  for (const auto& f : files) {
    try {
      tasks.push_back(load_task(f, dir));
    } catch (const Error& e) {
      std::cerr << "warning: skipping " << f.string() << ": " << e.what() << '\n';
      skipped.push_back(f.lexically_relative(dir).generic_string());
    }
  }
  if (tasks.empty()) throw UsageError("no readable queries under " + dir);

  const fs::path out = s.out.empty() ? fs::path("synthsel-out") : fs::path(s.out);
  fs::create_directories(out);
  std::ofstream events(out / "events.jsonl", std::ios::trunc);
  if (!events) throw Error("cannot write " + (out / "events.jsonl").string());

  Environment env = make_environment(s);
  std::size_t run_index = 0;
  RunHooks hooks;
  hooks.interrupt = &g_interrupted;
  hooks.on_record = [&](const QueryRecord& rec, std::size_t i) {
    events << json{{"run", run_index}, {"index", i}, {"record", rec}}.dump() << '\n';
    events.flush();
    if (i + 1 == tasks.size()) ++run_index;
  };

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  MultiRunReport report;
  if (s.state.empty()) {
    report = run_corpus_multi(
        tasks, s.run, [&] { return env.make_portfolio(s); },
        [](std::uint64_t seed) { return RunState::load({}, seed); }, hooks);
  } else {
    // A stored state is read before and extended after a single run.
    RunState state = RunState::load(s.state, s.run.seed);
    auto portfolio = env.make_portfolio(s);
    report.runs.push_back(run_corpus(tasks, s.run, *portfolio, state, hooks));
    state.flush(s.state);
  }
  for (auto& r : report.runs) r.skipped = skipped;

  write_file(out / "report.json", json(report).dump(1) + "\n");
  write_file(out / "summary.csv", summary_csv({summarize(report)}));
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    const std::string name =
        i == 0 ? "cumulative_par2.csv" : "cumulative_par2_" + std::to_string(i) + ".csv";
    write_file(out / name, cumulative_par2_csv(report.runs[i]));
  }
  std::cout << summary_csv({summarize(report)});
  if (report.runs.size() > 1) {
    std::cout << "solved: " << report.mean_solved() << " +- " << report.stddev_solved()
              << " over " << report.runs.size() << " runs\n";
  }
  if (g_interrupted.load()) std::cerr << "interrupted; partial report written\n";
  return kExitSolved;
}

int cmd_rescore(const std::string& path, const Flags& flags) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  MultiRunReport report;
  try {
    const json j = json::parse(in);
    report = j.contains("runs") ? j.get<MultiRunReport>()
                                : MultiRunReport{{j.get<RunReport>()}};
  } catch (const std::exception& e) {
    throw UsageError("corrupt report " + path + ": " + e.what());
  }
  RewardKind kind;
  try {
    kind = parse_reward_kind(flags.reward.value_or("cost"));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const MultiRunReport out = rescore(std::move(report), kind);
  const std::string csv = summary_csv({summarize(out)});
  if (flags.out) {
    fs::create_directories(*flags.out);
    write_file(fs::path(*flags.out) / "report.json", json(out).dump(1) + "\n");
    write_file(fs::path(*flags.out) / "summary.csv", csv);
  }
  std::cout << csv;
  return kExitSolved;
}

void add_run_options(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config, "JSON config file; flags override it");
  app.add_option("--selector", f.selector,
                 "single | double | linear-single | linear-double | fixed-solver");
  app.add_option("--reward", f.reward, "time | cost | binary");
  app.add_option("--time-budget", f.time_budget, "total time budget T in seconds (100)");
  app.add_option("--cost-budget", f.cost_budget, "total cost budget C (100000)");
  app.add_option("--k", f.k, "neighbours considered (15)");
  app.add_option("--delta1", f.delta1, "time tail bound (0.05)");
  app.add_option("--delta2", f.delta2, "cost tail bound (0.05)");
  app.add_option("--state", f.state, "directory of the persistent bandit stores");
  app.add_option("--fixtures", f.fixtures, "replay fixture (JSON lines) for LLM solvers");
  app.add_option("--smt-cmd", f.smt_cmd, "external SMT solver command, e.g. \"z3 -in\"");
  app.add_option("--seed", f.seed, "random seed (0)");
  app.add_option("--runs", f.runs, "number of runs with derived seeds (1)");
  app.add_option("--out", f.out, "output directory");
  app.add_option("--solver", f.solver, "solver for fixed-solver mode, e.g. enumerator");
  app.add_option("--matrix", f.matrix, "simulate solvers from an outcome matrix");
  app.add_option("--model", f.models, "LLM model name (repeatable); all six styles");
  app.add_option("--record", f.record, "append every LLM exchange to this fixture file");
  app.add_flag("--tolerant-replay", f.tolerant_replay,
               "treat replay misses as unsolved instead of failing");
  app.add_flag("--no-enumerator", f.no_enumerator, "leave the enumerator out");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learned solver selection for syntax-guided synthesis"};
  app.require_subcommand(1);

  Flags solve_flags;
  std::string solve_file;
  CLI::App* solve = app.add_subcommand("solve", "solve one query file");
  solve->add_option("file", solve_file, "SyGuS file")->required();
  add_run_options(*solve, solve_flags);

  Flags run_flags;
  std::string run_dir;
  CLI::App* run = app.add_subcommand("run", "run a corpus of .sl files");
  run->add_option("corpus", run_dir, "corpus directory")->required();
  add_run_options(*run, run_flags);

  Flags rescore_flags;
  std::string report_path;
  CLI::App* rescore_cmd = app.add_subcommand("rescore", "re-score a report");
  rescore_cmd->add_option("report", report_path, "report.json")->required();
  rescore_cmd->add_option("--reward", rescore_flags.reward, "time | cost | binary");
  rescore_cmd->add_option("--out", rescore_flags.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(solve_file, solve_flags);
    if (*run) return cmd_run(run_dir, run_flags);
    return cmd_rescore(report_path, rescore_flags);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
