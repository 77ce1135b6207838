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

#include "synthsel/bandit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

#include "synthsel/error.hpp"

namespace synthsel {

SolverId SolverId::llm(std::string model, int style) {
  if (style < 1 || style > 6) throw Error("prompt style must be in 1..6");
  if (model.empty()) throw Error("LLM solver needs a model name");
  return {Kind::Llm, std::move(model), style};
}

SolverId SolverId::model_arm(std::string model) {
  if (model.empty()) throw Error("model arm needs a model name");
  return {Kind::Model, std::move(model), 0};
}

SolverId SolverId::arm() const {
  return kind == Kind::Llm ? model_arm(model) : *this;
}

std::string to_string(const SolverId& id) {
  switch (id.kind) {
    case SolverId::Kind::Enumerator:
      return "enumerator";
    case SolverId::Kind::Llm:
      return id.model + "-p" + std::to_string(id.style);
    case SolverId::Kind::Model:
      return id.model;
  }
  return "?";
}

SolverId parse_solver_id(std::string_view text) {
  if (text == "enumerator") return SolverId::enumerator();
  const auto dash = text.rfind("-p");
  if (dash != std::string_view::npos && dash + 2 < text.size()) {
    int style = 0;
    const char* first = text.data() + dash + 2;
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, style);
    if (ec == std::errc() && ptr == last) {
      return SolverId::llm(std::string(text.substr(0, dash)), style);
    }
  }
  return SolverId::model_arm(std::string(text));
}

void SolveRecord::validate() const {
  if (!(reward >= 0 && reward <= 1)) throw Error("reward outside [0, 1]");
  if (!(time >= 0)) throw Error("negative time");
  if (!(cost >= 0)) throw Error("negative cost");
}

std::string_view to_string(RewardKind kind) {
  switch (kind) {
    case RewardKind::Time:
      return "time";
    case RewardKind::Cost:
      return "cost";
    case RewardKind::Binary:
      return "binary";
  }
  return "?";
}

RewardKind parse_reward_kind(std::string_view text) {
  if (text == "time") return RewardKind::Time;
  if (text == "cost") return RewardKind::Cost;
  if (text == "binary") return RewardKind::Binary;
  throw Error("unknown reward kind '" + std::string(text) + "'");
}

namespace {

double fourth_power_reward(double x, double budget, bool solved, const char* what) {
  if (!(budget > 0)) throw Error(std::string(what) + " budget must be positive");
  if (!(x >= 0) || x > budget) {
    throw Error(std::string(what) + " " + std::to_string(x) + " outside [0, " +
                std::to_string(budget) + "]");
  }
  if (!solved) return 0.0;
  const double r = 1.0 - x / budget;
  return r * r * r * r;
}

}  // namespace

double reward_time(double t, double T, bool solved) {
  return fourth_power_reward(t, T, solved, "time");
}

double reward_cost(double c, double C, bool solved) {
  return fourth_power_reward(c, C, solved, "cost");
}

double reward_binary(bool solved) { return solved ? 1.0 : 0.0; }

double reward(RewardKind kind, const RewardBudget& budget, double t, double c, bool solved) {
  switch (kind) {
    case RewardKind::Time:
      return reward_time(std::clamp(t, 0.0, budget.time), budget.time, solved);
    case RewardKind::Cost:
      return reward_cost(std::clamp(c, 0.0, budget.cost), budget.cost, solved);
    case RewardKind::Binary:
      return reward_binary(solved);
  }
  return 0.0;
}

double estimate_cost(double input_tokens, double output_tokens, const SolverId& solver) {
  if (solver.kind == SolverId::Kind::Enumerator) return kEnumeratorCost;
  return input_tokens + 3.0 * output_tokens;
}

void BanditStore::append(SolveRecord record) {
  record.validate();
  if (!records_.empty() && records_.front().features.size() != record.features.size()) {
    throw Error("feature dimension differs from the store's");
  }
  records_.push_back(std::move(record));
}

std::vector<std::size_t> BanditStore::nearest(const FeatureVector& features,
                                              std::size_t k) const {
  std::vector<double> dist(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    dist[i] = distance(records_[i].features, features);
  }
  std::vector<std::size_t> idx(records_.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  idx.resize(std::min(k, idx.size()));
  return idx;
}

std::vector<std::size_t> BanditStore::nearest_for(const FeatureVector& features,
                                                  std::size_t k,
                                                  const SolverId& solver) const {
  std::vector<std::size_t> idx;
  std::vector<double> dist(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].solver != solver) continue;
    dist[i] = distance(records_[i].features, features);
    idx.push_back(i);
  }
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  idx.resize(std::min(k, idx.size()));
  return idx;
}

BanditStore BanditStore::load(const std::filesystem::path& path) {
  BanditStore store;
  std::ifstream in(path);
  if (!in) return store;  // a missing state file is an empty store
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      store.append(nlohmann::json::parse(line).get<SolveRecord>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  store.persisted_ = store.records_.size();
  return store;
}

void BanditStore::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& r : records_) out << nlohmann::json(r).dump() << '\n';
}

void BanditStore::flush(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot write " + path.string());
  for (; persisted_ < records_.size(); ++persisted_) {
    out << nlohmann::json(records_[persisted_]).dump() << '\n';
  }
}

void record_outcome(BanditStore& store, SolveRecord record, bool solved) {
  if (solved) store.append(std::move(record));
}

Ranking rank_single_scored(const BanditStore& store, const FeatureVector& features,
                           std::size_t k, const std::vector<SolverId>& solvers, Rng& rng) {
  if (k == 0) throw Error("k must be at least 1");
  std::map<SolverId, double> score;
  for (std::size_t i : store.nearest(features, k)) {
    const SolveRecord& r = store.records()[i];
    if (std::find(solvers.begin(), solvers.end(), r.solver) != solvers.end()) {
      score[r.solver] += r.reward;
    }
  }
  std::vector<SolverId> present;
  std::vector<SolverId> absent;
  for (const auto& s : solvers) {
    if (std::find(present.begin(), present.end(), s) != present.end() ||
        std::find(absent.begin(), absent.end(), s) != absent.end()) {
      continue;
    }
    (score.contains(s) ? present : absent).push_back(s);
  }
  // Shuffling first makes the stable sort break score ties at random.
  std::shuffle(present.begin(), present.end(), rng);
  std::stable_sort(present.begin(), present.end(), [&](const SolverId& a, const SolverId& b) {
    return score[a] > score[b];
  });
  std::shuffle(absent.begin(), absent.end(), rng);

  Ranking out;
  out.scored = present.size();
  for (const auto& s : present) out.scores.push_back(score[s]);
  out.order = std::move(present);
  out.order.insert(out.order.end(), absent.begin(), absent.end());
  return out;
}

std::vector<SolverId> rank_single(const BanditStore& store, const FeatureVector& features,
                                  std::size_t k, const std::vector<SolverId>& solvers,
                                  Rng& rng) {
  return rank_single_scored(store, features, k, solvers, rng).order;
}

std::vector<SolverId> rank_double(const BanditStore& model_store,
                                  const std::map<std::string, BanditStore>& prompt_stores,
                                  const FeatureVector& features, std::size_t k,
                                  const std::vector<SolverId>& arms,
                                  const std::map<std::string, std::vector<int>>& prompts,
                                  Rng& rng) {
  static const BanditStore kEmpty;
  std::vector<SolverId> out;
  for (const auto& arm : rank_single(model_store, features, k, arms, rng)) {
    if (arm.kind != SolverId::Kind::Model) {
      out.push_back(arm);
      continue;
    }
    std::vector<SolverId> styles;
    if (const auto it = prompts.find(arm.model); it != prompts.end()) {
      for (int s : it->second) styles.push_back(SolverId::llm(arm.model, s));
    }
    if (styles.empty()) continue;
    const auto store = prompt_stores.find(arm.model);
    const BanditStore& ps = store == prompt_stores.end() ? kEmpty : store->second;
    for (auto& s : rank_single(ps, features, k, styles, rng)) out.push_back(std::move(s));
  }
  return out;
}

void to_json(nlohmann::json& j, const SolverId& id) { j = to_string(id); }

void from_json(const nlohmann::json& j, SolverId& id) {
  id = parse_solver_id(j.get<std::string>());
}

void to_json(nlohmann::json& j, const SolveRecord& r) {
  j = nlohmann::json{{"features", r.features},
                     {"solver", r.solver},
                     {"reward", r.reward},
                     {"time", r.time},
                     {"cost", r.cost}};
}

void from_json(const nlohmann::json& j, SolveRecord& r) {
  j.at("features").get_to(r.features);
  j.at("solver").get_to(r.solver);
  j.at("reward").get_to(r.reward);
  j.at("time").get_to(r.time);
  j.at("cost").get_to(r.cost);
}

}  // namespace synthsel
