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

// k-nearest-neighbour contextual bandit over solve records.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "synthsel/features.hpp"

namespace synthsel {

using Rng = std::mt19937_64;

/// A deployable solver. `Model` is the per-LLM arm of the first layer of the
/// two-layer selector; it carries no prompt style.
struct SolverId {
  enum class Kind { Enumerator, Llm, Model };

  Kind kind = Kind::Enumerator;
  std::string model;
  int style = 0;  // 1..6 for Llm, 0 otherwise

  static SolverId enumerator() { return {}; }
  static SolverId llm(std::string model, int style);
  static SolverId model_arm(std::string model);

  /// The first-layer arm this solver belongs to.
  SolverId arm() const;

  auto operator<=>(const SolverId&) const = default;
};

/// "enumerator", "<model>-p<style>" or "<model>".
std::string to_string(const SolverId& id);
/// Inverse of to_string. A name without a "-p<n>" suffix is a model arm.
SolverId parse_solver_id(std::string_view text);

struct SolveRecord {
  FeatureVector features;
  SolverId solver;
  double reward = 0;  // [0, 1]
  double time = 0;    // seconds
  double cost = 0;    // cost units

  /// Throws Error unless reward is in [0, 1] and time, cost are >= 0.
  void validate() const;
};

enum class RewardKind { Time, Cost, Binary };

std::string_view to_string(RewardKind kind);
RewardKind parse_reward_kind(std::string_view text);

/// (1 - t/T)^4 when solved, else 0. Throws Error unless 0 <= t <= T, T > 0.
double reward_time(double t, double T, bool solved);
/// (1 - c/C)^4 when solved, else 0. Throws Error unless 0 <= c <= C, C > 0.
double reward_cost(double c, double C, bool solved);
double reward_binary(bool solved);

struct RewardBudget {
  double time = 100.0;
  double cost = 100000.0;
};

/// Dispatches on `kind`; t and c are clamped into their budgets first.
double reward(RewardKind kind, const RewardBudget& budget, double t, double c, bool solved);

/// input + 3 * output for LLM solvers; 0.4 for the enumerator.
double estimate_cost(double input_tokens, double output_tokens, const SolverId& solver);

inline constexpr double kEnumeratorCost = 0.4;

/// Append-only collection of successful solves.
class BanditStore {
 public:
  BanditStore() = default;

  const std::vector<SolveRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  void append(SolveRecord record);

  /// Indices of the min(k, size) records nearest to `features`; distance
  /// ties keep insertion order.
  std::vector<std::size_t> nearest(const FeatureVector& features, std::size_t k) const;
  /// Like nearest() restricted to records of `solver`.
  std::vector<std::size_t> nearest_for(const FeatureVector& features, std::size_t k,
                                       const SolverId& solver) const;

  /// JSON lines, one record per line.
  static BanditStore load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
  /// Appends only records added since the last load/save/flush.
  void flush(const std::filesystem::path& path);

 private:
  std::vector<SolveRecord> records_;
  std::size_t persisted_ = 0;
};

/// Appends `record` when `solved`; unsolved outcomes leave the store as is.
void record_outcome(BanditStore& store, SolveRecord record, bool solved);

struct Ranking {
  std::vector<SolverId> order;
  /// The first `scored` entries of `order` appeared among the k nearest
  /// records, sorted by score; the rest were shuffled.
  std::size_t scored = 0;
  std::vector<double> scores;  // parallel to the scored prefix
};

/// Scores each solver by the sum of its rewards among the k nearest records,
/// sorts present solvers by score (random among equal scores) and appends
/// the absent ones in random order.
Ranking rank_single_scored(const BanditStore& store, const FeatureVector& features,
                           std::size_t k, const std::vector<SolverId>& solvers, Rng& rng);
std::vector<SolverId> rank_single(const BanditStore& store, const FeatureVector& features,
                                  std::size_t k, const std::vector<SolverId>& solvers, Rng& rng);

/// Two-layer ranking: `arms` are model arms and possibly the enumerator,
/// ranked against `model_store`; each model is expanded by ranking its
/// styles against that model's own prompt store.
std::vector<SolverId> rank_double(const BanditStore& model_store,
                                  const std::map<std::string, BanditStore>& prompt_stores,
                                  const FeatureVector& features, std::size_t k,
                                  const std::vector<SolverId>& arms,
                                  const std::map<std::string, std::vector<int>>& prompts,
                                  Rng& rng);

void to_json(nlohmann::json& j, const SolverId& id);
void from_json(const nlohmann::json& j, SolverId& id);
void to_json(nlohmann::json& j, const SolveRecord& r);
void from_json(const nlohmann::json& j, SolveRecord& r);

}  // namespace synthsel
