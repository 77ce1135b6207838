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

// Time and token budgets from exponential models of past solve costs.

#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "synthsel/bandit.hpp"

namespace synthsel {

struct ExponentialFit {
  double rate = 1.0;  // lambda*
  std::size_t samples = 0;
};

/// Maximum likelihood rate n / sum(u). Throws Error on an empty sample set
/// or a non-positive sample.
ExponentialFit fit_exponential(std::span<const double> samples);

/// Smallest allocation a with P(a < v < B) <= delta for v ~ Exp(rate):
/// a = -ln(delta + e^(-rate * B)) / rate, clamped to [0, B].
double allocate_one(const ExponentialFit& fit, double budget, double delta);

enum class BudgetDimension { Cost, Time };

/// Recorded samples are clamped to this floor before fitting so that
/// instant or free solves do not produce an infinite rate.
inline constexpr double kMinSample = 1e-6;

/// Greedy walk over `ranking`: each solver gets allocate_one over the k
/// nearest samples of its own records, capped by what remains. Solvers
/// without samples split the remainder evenly among the sample-less solvers
/// still ahead. Once the budget is gone the rest get zero; any leftover goes
/// to the last solver.
std::vector<double> allocate_sequence(std::span<const SolverId> ranking, const BanditStore& store,
                                      const FeatureVector& features, std::size_t k,
                                      double budget, double delta, BudgetDimension dimension);

struct ScheduleEntry {
  SolverId solver;
  double time = 0;  // seconds
  double cost = 0;  // cost units
};

struct SolverSchedule {
  std::vector<ScheduleEntry> entries;

  double total_time() const;
  double total_cost() const;
};

struct BudgetConfig {
  double time = 100.0;       // T
  double cost = 100000.0;    // C
  std::size_t k = 15;
  double delta_time = 0.05;  // delta1
  double delta_cost = 0.05;  // delta2
};

/// Costs first, then times over the solvers that received a nonzero cost.
/// A solver with zero cost gets zero time.
SolverSchedule build_schedule(std::span<const SolverId> ranking, const BanditStore& store,
                              const FeatureVector& features, const BudgetConfig& config);

/// Equal split of T and C across the ranking.
SolverSchedule build_linear_schedule(std::span<const SolverId> ranking, const BudgetConfig& config);

void to_json(nlohmann::json& j, const SolverSchedule& s);
void from_json(const nlohmann::json& j, SolverSchedule& s);

}  // namespace synthsel
