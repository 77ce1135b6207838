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

#include "synthsel/budget.hpp"

#include <algorithm>
#include <cmath>

#include "synthsel/error.hpp"

namespace synthsel {

ExponentialFit fit_exponential(std::span<const double> samples) {
  if (samples.empty()) throw Error("cannot fit an exponential to no samples");
  double sum = 0;
  for (double u : samples) {
    if (!(u > 0)) throw Error("exponential samples must be positive");
    sum += u;
  }
  return {static_cast<double>(samples.size()) / sum, samples.size()};
}

double allocate_one(const ExponentialFit& fit, double budget, double delta) {
  if (!(budget > 0)) throw Error("budget must be positive");
  if (!(delta > 0 && delta < 1)) throw Error("delta must be in (0, 1)");
  if (!(fit.rate > 0)) throw Error("rate must be positive");
  const double a = -std::log(delta + std::exp(-fit.rate * budget)) / fit.rate;
  return std::clamp(a, 0.0, budget);
}

std::vector<double> allocate_sequence(std::span<const SolverId> ranking, const BanditStore& store,
                                      const FeatureVector& features, std::size_t k,
                                      double budget, double delta, BudgetDimension dimension) {
  const std::size_t n = ranking.size();
  std::vector<double> out(n, 0.0);
  if (n == 0) return out;

  std::vector<std::vector<double>> samples(n);
  std::size_t sampleless = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r : store.nearest_for(features, k, ranking[i])) {
      const SolveRecord& rec = store.records()[r];
      const double u = dimension == BudgetDimension::Cost ? rec.cost : rec.time;
      samples[i].push_back(std::max(u, kMinSample));
    }
    if (samples[i].empty()) ++sampleless;
  }

  // Rounding residue below this is not budget; it would otherwise fund a
  // solver with a sliver of cost and, through the coupling rule, real time.
  const double eps = budget * 1e-12;
  double remaining = budget;
  std::size_t last_funded = n;
  for (std::size_t i = 0; i < n && remaining > eps; ++i) {
    double a;
    if (samples[i].empty()) {
      a = remaining / static_cast<double>(sampleless);
      --sampleless;
    } else {
      a = allocate_one(fit_exponential(samples[i]), budget, delta);
    }
    out[i] = std::min(a, remaining);
    remaining -= out[i];
    if (out[i] > 0) last_funded = i;
  }
  if (remaining > eps) {
    out.back() += remaining;
  } else if (remaining > 0 && last_funded < n) {
    out[last_funded] += remaining;
  }
  return out;
}

double SolverSchedule::total_time() const {
  double t = 0;
  for (const auto& e : entries) t += e.time;
  return t;
}

double SolverSchedule::total_cost() const {
  double c = 0;
  for (const auto& e : entries) c += e.cost;
  return c;
}

SolverSchedule build_schedule(std::span<const SolverId> ranking, const BanditStore& store,
                              const FeatureVector& features, const BudgetConfig& config) {
  SolverSchedule s;
  const auto costs = allocate_sequence(ranking, store, features, config.k, config.cost,
                                       config.delta_cost, BudgetDimension::Cost);
  std::vector<SolverId> funded;
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    s.entries.push_back({ranking[i], 0.0, costs[i]});
    if (costs[i] > 0) funded.push_back(ranking[i]);
  }
  // Time is walked over funded solvers only, so time that unfunded solvers
  // would have taken flows to the funded ones.
  const auto times = allocate_sequence(funded, store, features, config.k, config.time,
                                       config.delta_time, BudgetDimension::Time);
  std::size_t j = 0;
  for (auto& e : s.entries) {
    if (e.cost > 0) e.time = times[j++];
  }
  return s;
}

SolverSchedule build_linear_schedule(std::span<const SolverId> ranking,
                                     const BudgetConfig& config) {
  SolverSchedule s;
  const double n = static_cast<double>(ranking.size());
  for (const auto& id : ranking) s.entries.push_back({id, config.time / n, config.cost / n});
  return s;
}

void to_json(nlohmann::json& j, const SolverSchedule& s) {
  j = nlohmann::json::array();
  for (const auto& e : s.entries) {
    j.push_back({{"solver", e.solver}, {"time", e.time}, {"cost", e.cost}});
  }
}

void from_json(const nlohmann::json& j, SolverSchedule& s) {
  s.entries.clear();
  for (const auto& e : j) {
    s.entries.push_back({e.at("solver").get<SolverId>(), e.at("time").get<double>(),
                         e.at("cost").get<double>()});
  }
}

}  // namespace synthsel
