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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "synthsel/grammar.hpp"
#include "synthsel/query.hpp"
#include "synthsel/verify.hpp"

namespace synthsel {

struct EnumeratorConfig {
  /// Edge cost = cost_scale * number of productions of the expanded nonterminal.
  double cost_scale = 1.0;
  /// Approximate bound on search memory; exceeding it ends the search.
  std::size_t memory_limit_bytes = std::size_t{1} << 30;
  /// Drop partial programs whose constraints are already false on an example.
  bool prune_partial = true;
  /// Drop completed subterms that agree on every example with a cheaper one.
  bool prune_equivalent = true;
};

/// Cost of one expansion of nonterminal `nt`.
double edge_cost(const Grammar& grammar, std::size_t nt, double scale = 1.0);

/// Least fixpoint of mc(N) = min over N -> a of edge_cost(N) + sum of mc over
/// the nonterminals of a. Indexed like grammar.nonterminals().
std::vector<double> min_completion_costs(const Grammar& grammar, double scale = 1.0);

/// Sum of min completion costs over the nonterminals remaining in `form`.
double heuristic(std::span<const Symbol> form, std::span<const double> mc);
double heuristic(const Grammar& grammar, std::span<const Symbol> form, double scale = 1.0);

using CounterexampleSet = std::vector<Assignment>;

struct SearchStats {
  std::size_t expanded = 0;
  std::size_t generated = 0;
  std::size_t pruned_partial = 0;
  std::size_t pruned_equivalent = 0;
  std::size_t duplicates = 0;
  /// Priorities of popped states, recorded only when requested.
  std::vector<double> pop_priorities;
};

struct SynthesisResult {
  enum class Status { Found, Exhausted, Timeout, MemoryLimit };

  Status status = Status::Exhausted;
  std::optional<Candidate> candidate;
  double cost = 0;  // path cost f of the returned program
  SearchStats stats;
};

std::string_view to_string(SynthesisResult::Status status);

/// A* over leftmost derivations of `grammar`: priority f + g with f the sum
/// of edge costs so far and g the heuristic; FIFO among equal priorities.
/// Returns the first dequeued complete program that satisfies every
/// constraint of `query` on every example.
SynthesisResult astar_synthesize(const Grammar& grammar, const CounterexampleSet& examples,
                                 const SynthQuery& query, Clock::time_point deadline,
                                 const EnumeratorConfig& config = {},
                                 bool record_pops = false);

struct CegisResult {
  enum class Status { Solved, Timeout, Exhausted, MemoryLimit, Unknown };

  Status status = Status::Timeout;
  std::optional<Candidate> candidate;
  VerificationResult verdict;
  /// Counterexamples added after the initial all-zeros example.
  std::size_t iterations = 0;
  CounterexampleSet examples;
  std::string reason;
};

std::string_view to_string(CegisResult::Status status);

/// The all-zeros assignment over the query's variables.
Assignment zero_assignment(const SynthQuery& query);

/// CEGIS: synthesize against the examples, verify, add the counterexample,
/// repeat. Starts from the all-zeros example. Only verifier-accepted
/// candidates are returned.
CegisResult cegis_solve(const SynthQuery& query, const Grammar& grammar,
                        Clock::time_point deadline, Verifier& verifier,
                        const EnumeratorConfig& config = {});

}  // namespace synthsel
