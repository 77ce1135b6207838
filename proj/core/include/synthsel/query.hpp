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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synthsel/grammar.hpp"
#include "synthsel/sexpr.hpp"
#include "synthsel/signature.hpp"
#include "synthsel/term.hpp"

namespace synthsel {

/// A single-function synthesis problem: logic, target signature, universally
/// quantified variables and boolean constraints.
struct SynthQuery {
  std::string logic;
  SynthFun fun;
  std::vector<Param> variables;
  std::vector<Term> constraints;
  std::optional<Grammar> grammar;

  /// Set when the constraints were produced by desugaring inv-constraint.
  bool from_invariant = false;
  /// Token count of the source text (0 for programmatically built queries).
  std::size_t source_tokens = 0;

  const Param* find_variable(std::string_view name) const;
};

/// Structural equality of logic, signature, variables, constraints and
/// grammar. Provenance fields are not compared.
bool operator==(const SynthQuery& a, const SynthQuery& b);

/// A function body proposed for the synth-fun.
class Candidate {
 public:
  /// Throws SortError when the body mentions anything but `params`, calls a
  /// function, or has a sort other than `result`.
  static Candidate make(std::string name, std::vector<Param> params,
                        Sort result, Term body);
  static Candidate for_function(const SynthFun& fun, Term body);

  const std::string& name() const { return name_; }
  const std::vector<Param>& params() const { return params_; }
  Sort result() const { return result_; }
  const Term& body() const { return body_; }

  /// True when names may differ but arity and sorts agree with `fun`.
  bool matches(const SynthFun& fun) const;

  friend bool operator==(const Candidate&, const Candidate&) = default;

 private:
  Candidate() = default;

  std::string name_;
  std::vector<Param> params_;
  Sort result_;
  Term body_;
};

/// phi(f): the conjunction of the constraints with every application of the
/// synth-fun replaced by the candidate body, arguments bound positionally.
/// Throws SortError on a signature mismatch.
Term substitute_solution(const SynthQuery& query, const Candidate& cand);

/// Replaces applications of `function` inside `term` by `cand`'s body.
Term substitute_calls(const Term& term, std::string_view function,
                      const Candidate& cand);

/// Every Int / BitVec literal occurring in the constraints, deduplicated, in
/// order of first occurrence.
std::vector<Term> constraint_literals(const SynthQuery& query);

/// Default grammar of `query`'s logic with the literal pool extended by the
/// constraint literals.
Grammar default_grammar(const SynthQuery& query);

// ---- parsing --------------------------------------------------------------

/// Parses a SyGuS-IF query. Supported commands: set-logic, declare-var,
/// declare-primed-var, define-fun (inlined), synth-fun (with or without a
/// grammar), synth-inv, constraint, inv-constraint (desugared into plain
/// constraints), check-synth; set-info/set-option are ignored.
SynthQuery parse_query(std::string_view text);

Sort parse_sort(const SExpr& expr);

/// Parses a closed `(define-fun name ((p s)...) sort body)` form.
Candidate parse_define_fun(const SExpr& expr);
Candidate parse_define_fun(std::string_view text);

/// Parses a term over the given variables (no user functions).
Term parse_term(const SExpr& expr, std::span<const Param> variables);
Term parse_term(std::string_view text, std::span<const Param> variables);

/// Parses a model value: numeral, `(- n)`, `#x..`, `#b..`, `(_ bvN w)`,
/// `true`, `false`.
Value parse_value(const SExpr& expr);

// ---- printing -------------------------------------------------------------

std::string print_term(const Term& term);
std::string print_define_fun(const Candidate& cand);
std::string print_query(const SynthQuery& query);

}  // namespace synthsel
