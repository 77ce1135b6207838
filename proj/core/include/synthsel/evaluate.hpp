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

#include <map>
#include <string>

#include "synthsel/query.hpp"
#include "synthsel/term.hpp"

namespace synthsel {

/// Concrete values for free variables, ordered by name.
using Assignment = std::map<std::string, Value>;

std::string to_string(const Assignment& assignment);

/// Evaluates `term` under SMT-LIB Int/Bool/BitVec semantics with exact
/// integers. `div` and `mod` are Euclidean. Throws EvalError on an unbound
/// variable or an uninterpreted call and DivisionByZero on a zero divisor.
Value evaluate(const Term& term, const Assignment& env);

/// As above, interpreting applications of `function` as `cand`.
Value evaluate(const Term& term, const Assignment& env, std::string_view function,
               const Candidate& cand);

/// Euclidean division and remainder: a = b*q + r with 0 <= r < |b|.
Integer euclid_div(const Integer& a, const Integer& b);
Integer euclid_mod(const Integer& a, const Integer& b);

}  // namespace synthsel
