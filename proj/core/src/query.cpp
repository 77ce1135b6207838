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

#include "synthsel/query.hpp"

#include <algorithm>
#include <map>

#include "synthsel/error.hpp"

namespace synthsel {

const Param* SynthQuery::find_variable(std::string_view name) const {
  for (const auto& v : variables) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

bool operator==(const SynthQuery& a, const SynthQuery& b) {
  if (a.logic != b.logic || !(a.fun == b.fun) || a.variables != b.variables ||
      a.constraints != b.constraints) {
    return false;
  }
  if (a.grammar.has_value() != b.grammar.has_value()) return false;
  return !a.grammar || *a.grammar == *b.grammar;
}

namespace {

void check_body(const Term& t, const std::vector<Param>& params) {
  switch (t.kind()) {
    case TermKind::Var: {
      const auto it =
          std::find_if(params.begin(), params.end(),
                       [&](const Param& p) { return p.name == t.name(); });
      if (it == params.end()) {
        throw SortError("candidate body references '" + t.name() +
                        "', which is not a parameter");
      }
      if (it->sort != t.sort()) {
        throw SortError("parameter '" + t.name() + "' used at sort " +
                        to_string(t.sort()));
      }
      return;
    }
    case TermKind::Call:
      throw SortError("candidate body calls function '" + t.name() + "'");
    default:
      break;
  }
  for (const auto& c : t.children()) check_body(c, params);
}

Term substitute_vars(const Term& t, const std::map<std::string, Term>& binding) {
  switch (t.kind()) {
    case TermKind::Var: {
      const auto it = binding.find(t.name());
      return it == binding.end() ? t : it->second;
    }
    case TermKind::IntLit:
    case TermKind::BoolLit:
    case TermKind::BvLit:
      return t;
    default:
      break;
  }
  std::vector<Term> kids;
  kids.reserve(t.children().size());
  bool changed = false;
  for (const auto& c : t.children()) {
    kids.push_back(substitute_vars(c, binding));
    changed = changed || !(kids.back().raw() == c.raw());
  }
  if (!changed) return t;
  switch (t.kind()) {
    case TermKind::Ite:
      return Term::ite(kids[0], kids[1], kids[2]);
    case TermKind::App:
      return Term::app(t.op(), std::move(kids));
    default:
      return Term::call(t.name(), t.sort(), std::move(kids));
  }
}

void collect_literals(const Term& t, std::vector<Term>& out) {
  if (t.kind() == TermKind::IntLit || t.kind() == TermKind::BvLit) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    return;
  }
  for (const auto& c : t.children()) collect_literals(c, out);
}

}  // namespace

Candidate Candidate::make(std::string name, std::vector<Param> params,
                          Sort result, Term body) {
  if (!body.valid()) throw SortError("candidate has no body");
  for (std::size_t i = 0; i < params.size(); ++i) {
    for (std::size_t j = i + 1; j < params.size(); ++j) {
      if (params[i].name == params[j].name) {
        throw SortError("duplicate parameter '" + params[i].name + "'");
      }
    }
  }
  check_body(body, params);
  if (body.sort() != result) {
    throw SortError("candidate body has sort " + to_string(body.sort()) +
                    ", expected " + to_string(result));
  }
  Candidate c;
  c.name_ = std::move(name);
  c.params_ = std::move(params);
  c.result_ = result;
  c.body_ = std::move(body);
  return c;
}

Candidate Candidate::for_function(const SynthFun& fun, Term body) {
  return make(fun.name, fun.params, fun.result, std::move(body));
}

bool Candidate::matches(const SynthFun& fun) const {
  if (params_.size() != fun.params.size() || result_ != fun.result) {
    return false;
  }
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].sort != fun.params[i].sort) return false;
  }
  return true;
}

Term substitute_calls(const Term& term, std::string_view function,
                      const Candidate& cand) {
  if (term.is_literal() || term.kind() == TermKind::Var) return term;
  std::vector<Term> kids;
  kids.reserve(term.children().size());
  for (const auto& c : term.children()) {
    kids.push_back(substitute_calls(c, function, cand));
  }
  switch (term.kind()) {
    case TermKind::Ite:
      return Term::ite(kids[0], kids[1], kids[2]);
    case TermKind::App:
      return Term::app(term.op(), std::move(kids));
    case TermKind::Call: {
      if (term.name() != function) {
        return Term::call(term.name(), term.sort(), std::move(kids));
      }
      if (kids.size() != cand.params().size()) {
        throw SortError("call of '" + term.name() + "' with " +
                        std::to_string(kids.size()) + " arguments, candidate takes " +
                        std::to_string(cand.params().size()));
      }
      std::map<std::string, Term> binding;
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (kids[i].sort() != cand.params()[i].sort) {
          throw SortError("argument sort mismatch in call of '" + term.name() +
                          "'");
        }
        binding.emplace(cand.params()[i].name, kids[i]);
      }
      return substitute_vars(cand.body(), binding);
    }
    default:
      return term;
  }
}

Term substitute_solution(const SynthQuery& query, const Candidate& cand) {
  if (!cand.matches(query.fun)) {
    throw SortError("candidate signature does not match synth-fun '" +
                    query.fun.name + "'");
  }
  std::vector<Term> parts;
  parts.reserve(query.constraints.size());
  for (const auto& c : query.constraints) {
    parts.push_back(substitute_calls(c, query.fun.name, cand));
  }
  return conjunction(parts);
}

std::vector<Term> constraint_literals(const SynthQuery& query) {
  std::vector<Term> out;
  for (const auto& c : query.constraints) collect_literals(c, out);
  return out;
}

Grammar default_grammar(const SynthQuery& query) {
  const auto pool = constraint_literals(query);
  return default_grammar(query.logic, query.fun, pool);
}

}  // namespace synthsel
