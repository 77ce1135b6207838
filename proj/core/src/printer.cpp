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

#include <algorithm>
#include <cctype>

#include "synthsel/query.hpp"

namespace synthsel {

namespace {

bool simple_symbol(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0])) != 0) {
    return false;
  }
  static constexpr std::string_view kExtra = "~!@$%^&*_-+=<>.?/";
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 ||
           kExtra.find(c) != std::string_view::npos;
  });
}

std::string symbol(const std::string& s) {
  return simple_symbol(s) ? s : "|" + s + "|";
}

std::string bv_literal(const BitVec& bv) {
  if (bv.width % 4 != 0) return to_string(Value{bv});
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "#x";
  for (std::uint32_t i = bv.width / 4; i-- > 0;) {
    out.push_back(kHex[(bv.bits >> (4 * i)) & 0xFU]);
  }
  return out;
}

void print(const Term& t, std::string& out) {
  switch (t.kind()) {
    case TermKind::IntLit:
      out += to_string(Value{t.int_value()});
      return;
    case TermKind::BoolLit:
      out += t.bool_value() ? "true" : "false";
      return;
    case TermKind::BvLit:
      out += bv_literal(t.bv_value());
      return;
    case TermKind::Var:
      out += symbol(t.name());
      return;
    case TermKind::Ite:
      out += "(ite";
      break;
    case TermKind::App:
      out += "(";
      out += op_symbol(t.op());
      break;
    case TermKind::Call:
      out += "(" + symbol(t.name());
      break;
  }
  for (const auto& c : t.children()) {
    out.push_back(' ');
    print(c, out);
  }
  out.push_back(')');
}

std::string param_list(const std::vector<Param>& params) {
  std::string out = "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i != 0) out.push_back(' ');
    out += "(" + symbol(params[i].name) + " " + to_string(params[i].sort) + ")";
  }
  out.push_back(')');
  return out;
}

}  // namespace

std::string print_term(const Term& term) {
  std::string out;
  print(term, out);
  return out;
}

std::string print_define_fun(const Candidate& cand) {
  return "(define-fun " + symbol(cand.name()) + " " + param_list(cand.params()) +
         " " + to_string(cand.result()) + " " + print_term(cand.body()) + ")";
}

std::string print_query(const SynthQuery& query) {
  std::string out = "(set-logic " + query.logic + ")\n";
  out += "(synth-fun " + symbol(query.fun.name) + " " +
         param_list(query.fun.params) + " " + to_string(query.fun.result);
  if (query.grammar) out += " " + print_grammar(*query.grammar);
  out += ")\n";
  for (const auto& v : query.variables) {
    out += "(declare-var " + symbol(v.name) + " " + to_string(v.sort) + ")\n";
  }
  for (const auto& c : query.constraints) {
    out += "(constraint " + print_term(c) + ")\n";
  }
  out += "(check-synth)\n";
  return out;
}

}  // namespace synthsel
