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

#include "synthsel/grammar.hpp"

#include <algorithm>
#include <set>

#include "synthsel/error.hpp"
#include "synthsel/query.hpp"

namespace synthsel {

LogicFamily logic_family(std::string_view logic) {
  if (logic.starts_with("QF_")) logic.remove_prefix(3);
  if (logic == "LIA") return LogicFamily::LIA;
  if (logic == "NIA") return LogicFamily::NIA;
  if (logic == "BV") return LogicFamily::BV;
  return LogicFamily::Other;
}

std::size_t Grammar::add_nonterminal(std::string name, Sort sort) {
  if (find_nonterminal(name) != npos) {
    throw Error("duplicate nonterminal '" + name + "'");
  }
  nonterminals_.push_back({std::move(name), sort});
  productions_.emplace_back();
  return nonterminals_.size() - 1;
}

std::size_t Grammar::find_nonterminal(std::string_view name) const {
  for (std::size_t i = 0; i < nonterminals_.size(); ++i) {
    if (nonterminals_[i].name == name) return i;
  }
  return npos;
}

Symbol Grammar::intern(GrammarTerminal terminal) {
  for (std::size_t i = 0; i < terminals_.size(); ++i) {
    const auto& t = terminals_[i];
    if (t.kind == terminal.kind && t.text == terminal.text &&
        t.arity == terminal.arity && t.sort == terminal.sort) {
      return static_cast<Symbol>(i);
    }
  }
  terminals_.push_back(std::move(terminal));
  return static_cast<Symbol>(terminals_.size() - 1);
}

Symbol Grammar::leaf(const Term& term) {
  if (!term.is_literal() && term.kind() != TermKind::Var) {
    throw SortError("grammar leaf must be a literal or a variable");
  }
  GrammarTerminal t;
  t.kind = GrammarTerminal::Kind::Leaf;
  t.leaf = term;
  t.sort = term.sort();
  t.text = print_term(term);
  return intern(std::move(t));
}

Symbol Grammar::op(Op op, std::uint32_t arity, Sort result) {
  GrammarTerminal t;
  t.kind = GrammarTerminal::Kind::Operator;
  t.op = op;
  t.arity = arity;
  t.sort = result;
  t.text = std::string(op_symbol(op));
  return intern(std::move(t));
}

Symbol Grammar::ite(Sort sort) {
  GrammarTerminal t;
  t.kind = GrammarTerminal::Kind::Ite;
  t.arity = 3;
  t.sort = sort;
  t.text = "ite";
  return intern(std::move(t));
}

Sort Grammar::check_rhs(std::span<const Symbol> rhs, std::size_t& pos) const {
  if (pos >= rhs.size()) throw SortError("truncated production");
  const Symbol s = rhs[pos++];
  if (is_nonterminal(s)) {
    const std::size_t idx = nonterminal_index(s);
    if (idx >= nonterminals_.size()) throw SortError("unknown nonterminal");
    return nonterminals_[idx].sort;
  }
  if (static_cast<std::size_t>(s) >= terminals_.size()) {
    throw SortError("unknown terminal");
  }
  const auto& t = terminals_[static_cast<std::size_t>(s)];
  std::vector<Sort> args;
  for (std::uint32_t i = 0; i < t.arity; ++i) {
    args.push_back(check_rhs(rhs, pos));
  }
  switch (t.kind) {
    case GrammarTerminal::Kind::Leaf:
      return t.sort;
    case GrammarTerminal::Kind::Ite:
      if (!args[0].is_bool() || args[1] != args[2] || args[1] != t.sort) {
        throw SortError("ill-sorted ite production");
      }
      return t.sort;
    case GrammarTerminal::Kind::Operator:
      if (check_op(t.op, args) != t.sort) {
        throw SortError("operator result sort mismatch in production");
      }
      return t.sort;
  }
  return t.sort;
}

void Grammar::add_production(std::size_t nt, std::vector<Symbol> rhs) {
  if (nt >= nonterminals_.size()) throw SortError("unknown nonterminal");
  std::size_t pos = 0;
  const Sort sort = check_rhs(rhs, pos);
  if (pos != rhs.size()) throw SortError("production is not a single term");
  if (sort != nonterminals_[nt].sort) {
    throw SortError("production of sort " + to_string(sort) +
                    " for nonterminal '" + nonterminals_[nt].name +
                    "' of sort " + to_string(nonterminals_[nt].sort));
  }
  auto& prods = productions_[nt];
  for (const auto& p : prods) {
    if (p.rhs == rhs) return;
  }
  prods.push_back({std::move(rhs)});
}

void Grammar::validate() const {
  if (nonterminals_.empty()) throw Error("grammar has no nonterminals");
  if (start_ >= nonterminals_.size()) throw Error("invalid start symbol");
  for (const auto& nt : nonterminals_) {
    for (const auto& t : terminals_) {
      if (t.text == nt.name) {
        throw Error("symbol '" + nt.name +
                    "' is both a nonterminal and a terminal");
      }
    }
  }
  std::vector<bool> productive(nonterminals_.size(), false);
  for (std::size_t i = 0; i < nonterminals_.size(); ++i) {
    if (productions_[i].empty()) {
      throw Error("nonterminal '" + nonterminals_[i].name +
                  "' has no productions");
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < nonterminals_.size(); ++i) {
      if (productive[i]) continue;
      for (const auto& p : productions_[i]) {
        const bool ok = std::all_of(p.rhs.begin(), p.rhs.end(), [&](Symbol s) {
          return !is_nonterminal(s) || productive[nonterminal_index(s)];
        });
        if (ok) {
          productive[i] = true;
          changed = true;
          break;
        }
      }
    }
  }
  for (std::size_t i = 0; i < nonterminals_.size(); ++i) {
    if (!productive[i]) {
      throw Error("nonterminal '" + nonterminals_[i].name +
                  "' derives no terminal string");
    }
  }
}

namespace {

Term decode(const Grammar& g, std::span<const Symbol> form, std::size_t& pos) {
  if (pos >= form.size()) throw Error("truncated sentential form");
  const Symbol s = form[pos++];
  if (is_nonterminal(s)) throw Error("sentential form is not complete");
  const auto& t = g.terminal(s);
  std::vector<Term> args;
  args.reserve(t.arity);
  for (std::uint32_t i = 0; i < t.arity; ++i) args.push_back(decode(g, form, pos));
  switch (t.kind) {
    case GrammarTerminal::Kind::Leaf:
      return t.leaf;
    case GrammarTerminal::Kind::Ite:
      return Term::ite(std::move(args[0]), std::move(args[1]), std::move(args[2]));
    case GrammarTerminal::Kind::Operator:
      return Term::app(t.op, std::move(args));
  }
  return t.leaf;
}

void print_symbols(const Grammar& g, std::span<const Symbol> form,
                   std::size_t& pos, std::string& out) {
  const Symbol s = form[pos++];
  if (is_nonterminal(s)) {
    out += g.nonterminals()[nonterminal_index(s)].name;
    return;
  }
  const auto& t = g.terminal(s);
  if (t.arity == 0) {
    out += t.text;
    return;
  }
  out += "(" + t.text;
  for (std::uint32_t i = 0; i < t.arity && pos < form.size(); ++i) {
    out.push_back(' ');
    print_symbols(g, form, pos, out);
  }
  out.push_back(')');
}

}  // namespace

Term Grammar::to_term(std::span<const Symbol> form) const {
  std::size_t pos = 0;
  Term t = decode(*this, form, pos);
  if (pos != form.size()) throw Error("trailing symbols in sentential form");
  return t;
}

std::string Grammar::print_form(std::span<const Symbol> form) const {
  std::string out;
  std::size_t pos = 0;
  while (pos < form.size()) {
    if (!out.empty()) out.push_back(' ');
    print_symbols(*this, form, pos, out);
  }
  return out;
}

bool operator==(const Grammar& a, const Grammar& b) {
  const auto& na = a.nonterminals();
  const auto& nb = b.nonterminals();
  if (na.size() != nb.size() || a.start() != b.start()) return false;
  for (std::size_t i = 0; i < na.size(); ++i) {
    if (na[i].name != nb[i].name || na[i].sort != nb[i].sort) return false;
    const auto& pa = a.productions(i);
    const auto& pb = b.productions(i);
    if (pa.size() != pb.size()) return false;
    for (std::size_t j = 0; j < pa.size(); ++j) {
      if (a.print_form(pa[j].rhs) != b.print_form(pb[j].rhs)) return false;
    }
  }
  return true;
}

std::string print_grammar(const Grammar& grammar) {
  // The start nonterminal is listed first, as SyGuS-IF requires.
  std::vector<std::size_t> order{grammar.start()};
  for (std::size_t i = 0; i < grammar.nonterminals().size(); ++i) {
    if (i != grammar.start()) order.push_back(i);
  }
  std::string decls = "(";
  std::string rules = "(";
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& nt = grammar.nonterminals()[order[k]];
    if (k != 0) {
      decls.push_back(' ');
      rules.push_back(' ');
    }
    decls += "(" + nt.name + " " + to_string(nt.sort) + ")";
    rules += "(" + nt.name + " " + to_string(nt.sort) + " (";
    const auto& prods = grammar.productions(order[k]);
    for (std::size_t j = 0; j < prods.size(); ++j) {
      if (j != 0) rules.push_back(' ');
      rules += grammar.print_form(prods[j].rhs);
    }
    rules += "))";
  }
  return decls + ") " + rules + ")";
}

namespace {

std::string fresh_name(std::string base, const SynthFun& fun) {
  auto clashes = [&](const std::string& n) {
    return std::any_of(fun.params.begin(), fun.params.end(),
                       [&](const Param& p) { return p.name == n; }) ||
           n == fun.name;
  };
  while (clashes(base)) base += "_";
  return base;
}

void add_literals(Grammar& g, std::size_t nt, Sort sort,
                  std::span<const Term> pool) {
  for (const auto& lit : pool) {
    if (lit.sort() == sort) g.add_production(nt, {g.leaf(lit)});
  }
}

void add_params(Grammar& g, std::size_t nt, Sort sort, const SynthFun& fun) {
  for (const auto& p : fun.params) {
    if (p.sort == sort) g.add_production(nt, {g.leaf(Term::var(p.name, p.sort))});
  }
}

void add_bool_rules(Grammar& g, std::size_t bool_nt, const SynthFun& fun) {
  const Symbol b = nonterminal_symbol(bool_nt);
  const Sort bs = Sort::boolean();
  add_params(g, bool_nt, bs, fun);
  g.add_production(bool_nt, {g.op(Op::And, 2, bs), b, b});
  g.add_production(bool_nt, {g.op(Op::Or, 2, bs), b, b});
  g.add_production(bool_nt, {g.op(Op::Not, 1, bs), b});
}

}  // namespace

Grammar default_grammar(std::string_view logic, const SynthFun& fun,
                        std::span<const Term> extra_literals) {
  const LogicFamily family = logic_family(logic);
  Grammar g;
  const Sort bs = Sort::boolean();
  if (family == LogicFamily::LIA || family == LogicFamily::NIA) {
    for (const auto& p : fun.params) {
      if (!p.sort.is_int() && !p.sort.is_bool()) {
        throw UnsupportedError("parameter '" + p.name + "' of sort " +
                               to_string(p.sort) + " in integer logic");
      }
    }
    if (!fun.result.is_int() && !fun.result.is_bool()) {
      throw UnsupportedError("result sort " + to_string(fun.result) +
                             " in integer logic");
    }
    const Sort is = Sort::integer();
    const std::size_t i_nt = g.add_nonterminal(fresh_name("I", fun), is);
    const std::size_t b_nt = g.add_nonterminal(fresh_name("B", fun), bs);
    const Symbol i = nonterminal_symbol(i_nt);
    const Symbol b = nonterminal_symbol(b_nt);
    add_params(g, i_nt, is, fun);
    std::vector<Term> pool{Term::int_lit(0), Term::int_lit(1)};
    pool.insert(pool.end(), extra_literals.begin(), extra_literals.end());
    add_literals(g, i_nt, is, pool);
    g.add_production(i_nt, {g.op(Op::Add, 2, is), i, i});
    g.add_production(i_nt, {g.op(Op::Sub, 2, is), i, i});
    g.add_production(i_nt, {g.op(Op::Mul, 2, is), i, i});
    g.add_production(i_nt, {g.ite(is), b, i, i});
    g.add_production(b_nt, {g.op(Op::Ge, 2, bs), i, i});
    g.add_production(b_nt, {g.op(Op::Le, 2, bs), i, i});
    g.add_production(b_nt, {g.op(Op::Eq, 2, bs), i, i});
    add_bool_rules(g, b_nt, fun);
    g.set_start(fun.result.is_int() ? i_nt : b_nt);
    g.validate();
    return g;
  }
  if (family == LogicFamily::BV) {
    std::uint32_t width = fun.result.is_bitvec() ? fun.result.width : 0;
    for (const auto& p : fun.params) {
      if (p.sort.is_int()) {
        throw UnsupportedError("Int parameter '" + p.name + "' in BV logic");
      }
      if (p.sort.is_bitvec()) {
        if (width == 0) width = p.sort.width;
        if (p.sort.width != width) {
          throw UnsupportedError("mixed bit-vector widths in signature");
        }
      }
    }
    if (fun.result.is_int()) {
      throw UnsupportedError("Int result in BV logic");
    }
    if (width == 0) {
      const std::size_t b_nt = g.add_nonterminal(fresh_name("B", fun), bs);
      g.add_production(b_nt, {g.leaf(Term::bool_lit(false))});
      g.add_production(b_nt, {g.leaf(Term::bool_lit(true))});
      add_bool_rules(g, b_nt, fun);
      g.set_start(b_nt);
      g.validate();
      return g;
    }
    const Sort vs = Sort::bitvec(width);
    const std::size_t v_nt = g.add_nonterminal(fresh_name("V", fun), vs);
    const std::size_t b_nt = g.add_nonterminal(fresh_name("B", fun), bs);
    const Symbol v = nonterminal_symbol(v_nt);
    const Symbol b = nonterminal_symbol(b_nt);
    add_params(g, v_nt, vs, fun);
    std::vector<Term> pool{Term::bv_lit(BitVec::make(0, width)),
                           Term::bv_lit(BitVec::make(1, width))};
    pool.insert(pool.end(), extra_literals.begin(), extra_literals.end());
    add_literals(g, v_nt, vs, pool);
    g.add_production(v_nt, {g.op(Op::BvAdd, 2, vs), v, v});
    g.add_production(v_nt, {g.op(Op::BvSub, 2, vs), v, v});
    g.add_production(v_nt, {g.op(Op::BvAnd, 2, vs), v, v});
    g.add_production(v_nt, {g.op(Op::BvOr, 2, vs), v, v});
    g.add_production(v_nt, {g.op(Op::BvXor, 2, vs), v, v});
    g.add_production(v_nt, {g.op(Op::BvNot, 1, vs), v});
    g.add_production(v_nt, {g.ite(vs), b, v, v});
    g.add_production(b_nt, {g.op(Op::Eq, 2, bs), v, v});
    g.add_production(b_nt, {g.op(Op::BvUlt, 2, bs), v, v});
    add_bool_rules(g, b_nt, fun);
    g.set_start(fun.result.is_bool() ? b_nt : v_nt);
    g.validate();
    return g;
  }
  throw UnsupportedError("no default grammar for logic '" + std::string(logic) +
                         "'");
}

}  // namespace synthsel
