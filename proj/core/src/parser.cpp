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
#include <map>

#include "synthsel/error.hpp"
#include "synthsel/query.hpp"

namespace synthsel {

namespace {

struct Macro {
  std::vector<Param> params;
  Sort result;
  Term body;
};

bool is_numeral(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  });
}

Integer numeral(std::string_view s) { return Integer(std::string(s)); }

std::optional<BitVec> bv_atom(const SExpr& e) {
  if (!e.is_atom() || e.quoted || e.atom.size() < 3 || e.atom[0] != '#') {
    return std::nullopt;
  }
  const char base = e.atom[1];
  const std::string_view digits = std::string_view(e.atom).substr(2);
  const std::uint32_t per = base == 'x' ? 4U : base == 'b' ? 1U : 0U;
  if (per == 0) return std::nullopt;
  const std::size_t width = digits.size() * per;
  if (width > 64) e.fail("bit-vector literals wider than 64 bits are unsupported");
  std::uint64_t bits = 0;
  for (char c : digits) {
    unsigned d = 0;
    if (c >= '0' && c <= '9') {
      d = static_cast<unsigned>(c - '0');
    } else if (per == 4 && c >= 'a' && c <= 'f') {
      d = static_cast<unsigned>(c - 'a' + 10);
    } else if (per == 4 && c >= 'A' && c <= 'F') {
      d = static_cast<unsigned>(c - 'A' + 10);
    } else {
      e.fail("malformed bit-vector literal '" + e.atom + "'");
    }
    if (d >= (1U << per)) e.fail("malformed bit-vector literal '" + e.atom + "'");
    bits = (per == 64 ? 0 : bits << per) | d;
  }
  return BitVec::make(bits, static_cast<std::uint32_t>(width));
}

// (_ bvN w)
std::optional<BitVec> indexed_bv(const SExpr& e) {
  if (!e.is_list() || e.items.size() != 3 || !e.items[0].is_symbol("_")) {
    return std::nullopt;
  }
  const auto& name = e.items[1];
  const auto& width = e.items[2];
  if (!name.is_atom() || name.atom.rfind("bv", 0) != 0 ||
      !is_numeral(name.atom.substr(2)) || !width.is_atom() ||
      !is_numeral(width.atom)) {
    return std::nullopt;
  }
  const Integer w = numeral(width.atom);
  if (w < 1 || w > 64) e.fail("bit-vector width must be between 1 and 64");
  const auto wu = static_cast<std::uint32_t>(w);
  const Integer v = numeral(name.atom.substr(2));
  const Integer masked = v & Integer(BitVec::mask(wu));
  return BitVec::make(static_cast<std::uint64_t>(masked), wu);
}

std::optional<Integer> negative_numeral(const SExpr& e) {
  if (e.is_list() && e.items.size() == 2 && e.items[0].is_symbol("-") &&
      e.items[1].is_atom() && !e.items[1].quoted && is_numeral(e.items[1].atom)) {
    return -numeral(e.items[1].atom);
  }
  return std::nullopt;
}

const std::string& symbol_of(const SExpr& e, std::string_view what) {
  if (!e.is_atom() || e.string_literal) e.fail("expected " + std::string(what));
  return e.atom;
}

std::vector<Param> parse_params(const SExpr& e) {
  if (!e.is_list()) e.fail("expected a parameter list");
  std::vector<Param> out;
  for (const auto& p : e.items) {
    if (!p.is_list() || p.items.size() != 2) p.fail("expected (name sort)");
    Param param{symbol_of(p.items[0], "a parameter name"), parse_sort(p.items[1])};
    for (const auto& prev : out) {
      if (prev.name == param.name) p.fail("duplicate parameter '" + param.name + "'");
    }
    out.push_back(std::move(param));
  }
  return out;
}

Term bind_args(const Macro& m, std::vector<Term> args, const SExpr& where) {
  if (args.size() != m.params.size()) {
    where.fail("expected " + std::to_string(m.params.size()) + " argument(s), got " +
               std::to_string(args.size()));
  }
  // Wrap the body as a candidate so substitute_calls does the binding.
  const Candidate c = Candidate::make("__macro", m.params, m.result, m.body);
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].sort() != m.params[i].sort) {
      where.fail("argument " + std::to_string(i + 1) + " has sort " +
                 to_string(args[i].sort()) + ", expected " +
                 to_string(m.params[i].sort));
    }
  }
  return substitute_calls(Term::call("__macro", m.result, std::move(args)),
                          "__macro", c);
}

/// Symbol environment for term parsing.
struct Scope {
  std::span<const Param> locals;
  const std::vector<Param>* globals = nullptr;
  const std::map<std::string, Macro>* macros = nullptr;
  const SynthFun* fun = nullptr;
};

class TermParser {
 public:
  explicit TermParser(Scope scope) : scope_(scope) {}

  Term parse(const SExpr& e) const {
    if (e.is_atom()) return parse_atom(e);
    if (e.items.empty()) e.fail("empty application");
    if (auto n = negative_numeral(e)) return Term::int_lit(*n);
    if (auto bv = indexed_bv(e)) return Term::bv_lit(*bv);
    const auto& head = e.items[0];
    if (!head.is_atom() || head.string_literal) e.fail("expected an operator");
    const std::string& name = head.atom;
    if (!head.quoted && (name == "let" || name == "forall" || name == "exists")) {
      throw UnsupportedError(std::to_string(e.line) + ":" + std::to_string(e.column) +
                             ": '" + name + "' is not supported");
    }
    std::vector<Term> args;
    args.reserve(e.items.size() - 1);
    for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(parse(e.items[i]));

    if (!head.quoted && name == "ite") {
      if (args.size() != 3) {
        e.fail("operator 'ite': expected 3 argument(s), got " +
               std::to_string(args.size()));
      }
      try {
        return Term::ite(args[0], args[1], args[2]);
      } catch (const SortError& err) {
        throw SortError(position(e) + err.what());
      }
    }
    if (scope_.fun != nullptr && name == scope_.fun->name) {
      const auto& params = scope_.fun->params;
      if (args.size() != params.size()) {
        throw SortError(position(e) + "function '" + name + "': expected " +
                        std::to_string(params.size()) + " argument(s), got " +
                        std::to_string(args.size()));
      }
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i].sort() != params[i].sort) {
          throw SortError(position(e) + "function '" + name + "': argument " +
                          std::to_string(i + 1) + " has sort " +
                          to_string(args[i].sort()) + ", expected " +
                          to_string(params[i].sort));
        }
      }
      return Term::call(name, scope_.fun->result, std::move(args));
    }
    if (scope_.macros != nullptr) {
      if (auto it = scope_.macros->find(name); it != scope_.macros->end()) {
        try {
          return bind_args(it->second, std::move(args), e);
        } catch (const SortError& err) {
          throw SortError(position(e) + err.what());
        }
      }
    }
    if (!head.quoted) {
      if (auto op = op_from_symbol(name)) {
        try {
          return Term::app(*op, std::move(args));
        } catch (const SortError& err) {
          throw SortError(position(e) + err.what());
        }
      }
    }
    throw Error(position(e) + "undeclared function '" + name + "'");
  }

 private:
  static std::string position(const SExpr& e) {
    return std::to_string(e.line) + ":" + std::to_string(e.column) + ": ";
  }

  Term parse_atom(const SExpr& e) const {
    if (e.string_literal) e.fail("string literals are not supported");
    if (!e.quoted) {
      if (is_numeral(e.atom)) return Term::int_lit(numeral(e.atom));
      if (e.atom.size() > 1 && e.atom[0] == '-' &&
          is_numeral(std::string_view(e.atom).substr(1))) {
        return Term::int_lit(-numeral(std::string_view(e.atom).substr(1)));
      }
      if (auto bv = bv_atom(e)) return Term::bv_lit(*bv);
      if (e.atom == "true") return Term::bool_lit(true);
      if (e.atom == "false") return Term::bool_lit(false);
    }
    for (const auto& p : scope_.locals) {
      if (p.name == e.atom) return Term::var(p.name, p.sort);
    }
    if (scope_.globals != nullptr) {
      for (const auto& p : *scope_.globals) {
        if (p.name == e.atom) return Term::var(p.name, p.sort);
      }
    }
    if (scope_.macros != nullptr) {
      if (auto it = scope_.macros->find(e.atom); it != scope_.macros->end()) {
        if (!it->second.params.empty()) {
          e.fail("function '" + e.atom + "' used without arguments");
        }
        return it->second.body;
      }
    }
    throw Error(position(e) + "undeclared symbol '" + e.atom + "'");
  }

  Scope scope_;
};

// ---- grammars ---------------------------------------------------------------

class GrammarParser {
 public:
  GrammarParser(Grammar& g, const SynthFun& fun, const std::map<std::string, Macro>& macros)
      : g_(g), fun_(fun), macros_(macros) {}

  void parse_rules(const SExpr& rules) {
    if (!rules.is_list()) rules.fail("expected grouped rule list");
    for (const auto& rule : rules.items) {
      if (!rule.is_list() || rule.items.size() != 3 || !rule.items[2].is_list()) {
        rule.fail("expected (name sort (productions...))");
      }
      const std::size_t nt = g_.find_nonterminal(symbol_of(rule.items[0], "a nonterminal"));
      if (nt == Grammar::npos) rule.fail("undeclared nonterminal '" + rule.items[0].atom + "'");
      if (parse_sort(rule.items[1]) != g_.nonterminals()[nt].sort) {
        rule.items[1].fail("sort differs from the nonterminal declaration");
      }
      for (const auto& prod : rule.items[2].items) add(nt, prod);
    }
  }

 private:
  void add(std::size_t nt, const SExpr& prod) {
    const Sort sort = g_.nonterminals()[nt].sort;
    if (prod.is_list() && prod.items.size() == 2 &&
        (prod.items[0].is_symbol("Constant") || prod.items[0].is_symbol("Variable"))) {
      if (parse_sort(prod.items[1]) != sort) prod.fail("sort differs from the nonterminal");
      if (prod.items[0].is_symbol("Variable")) {
        for (const auto& p : fun_.params) {
          if (p.sort == sort) g_.add_production(nt, {g_.leaf(Term::var(p.name, p.sort))});
        }
      } else {
        // Any constant: approximated by the default literal pool of the sort.
        if (sort.is_bool()) {
          g_.add_production(nt, {g_.leaf(Term::bool_lit(false))});
          g_.add_production(nt, {g_.leaf(Term::bool_lit(true))});
        } else if (sort.is_int()) {
          g_.add_production(nt, {g_.leaf(Term::int_lit(0))});
          g_.add_production(nt, {g_.leaf(Term::int_lit(1))});
        } else {
          g_.add_production(nt, {g_.leaf(Term::bv_lit(BitVec::make(0, sort.width)))});
          g_.add_production(nt, {g_.leaf(Term::bv_lit(BitVec::make(1, sort.width)))});
        }
      }
      return;
    }
    std::vector<Symbol> rhs;
    rhs_of(prod, rhs);
    try {
      g_.add_production(nt, std::move(rhs));
    } catch (const SortError& err) {
      throw SortError(std::to_string(prod.line) + ":" + std::to_string(prod.column) +
                      ": " + err.what());
    }
  }

  Sort rhs_of(const SExpr& e, std::vector<Symbol>& out) {
    if (e.is_atom()) {
      if (!e.quoted) {
        const std::size_t nt = g_.find_nonterminal(e.atom);
        if (nt != Grammar::npos) {
          out.push_back(nonterminal_symbol(nt));
          return g_.nonterminals()[nt].sort;
        }
      }
      const Term t = TermParser(Scope{fun_.params, nullptr, &macros_, nullptr}).parse(e);
      out.push_back(g_.leaf(t));
      return t.sort();
    }
    if (negative_numeral(e) || indexed_bv(e)) {
      const Term t = TermParser(Scope{}).parse(e);
      out.push_back(g_.leaf(t));
      return t.sort();
    }
    if (e.items.empty() || !e.items[0].is_atom()) e.fail("malformed production");
    const std::string& name = e.items[0].atom;
    const std::size_t slot = out.size();
    out.push_back(0);
    std::vector<Sort> sorts;
    for (std::size_t i = 1; i < e.items.size(); ++i) sorts.push_back(rhs_of(e.items[i], out));
    const auto arity = static_cast<std::uint32_t>(sorts.size());
    if (name == "ite") {
      if (arity != 3) e.fail("operator 'ite': expected 3 argument(s)");
      out[slot] = g_.ite(sorts[1]);
      return sorts[1];
    }
    const auto op = op_from_symbol(name);
    if (!op) {
      if (macros_.count(name) != 0) {
        throw UnsupportedError(std::to_string(e.line) + ":" + std::to_string(e.column) +
                               ": defined functions inside grammars are not supported");
      }
      e.fail("unknown operator '" + name + "' in grammar");
    }
    Sort result;
    try {
      result = check_op(*op, sorts);
    } catch (const SortError& err) {
      throw SortError(std::to_string(e.line) + ":" + std::to_string(e.column) + ": " +
                      err.what());
    }
    out[slot] = g_.op(*op, arity, result);
    return result;
  }

  Grammar& g_;
  const SynthFun& fun_;
  const std::map<std::string, Macro>& macros_;
};

Grammar parse_grammar(std::span<const SExpr> parts, const SynthFun& fun,
                      const std::map<std::string, Macro>& macros) {
  Grammar g;
  const SExpr* rules = nullptr;
  if (parts.size() == 2) {
    // v2: ((N S) ...) ((N S (prods)) ...)
    for (const auto& d : parts[0].items) {
      if (!d.is_list() || d.items.size() != 2) d.fail("expected (name sort)");
      g.add_nonterminal(symbol_of(d.items[0], "a nonterminal"), parse_sort(d.items[1]));
    }
    rules = &parts[1];
  } else if (parts.size() == 1) {
    // v1: ((N S (prods)) ...)
    for (const auto& r : parts[0].items) {
      if (!r.is_list() || r.items.size() != 3) r.fail("expected (name sort (productions...))");
      g.add_nonterminal(symbol_of(r.items[0], "a nonterminal"), parse_sort(r.items[1]));
    }
    rules = &parts[0];
  } else {
    parts[0].fail("malformed grammar");
  }
  if (g.nonterminals().empty()) rules->fail("grammar declares no nonterminals");
  for (const auto& nt : g.nonterminals()) {
    for (const auto& p : fun.params) {
      if (p.name == nt.name) rules->fail("nonterminal '" + nt.name + "' shadows a parameter");
    }
  }
  if (g.nonterminals()[0].sort != fun.result) {
    rules->fail("start nonterminal sort differs from the function's result sort");
  }
  GrammarParser(g, fun, macros).parse_rules(*rules);
  g.set_start(0);
  g.validate();
  return g;
}

// ---- commands ---------------------------------------------------------------

class QueryParser {
 public:
  SynthQuery run(std::string_view text) {
    const SExprDocument doc = read_sexprs(text);
    q_.source_tokens = doc.token_count;
    for (const auto& cmd : doc.items) {
      if (done_) break;
      command(cmd);
    }
    if (!have_fun_) throw Error("query declares no synth-fun");
    if (q_.logic.empty()) q_.logic = "ALL";
    return std::move(q_);
  }

 private:
  void command(const SExpr& cmd) {
    const auto head = cmd.head();
    if (!head) cmd.fail("expected a command");
    const std::string_view h = *head;
    if (h == "set-logic") {
      if (cmd.items.size() != 2) cmd.fail("set-logic takes one argument");
      q_.logic = symbol_of(cmd.items[1], "a logic name");
    } else if (h == "set-info" || h == "set-option" || h == "set-feature") {
      return;
    } else if (h == "declare-var") {
      if (cmd.items.size() != 3) cmd.fail("declare-var takes a name and a sort");
      declare(cmd.items[1], parse_sort(cmd.items[2]));
    } else if (h == "declare-primed-var") {
      if (cmd.items.size() != 3) cmd.fail("declare-primed-var takes a name and a sort");
      const Sort s = parse_sort(cmd.items[2]);
      declare(cmd.items[1], s);
      declare_name(symbol_of(cmd.items[1], "a variable name") + "!", s, cmd.items[1]);
    } else if (h == "define-fun") {
      define_fun(cmd);
    } else if (h == "synth-fun") {
      synth_fun(cmd, false);
    } else if (h == "synth-inv") {
      synth_fun(cmd, true);
    } else if (h == "constraint") {
      if (cmd.items.size() != 2) cmd.fail("constraint takes one term");
      if (!have_fun_) cmd.fail("constraint before synth-fun");
      Term t = term(cmd.items[1]);
      if (!t.sort().is_bool()) {
        throw SortError(std::to_string(cmd.line) + ":" + std::to_string(cmd.column) +
                        ": constraint has sort " + to_string(t.sort()) + ", expected Bool");
      }
      q_.constraints.push_back(std::move(t));
    } else if (h == "inv-constraint") {
      inv_constraint(cmd);
    } else if (h == "check-synth") {
      done_ = true;
    } else {
      throw UnsupportedError(std::to_string(cmd.line) + ":" + std::to_string(cmd.column) +
                             ": unsupported command '" + std::string(h) + "'");
    }
  }

  void declare(const SExpr& name, Sort sort) {
    declare_name(symbol_of(name, "a variable name"), sort, name);
  }

  void declare_name(const std::string& name, Sort sort, const SExpr& where) {
    if (q_.find_variable(name) != nullptr) where.fail("redeclared variable '" + name + "'");
    q_.variables.push_back({name, sort});
  }

  Term term(const SExpr& e) const {
    return TermParser(Scope{{}, &q_.variables, &macros_, have_fun_ ? &q_.fun : nullptr})
        .parse(e);
  }

  void define_fun(const SExpr& cmd) {
    if (cmd.items.size() != 5) cmd.fail("define-fun takes name, parameters, sort and body");
    const std::string& name = symbol_of(cmd.items[1], "a function name");
    Macro m;
    m.params = parse_params(cmd.items[2]);
    m.result = parse_sort(cmd.items[3]);
    m.body = TermParser(Scope{m.params, nullptr, &macros_, nullptr}).parse(cmd.items[4]);
    if (m.body.sort() != m.result) {
      throw SortError(std::to_string(cmd.line) + ":" + std::to_string(cmd.column) +
                      ": body of '" + name + "' has sort " + to_string(m.body.sort()) +
                      ", expected " + to_string(m.result));
    }
    macros_[name] = std::move(m);
  }

  void synth_fun(const SExpr& cmd, bool inv) {
    if (have_fun_) {
      throw UnsupportedError(std::to_string(cmd.line) + ":" + std::to_string(cmd.column) +
                             ": only one synth-fun per query is supported");
    }
    const std::size_t min_items = inv ? 3 : 4;
    if (cmd.items.size() < min_items) cmd.fail("malformed synthesis declaration");
    q_.fun.name = symbol_of(cmd.items[1], "a function name");
    q_.fun.params = parse_params(cmd.items[2]);
    q_.fun.result = inv ? Sort::boolean() : parse_sort(cmd.items[3]);
    const std::size_t gstart = min_items;
    if (cmd.items.size() > gstart) {
      q_.grammar = parse_grammar(std::span(cmd.items).subspan(gstart), q_.fun, macros_);
    }
    have_fun_ = true;
    inv_ = inv;
  }

  void inv_constraint(const SExpr& cmd) {
    if (cmd.items.size() != 5) cmd.fail("inv-constraint takes four function names");
    if (!have_fun_ || !inv_ || symbol_of(cmd.items[1], "a function name") != q_.fun.name) {
      cmd.fail("inv-constraint must name the synth-inv function");
    }
    std::vector<Term> x;
    std::vector<Term> xp;
    for (const auto& p : q_.fun.params) {
      if (q_.find_variable(p.name) == nullptr) q_.variables.push_back(p);
      const std::string primed = p.name + "!";
      if (q_.find_variable(primed) == nullptr) q_.variables.push_back({primed, p.sort});
      x.push_back(Term::var(p.name, p.sort));
      xp.push_back(Term::var(primed, p.sort));
    }
    auto apply = [&](const SExpr& name, std::vector<Term> args) {
      const auto it = macros_.find(symbol_of(name, "a function name"));
      if (it == macros_.end()) name.fail("undeclared function '" + name.atom + "'");
      Term t = bind_args(it->second, std::move(args), name);
      if (!t.sort().is_bool()) name.fail("'" + name.atom + "' must return Bool");
      return t;
    };
    std::vector<Term> both = x;
    both.insert(both.end(), xp.begin(), xp.end());
    const Sort b = Sort::boolean();
    const Term inv_x = Term::call(q_.fun.name, b, x);
    const Term inv_xp = Term::call(q_.fun.name, b, xp);
    q_.constraints.push_back(Term::app(Op::Implies, {apply(cmd.items[2], x), inv_x}));
    q_.constraints.push_back(Term::app(
        Op::Implies, {Term::app(Op::And, {inv_x, apply(cmd.items[3], both)}), inv_xp}));
    q_.constraints.push_back(Term::app(Op::Implies, {inv_x, apply(cmd.items[4], x)}));
    q_.from_invariant = true;
  }

  SynthQuery q_;
  std::map<std::string, Macro> macros_;
  bool have_fun_ = false;
  bool inv_ = false;
  bool done_ = false;
};

}  // namespace

Sort parse_sort(const SExpr& e) {
  if (e.is_atom()) {
    if (e.atom == "Int") return Sort::integer();
    if (e.atom == "Bool") return Sort::boolean();
    throw UnsupportedError(std::to_string(e.line) + ":" + std::to_string(e.column) +
                           ": unsupported sort '" + e.atom + "'");
  }
  if (e.items.size() == 3 && e.items[0].is_symbol("_") && e.items[1].is_symbol("BitVec") &&
      e.items[2].is_atom() && is_numeral(e.items[2].atom)) {
    const Integer w = numeral(e.items[2].atom);
    if (w < 1 || w > 64) {
      throw UnsupportedError(std::to_string(e.line) + ":" + std::to_string(e.column) +
                             ": bit-vector width must be between 1 and 64");
    }
    return Sort::bitvec(static_cast<std::uint32_t>(w));
  }
  throw UnsupportedError(std::to_string(e.line) + ":" + std::to_string(e.column) +
                         ": unsupported sort '" + to_string(e) + "'");
}

SynthQuery parse_query(std::string_view text) { return QueryParser().run(text); }

Candidate parse_define_fun(const SExpr& e) {
  if (!e.is_list() || e.items.size() != 5 || !e.items[0].is_symbol("define-fun")) {
    e.fail("expected (define-fun name ((p sort) ...) sort body)");
  }
  const std::string& name = symbol_of(e.items[1], "a function name");
  auto params = parse_params(e.items[2]);
  const Sort result = parse_sort(e.items[3]);
  Term body = TermParser(Scope{params, nullptr, nullptr, nullptr}).parse(e.items[4]);
  try {
    return Candidate::make(name, std::move(params), result, std::move(body));
  } catch (const SortError& err) {
    throw SortError(std::to_string(e.line) + ":" + std::to_string(e.column) + ": " +
                    err.what());
  }
}

Candidate parse_define_fun(std::string_view text) {
  const auto doc = read_sexprs(text);
  if (doc.items.size() != 1) throw Error("expected exactly one define-fun");
  return parse_define_fun(doc.items[0]);
}

Term parse_term(const SExpr& expr, std::span<const Param> variables) {
  return TermParser(Scope{variables, nullptr, nullptr, nullptr}).parse(expr);
}

Term parse_term(std::string_view text, std::span<const Param> variables) {
  const auto doc = read_sexprs(text);
  if (doc.items.size() != 1) throw Error("expected exactly one term");
  return parse_term(doc.items[0], variables);
}

Value parse_value(const SExpr& e) {
  const Term t = TermParser(Scope{}).parse(e);
  switch (t.kind()) {
    case TermKind::IntLit:
      return t.int_value();
    case TermKind::BoolLit:
      return t.bool_value();
    case TermKind::BvLit:
      return t.bv_value();
    default:
      e.fail("expected a literal value");
  }
}

}  // namespace synthsel
