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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "synthsel/signature.hpp"
#include "synthsel/term.hpp"

namespace synthsel {

/// Grammar symbols. Non-negative values index the terminal table; negative
/// values name nonterminals (`-1` is nonterminal 0).
using Symbol = std::int32_t;

constexpr bool is_nonterminal(Symbol s) { return s < 0; }
constexpr std::size_t nonterminal_index(Symbol s) {
  return static_cast<std::size_t>(-(s + 1));
}
constexpr Symbol nonterminal_symbol(std::size_t index) {
  return -static_cast<Symbol>(index) - 1;
}

struct GrammarTerminal {
  enum class Kind : std::uint8_t { Leaf, Operator, Ite };

  Kind kind = Kind::Leaf;
  Term leaf;  // Leaf: a literal or a parameter reference
  Op op = Op::Add;
  std::uint32_t arity = 0;
  Sort sort;
  std::string text;
};

struct Nonterminal {
  std::string name;
  Sort sort;
};

/// A production right-hand side: one term in prefix order whose holes are
/// nonterminals, e.g. `(+ I I)` is `[+/2, I, I]`.
struct Production {
  std::vector<Symbol> rhs;
};

/// Context-free grammar (V, Sigma, R, S) over prefix-encoded terms.
class Grammar {
 public:
  std::size_t add_nonterminal(std::string name, Sort sort);
  Symbol leaf(const Term& term);
  Symbol op(Op op, std::uint32_t arity, Sort result);
  Symbol ite(Sort sort);
  /// Appends `rhs` to the productions of `nt`. Throws SortError on an
  /// ill-formed or ill-sorted right-hand side; exact duplicates are dropped.
  void add_production(std::size_t nt, std::vector<Symbol> rhs);
  void set_start(std::size_t nt) { start_ = nt; }

  std::size_t start() const { return start_; }
  const std::vector<Nonterminal>& nonterminals() const { return nonterminals_; }
  const std::vector<GrammarTerminal>& terminals() const { return terminals_; }
  const std::vector<Production>& productions(std::size_t nt) const {
    return productions_.at(nt);
  }
  const GrammarTerminal& terminal(Symbol s) const {
    return terminals_.at(static_cast<std::size_t>(s));
  }
  std::size_t find_nonterminal(std::string_view name) const;  // npos if none

  /// Throws Error unless V and Sigma are disjoint, every nonterminal has a
  /// production, and every nonterminal derives a terminal-only string.
  void validate() const;

  /// Decodes a terminal-only sentential form.
  Term to_term(std::span<const Symbol> form) const;
  /// Prints a sentential form, nonterminals by name.
  std::string print_form(std::span<const Symbol> form) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  Symbol intern(GrammarTerminal terminal);
  Sort check_rhs(std::span<const Symbol> rhs, std::size_t& pos) const;

  std::vector<Nonterminal> nonterminals_;
  std::vector<GrammarTerminal> terminals_;
  std::vector<std::vector<Production>> productions_;
  std::size_t start_ = 0;
};

bool operator==(const Grammar& a, const Grammar& b);

/// SyGuS-IF v2 grammar block: `((N sort) ...) ((N sort (prod ...)) ...)`.
std::string print_grammar(const Grammar& grammar);

/// Full-logic grammar for `fun`: nonterminals `I` (Int) and `B` (Bool) for
/// LIA/NIA, `V` (bit-vectors) and `B` for BV. Literal pool is {0, 1} plus
/// `extra_literals` of the matching sort. Throws UnsupportedError for other
/// logics.
Grammar default_grammar(std::string_view logic, const SynthFun& fun,
                        std::span<const Term> extra_literals = {});

}  // namespace synthsel
