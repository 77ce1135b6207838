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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace synthsel {

/// A parsed S-expression: an atom or a parenthesized list. Atoms keep their
/// source spelling; `|quoted|` symbols have the bars removed.
struct SExpr {
  enum class Kind { Atom, List };

  Kind kind = Kind::Atom;
  std::string atom;
  bool quoted = false;  // atom came from |...| or "..."
  bool string_literal = false;
  std::vector<SExpr> items;
  std::size_t line = 1;
  std::size_t column = 1;

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_list() const { return kind == Kind::List; }
  bool is_symbol(std::string_view s) const {
    return is_atom() && !quoted && atom == s;
  }
  /// Head symbol of a non-empty list whose first item is an atom.
  std::optional<std::string_view> head() const;

  [[noreturn]] void fail(const std::string& message) const;
};

struct SExprDocument {
  std::vector<SExpr> items;
  /// Lexer tokens in the source, parentheses included, comments excluded.
  std::size_t token_count = 0;
};

/// Reads every top-level S-expression in `text`. `;` comments are stripped.
/// Throws ParseError with the position of the offending character.
SExprDocument read_sexprs(std::string_view text);

/// Reads exactly one S-expression starting at `text[offset]`, which must be
/// `(`. Returns the expression and sets `end` one past its closing paren;
/// nullopt when the parentheses never balance.
std::optional<SExpr> read_balanced(std::string_view text, std::size_t offset,
                                   std::size_t& end);

std::string to_string(const SExpr& expr);

}  // namespace synthsel
