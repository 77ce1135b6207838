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

#include "synthsel/sexpr.hpp"

#include <cctype>

#include "synthsel/error.hpp"

namespace synthsel {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  SExprDocument read_all() {
    SExprDocument doc;
    skip_space();
    while (pos_ < text_.size()) {
      doc.items.push_back(read_one());
      skip_space();
    }
    doc.token_count = tokens_;
    return doc;
  }

  std::optional<SExpr> read_at(std::size_t offset, std::size_t& end) {
    advance_to(offset);
    try {
      SExpr e = read_one();
      end = pos_;
      return e;
    } catch (const ParseError&) {
      return std::nullopt;
    }
  }

 private:
  void advance_to(std::size_t offset) {
    while (pos_ < offset && pos_ < text_.size()) bump();
  }

  char peek() const { return text_[pos_]; }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = peek();
      if (c == ';') {
        while (pos_ < text_.size() && peek() != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c)) != 0) {
        bump();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_, col_);
  }

  SExpr read_one() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    SExpr e;
    e.line = line_;
    e.column = col_;
    const char c = peek();
    if (c == ')') fail("unexpected ')'");
    if (c == '(') {
      e.kind = SExpr::Kind::List;
      bump();
      ++tokens_;
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) {
          throw ParseError("unbalanced '('", e.line, e.column);
        }
        if (peek() == ')') {
          bump();
          ++tokens_;
          break;
        }
        e.items.push_back(read_one());
      }
      return e;
    }
    ++tokens_;
    if (c == '|') {
      bump();
      while (pos_ < text_.size() && peek() != '|') {
        e.atom.push_back(peek());
        bump();
      }
      if (pos_ >= text_.size()) fail("unterminated quoted symbol");
      bump();
      e.quoted = true;
      return e;
    }
    if (c == '"') {
      bump();
      for (;;) {
        if (pos_ >= text_.size()) fail("unterminated string literal");
        if (peek() == '"') {
          bump();
          // SMT-LIB escapes a quote by doubling it.
          if (pos_ < text_.size() && peek() == '"') {
            e.atom.push_back('"');
            bump();
            continue;
          }
          break;
        }
        e.atom.push_back(peek());
        bump();
      }
      e.quoted = true;
      e.string_literal = true;
      return e;
    }
    while (pos_ < text_.size()) {
      const char d = peek();
      if (d == '(' || d == ')' || d == ';' || d == '|' || d == '"' ||
          std::isspace(static_cast<unsigned char>(d)) != 0) {
        break;
      }
      e.atom.push_back(d);
      bump();
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::size_t tokens_ = 0;
};

}  // namespace

std::optional<std::string_view> SExpr::head() const {
  if (!is_list() || items.empty() || !items.front().is_atom()) {
    return std::nullopt;
  }
  return std::string_view(items.front().atom);
}

void SExpr::fail(const std::string& message) const {
  throw ParseError(message, line, column);
}

SExprDocument read_sexprs(std::string_view text) {
  return Reader(text).read_all();
}

std::optional<SExpr> read_balanced(std::string_view text, std::size_t offset,
                                   std::size_t& end) {
  if (offset >= text.size() || text[offset] != '(') return std::nullopt;
  return Reader(text).read_at(offset, end);
}

std::string to_string(const SExpr& expr) {
  if (expr.is_atom()) {
    if (expr.string_literal) return "\"" + expr.atom + "\"";
    if (expr.quoted) return "|" + expr.atom + "|";
    return expr.atom;
  }
  std::string out = "(";
  for (std::size_t i = 0; i < expr.items.size(); ++i) {
    if (i != 0) out.push_back(' ');
    out += to_string(expr.items[i]);
  }
  out.push_back(')');
  return out;
}

}  // namespace synthsel
