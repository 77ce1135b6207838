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

#include "synthsel/term.hpp"

#include <array>

#include "synthsel/error.hpp"

namespace synthsel {

namespace {

enum class Shape : std::uint8_t {
  IntArith,    // Int* -> Int
  IntBinary,   // Int Int -> Int
  IntUnary,    // Int -> Int
  IntCompare,  // Int Int+ -> Bool (chainable)
  BoolNary,    // Bool* -> Bool
  BoolUnary,   // Bool -> Bool
  Equality,    // same sort, chainable -> Bool
  BvNary,      // BV_w* -> BV_w
  BvBinary,    // BV_w BV_w -> BV_w
  BvUnary,     // BV_w -> BV_w
  BvCompare,   // BV_w BV_w -> Bool
};

struct OpInfo {
  Op op;
  std::string_view symbol;
  Shape shape;
  std::size_t min_arity;
  std::size_t max_arity;  // 0 = unbounded
};

constexpr std::array kOps = {
    OpInfo{Op::Add, "+", Shape::IntArith, 2, 0},
    OpInfo{Op::Sub, "-", Shape::IntArith, 1, 0},
    OpInfo{Op::Mul, "*", Shape::IntArith, 2, 0},
    OpInfo{Op::Div, "div", Shape::IntBinary, 2, 2},
    OpInfo{Op::Mod, "mod", Shape::IntBinary, 2, 2},
    OpInfo{Op::Abs, "abs", Shape::IntUnary, 1, 1},
    OpInfo{Op::Eq, "=", Shape::Equality, 2, 0},
    OpInfo{Op::Distinct, "distinct", Shape::Equality, 2, 0},
    OpInfo{Op::Ge, ">=", Shape::IntCompare, 2, 0},
    OpInfo{Op::Le, "<=", Shape::IntCompare, 2, 0},
    OpInfo{Op::Gt, ">", Shape::IntCompare, 2, 0},
    OpInfo{Op::Lt, "<", Shape::IntCompare, 2, 0},
    OpInfo{Op::And, "and", Shape::BoolNary, 2, 0},
    OpInfo{Op::Or, "or", Shape::BoolNary, 2, 0},
    OpInfo{Op::Not, "not", Shape::BoolUnary, 1, 1},
    OpInfo{Op::Implies, "=>", Shape::BoolNary, 2, 0},
    OpInfo{Op::Xor, "xor", Shape::BoolNary, 2, 0},
    OpInfo{Op::BvAdd, "bvadd", Shape::BvNary, 2, 0},
    OpInfo{Op::BvSub, "bvsub", Shape::BvBinary, 2, 2},
    OpInfo{Op::BvMul, "bvmul", Shape::BvNary, 2, 0},
    OpInfo{Op::BvNeg, "bvneg", Shape::BvUnary, 1, 1},
    OpInfo{Op::BvAnd, "bvand", Shape::BvNary, 2, 0},
    OpInfo{Op::BvOr, "bvor", Shape::BvNary, 2, 0},
    OpInfo{Op::BvXor, "bvxor", Shape::BvNary, 2, 0},
    OpInfo{Op::BvNot, "bvnot", Shape::BvUnary, 1, 1},
    OpInfo{Op::BvShl, "bvshl", Shape::BvBinary, 2, 2},
    OpInfo{Op::BvLshr, "bvlshr", Shape::BvBinary, 2, 2},
    OpInfo{Op::BvUlt, "bvult", Shape::BvCompare, 2, 2},
    OpInfo{Op::BvUle, "bvule", Shape::BvCompare, 2, 2},
    OpInfo{Op::BvUgt, "bvugt", Shape::BvCompare, 2, 2},
    OpInfo{Op::BvUge, "bvuge", Shape::BvCompare, 2, 2},
};

const OpInfo& info(Op op) {
  for (const auto& entry : kOps) {
    if (entry.op == op) return entry;
  }
  throw SortError("unknown operator");
}

[[noreturn]] void sort_fail(const OpInfo& op, const std::string& what) {
  throw SortError("operator '" + std::string(op.symbol) + "': " + what);
}

void require_all(const OpInfo& op, std::span<const Sort> args, Sort expected) {
  for (const auto& s : args) {
    if (s != expected) {
      sort_fail(op, "expected " + to_string(expected) + " argument, got " +
                        to_string(s));
    }
  }
}

Sort require_same_bitvec(const OpInfo& op, std::span<const Sort> args) {
  const Sort first = args.front();
  if (!first.is_bitvec()) {
    sort_fail(op, "expected bit-vector argument, got " + to_string(first));
  }
  require_all(op, args, first);
  return first;
}

}  // namespace

std::string to_string(const Sort& sort) {
  switch (sort.kind) {
    case Sort::Kind::Int:
      return "Int";
    case Sort::Kind::Bool:
      return "Bool";
    case Sort::Kind::BitVec:
      return "(_ BitVec " + std::to_string(sort.width) + ")";
  }
  return "?";
}

Sort sort_of(const Value& value) {
  if (std::holds_alternative<bool>(value)) return Sort::boolean();
  if (std::holds_alternative<Integer>(value)) return Sort::integer();
  return Sort::bitvec(std::get<BitVec>(value).width);
}

std::string to_string(const Value& value) {
  if (const auto* b = std::get_if<bool>(&value)) return *b ? "true" : "false";
  if (const auto* i = std::get_if<Integer>(&value)) {
    if (*i < 0) return "(- " + Integer(-*i).str() + ")";
    return i->str();
  }
  const auto& bv = std::get<BitVec>(value);
  std::string out = "#b";
  for (std::uint32_t i = bv.width; i-- > 0;) {
    out.push_back(((bv.bits >> i) & 1U) != 0 ? '1' : '0');
  }
  return out;
}

std::string_view op_symbol(Op op) { return info(op).symbol; }

std::optional<Op> op_from_symbol(std::string_view symbol) {
  for (const auto& entry : kOps) {
    if (entry.symbol == symbol) return entry.op;
  }
  return std::nullopt;
}

Sort check_op(Op op, std::span<const Sort> args) {
  const OpInfo& oi = info(op);
  if (args.size() < oi.min_arity ||
      (oi.max_arity != 0 && args.size() > oi.max_arity)) {
    std::string expected = std::to_string(oi.min_arity);
    if (oi.max_arity == 0) {
      expected = "at least " + expected;
    } else if (oi.max_arity != oi.min_arity) {
      expected += ".." + std::to_string(oi.max_arity);
    }
    sort_fail(oi, "expected " + expected + " argument(s), got " +
                      std::to_string(args.size()));
  }
  switch (oi.shape) {
    case Shape::IntArith:
    case Shape::IntBinary:
    case Shape::IntUnary:
      require_all(oi, args, Sort::integer());
      return Sort::integer();
    case Shape::IntCompare:
      require_all(oi, args, Sort::integer());
      return Sort::boolean();
    case Shape::BoolNary:
    case Shape::BoolUnary:
      require_all(oi, args, Sort::boolean());
      return Sort::boolean();
    case Shape::Equality:
      require_all(oi, args, args.front());
      return Sort::boolean();
    case Shape::BvNary:
    case Shape::BvBinary:
    case Shape::BvUnary:
      return require_same_bitvec(oi, args);
    case Shape::BvCompare:
      require_same_bitvec(oi, args);
      return Sort::boolean();
  }
  return Sort::boolean();
}

Term Term::int_lit(Integer value) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::IntLit;
  node->sort = Sort::integer();
  node->int_value = std::move(value);
  return Term(std::move(node));
}

Term Term::bool_lit(bool value) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::BoolLit;
  node->sort = Sort::boolean();
  node->bool_value = value;
  return Term(std::move(node));
}

Term Term::bv_lit(BitVec value) {
  if (value.width == 0 || value.width > 64) {
    throw UnsupportedError("bit-vector width " + std::to_string(value.width) +
                           " is outside 1..64");
  }
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::BvLit;
  node->sort = Sort::bitvec(value.width);
  node->bv_value = BitVec::make(value.bits, value.width);
  return Term(std::move(node));
}

Term Term::literal(const Value& value) {
  if (const auto* b = std::get_if<bool>(&value)) return bool_lit(*b);
  if (const auto* i = std::get_if<Integer>(&value)) return int_lit(*i);
  return bv_lit(std::get<BitVec>(value));
}

Term Term::var(std::string name, Sort sort) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::Var;
  node->sort = sort;
  node->name = std::move(name);
  return Term(std::move(node));
}

Term Term::ite(Term cond, Term then_term, Term else_term) {
  if (!cond.sort().is_bool()) {
    throw SortError("operator 'ite': condition must be Bool, got " +
                    to_string(cond.sort()));
  }
  if (then_term.sort() != else_term.sort()) {
    throw SortError("operator 'ite': branch sorts differ (" +
                    to_string(then_term.sort()) + " vs " +
                    to_string(else_term.sort()) + ")");
  }
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::Ite;
  node->sort = then_term.sort();
  node->children = {std::move(cond), std::move(then_term), std::move(else_term)};
  return Term(std::move(node));
}

Term Term::app(Op op, std::vector<Term> args) {
  std::vector<Sort> sorts;
  sorts.reserve(args.size());
  for (const auto& a : args) sorts.push_back(a.sort());
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::App;
  node->sort = check_op(op, sorts);
  node->op = op;
  node->children = std::move(args);
  return Term(std::move(node));
}

Term Term::call(std::string name, Sort result, std::vector<Term> args) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::Call;
  node->sort = result;
  node->name = std::move(name);
  node->children = std::move(args);
  return Term(std::move(node));
}

bool Term::is_literal() const {
  const auto k = kind();
  return k == TermKind::IntLit || k == TermKind::BoolLit ||
         k == TermKind::BvLit;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const TermNode& x = *a.node_;
  const TermNode& y = *b.node_;
  if (x.kind != y.kind || x.sort != y.sort) return false;
  switch (x.kind) {
    case TermKind::IntLit:
      return x.int_value == y.int_value;
    case TermKind::BoolLit:
      return x.bool_value == y.bool_value;
    case TermKind::BvLit:
      return x.bv_value == y.bv_value;
    case TermKind::Var:
      return x.name == y.name;
    case TermKind::App:
      if (x.op != y.op) return false;
      break;
    case TermKind::Call:
      if (x.name != y.name) return false;
      break;
    case TermKind::Ite:
      break;
  }
  return x.children == y.children;
}

Term conjunction(std::span<const Term> terms) {
  if (terms.empty()) return Term::bool_lit(true);
  if (terms.size() == 1) return terms.front();
  return Term::app(Op::And, std::vector<Term>(terms.begin(), terms.end()));
}

std::size_t term_size(const Term& term) {
  std::size_t n = 1;
  for (const auto& c : term.children()) n += term_size(c);
  return n;
}

bool contains_call(const Term& term, std::string_view function) {
  if (term.kind() == TermKind::Call && term.name() == function) return true;
  for (const auto& c : term.children()) {
    if (contains_call(c, function)) return true;
  }
  return false;
}

}  // namespace synthsel
