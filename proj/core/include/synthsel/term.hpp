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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace synthsel {

using Integer = boost::multiprecision::cpp_int;

struct Sort {
  enum class Kind : std::uint8_t { Int, Bool, BitVec };

  Kind kind = Kind::Int;
  std::uint32_t width = 0;  // BitVec only

  static Sort integer() { return {Kind::Int, 0}; }
  static Sort boolean() { return {Kind::Bool, 0}; }
  static Sort bitvec(std::uint32_t w) { return {Kind::BitVec, w}; }

  bool is_int() const { return kind == Kind::Int; }
  bool is_bool() const { return kind == Kind::Bool; }
  bool is_bitvec() const { return kind == Kind::BitVec; }

  bool operator==(const Sort&) const = default;
};

std::string to_string(const Sort& sort);

/// Fixed-width bit-vector value. Widths above 64 are not representable.
struct BitVec {
  std::uint64_t bits = 0;
  std::uint32_t width = 0;

  static std::uint64_t mask(std::uint32_t width) {
    return width >= 64 ? ~std::uint64_t{0}
                       : ((std::uint64_t{1} << width) - 1);
  }
  static BitVec make(std::uint64_t bits, std::uint32_t width) {
    return {bits & mask(width), width};
  }

  bool operator==(const BitVec&) const = default;
};

using Value = std::variant<bool, Integer, BitVec>;

Sort sort_of(const Value& value);
std::string to_string(const Value& value);

/// Builtin operators. `ite` is a separate term kind.
enum class Op : std::uint8_t {
  Add, Sub, Mul, Div, Mod, Abs,
  Eq, Distinct, Ge, Le, Gt, Lt,
  And, Or, Not, Implies, Xor,
  BvAdd, BvSub, BvMul, BvNeg, BvAnd, BvOr, BvXor, BvNot, BvShl, BvLshr,
  BvUlt, BvUle, BvUgt, BvUge,
};

std::string_view op_symbol(Op op);
std::optional<Op> op_from_symbol(std::string_view symbol);

/// Result sort of `op` applied to arguments of the given sorts; throws
/// SortError on an arity or sort mismatch.
Sort check_op(Op op, std::span<const Sort> args);

class Term;

enum class TermKind : std::uint8_t { IntLit, BoolLit, BvLit, Var, Ite, App, Call };

struct TermNode {
  TermKind kind;
  Sort sort;
  Integer int_value;        // IntLit
  bool bool_value = false;  // BoolLit
  BitVec bv_value;          // BvLit
  std::string name;         // Var, Call
  Op op = Op::Add;          // App
  std::vector<Term> children;
};

/// Immutable, shared expression tree.
class Term {
 public:
  Term() = default;

  static Term int_lit(Integer value);
  static Term bool_lit(bool value);
  static Term bv_lit(BitVec value);
  static Term literal(const Value& value);
  static Term var(std::string name, Sort sort);
  static Term ite(Term cond, Term then_term, Term else_term);
  static Term app(Op op, std::vector<Term> args);
  /// Application of a user function (the synth-fun). Sorts of arguments are
  /// checked by the caller against the function's signature.
  static Term call(std::string name, Sort result, std::vector<Term> args);

  bool valid() const { return node_ != nullptr; }
  TermKind kind() const { return node_->kind; }
  const Sort& sort() const { return node_->sort; }
  const Integer& int_value() const { return node_->int_value; }
  bool bool_value() const { return node_->bool_value; }
  const BitVec& bv_value() const { return node_->bv_value; }
  const std::string& name() const { return node_->name; }
  Op op() const { return node_->op; }
  const std::vector<Term>& children() const { return node_->children; }
  const Term& child(std::size_t i) const { return node_->children[i]; }

  bool is_literal() const;
  const TermNode* raw() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}

  std::shared_ptr<const TermNode> node_;
};

/// Conjunction of `terms`: `true` when empty, the term itself when single.
Term conjunction(std::span<const Term> terms);

/// Number of nodes in the tree.
std::size_t term_size(const Term& term);

bool contains_call(const Term& term, std::string_view function);

}  // namespace synthsel
