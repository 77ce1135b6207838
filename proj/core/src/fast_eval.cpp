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

#include "synthsel/fast_eval.hpp"

#include <algorithm>
#include <limits>

#include "synthsel/error.hpp"

namespace synthsel::fast {

namespace {

State worst(std::span<const Val> args) {
  State s = State::Known;
  for (const auto& a : args) s = std::max(s, a.st);
  return s;
}

Val fail(State s) { return {0, s}; }

std::uint64_t u(std::int64_t v) { return static_cast<std::uint64_t>(v); }
std::int64_t s64(std::uint64_t v) { return static_cast<std::int64_t>(v); }

Val bv(std::uint64_t bits, std::uint32_t width) {
  return known(s64(bits & BitVec::mask(width)));
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) {
  std::int64_t r = a % b;
  if (r < 0) r += b < 0 ? -b : b;
  return r;
}

}  // namespace

Val ite(Val c, Val t, Val e) {
  if (c.known()) return c.v != 0 ? t : e;
  if (t.known() && e.known() && t.v == e.v) return t;
  return fail(std::max({c.st, t.st, e.st}));
}

Val apply(Op op, std::uint32_t width, std::span<const Val> a) {
  switch (op) {
    case Op::And:
      for (const auto& x : a) {
        if (x.known() && x.v == 0) return known(0);
      }
      return worst(a) == State::Known ? known(1) : fail(worst(a));
    case Op::Or:
      for (const auto& x : a) {
        if (x.known() && x.v != 0) return known(1);
      }
      return worst(a) == State::Known ? known(0) : fail(worst(a));
    case Op::Implies: {
      // a1 => (a2 => ... => an): true if any premise is false or the
      // conclusion is true.
      if (a.back().known() && a.back().v != 0) return known(1);
      for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        if (a[i].known() && a[i].v == 0) return known(1);
      }
      return worst(a) == State::Known ? known(0) : fail(worst(a));
    }
    case Op::Mul:
      for (const auto& x : a) {
        if (x.known() && x.v == 0) return known(0);
      }
      break;
    default:
      break;
  }
  if (const State s = worst(a); s != State::Known) return fail(s);

  switch (op) {
    case Op::Add: {
      std::int64_t r = 0;
      for (const auto& x : a) {
        if (__builtin_add_overflow(r, x.v, &r)) return fail(State::Overflow);
      }
      return known(r);
    }
    case Op::Sub: {
      if (a.size() == 1) {
        if (a[0].v == std::numeric_limits<std::int64_t>::min()) {
          return fail(State::Overflow);
        }
        return known(-a[0].v);
      }
      std::int64_t r = a[0].v;
      for (std::size_t i = 1; i < a.size(); ++i) {
        if (__builtin_sub_overflow(r, a[i].v, &r)) return fail(State::Overflow);
      }
      return known(r);
    }
    case Op::Mul: {
      std::int64_t r = 1;
      for (const auto& x : a) {
        if (__builtin_mul_overflow(r, x.v, &r)) return fail(State::Overflow);
      }
      return known(r);
    }
    case Op::Div:
    case Op::Mod: {
      const std::int64_t x = a[0].v;
      const std::int64_t y = a[1].v;
      if (y == 0) return fail(State::DivZero);
      if (y == -1 && x == std::numeric_limits<std::int64_t>::min()) {
        return fail(State::Overflow);
      }
      const std::int64_t r = floor_mod(x, y);
      return known(op == Op::Mod ? r : (x - r) / y);
    }
    case Op::Abs:
      if (a[0].v == std::numeric_limits<std::int64_t>::min()) return fail(State::Overflow);
      return known(a[0].v < 0 ? -a[0].v : a[0].v);
    case Op::Eq:
      for (std::size_t i = 1; i < a.size(); ++i) {
        if (a[i].v != a[0].v) return known(0);
      }
      return known(1);
    case Op::Distinct:
      for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
          if (a[i].v == a[j].v) return known(0);
        }
      }
      return known(1);
    case Op::Ge:
    case Op::Le:
    case Op::Gt:
    case Op::Lt:
      for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        const std::int64_t x = a[i].v;
        const std::int64_t y = a[i + 1].v;
        const bool ok = op == Op::Ge   ? x >= y
                        : op == Op::Le ? x <= y
                        : op == Op::Gt ? x > y
                                       : x < y;
        if (!ok) return known(0);
      }
      return known(1);
    case Op::Not:
      return known(a[0].v == 0 ? 1 : 0);
    case Op::Xor: {
      std::int64_t r = 0;
      for (const auto& x : a) r ^= (x.v != 0 ? 1 : 0);
      return known(r);
    }
    default:
      break;
  }

  auto fold = [&](auto fn) {
    std::uint64_t r = u(a[0].v);
    for (std::size_t i = 1; i < a.size(); ++i) r = fn(r, u(a[i].v));
    return bv(r, width);
  };
  switch (op) {
    case Op::BvAdd:
      return fold([](std::uint64_t x, std::uint64_t y) { return x + y; });
    case Op::BvSub:
      return fold([](std::uint64_t x, std::uint64_t y) { return x - y; });
    case Op::BvMul:
      return fold([](std::uint64_t x, std::uint64_t y) { return x * y; });
    case Op::BvAnd:
      return fold([](std::uint64_t x, std::uint64_t y) { return x & y; });
    case Op::BvOr:
      return fold([](std::uint64_t x, std::uint64_t y) { return x | y; });
    case Op::BvXor:
      return fold([](std::uint64_t x, std::uint64_t y) { return x ^ y; });
    case Op::BvNeg:
      return bv(~u(a[0].v) + 1, width);
    case Op::BvNot:
      return bv(~u(a[0].v), width);
    case Op::BvShl:
      return bv(u(a[1].v) >= width ? 0 : u(a[0].v) << u(a[1].v), width);
    case Op::BvLshr:
      return bv(u(a[1].v) >= width ? 0 : u(a[0].v) >> u(a[1].v), width);
    case Op::BvUlt:
      return known(u(a[0].v) < u(a[1].v) ? 1 : 0);
    case Op::BvUle:
      return known(u(a[0].v) <= u(a[1].v) ? 1 : 0);
    case Op::BvUgt:
      return known(u(a[0].v) > u(a[1].v) ? 1 : 0);
    case Op::BvUge:
      return known(u(a[0].v) >= u(a[1].v) ? 1 : 0);
    default:
      break;
  }
  throw EvalError("unsupported operator '" + std::string(op_symbol(op)) + "'");
}

Val from_value(const Value& value) {
  if (const auto* b = std::get_if<bool>(&value)) return known(*b ? 1 : 0);
  if (const auto* bvv = std::get_if<BitVec>(&value)) return known(s64(bvv->bits));
  const Integer& i = std::get<Integer>(value);
  if (i > std::numeric_limits<std::int64_t>::max() ||
      i < std::numeric_limits<std::int64_t>::min()) {
    return fail(State::Overflow);
  }
  return known(static_cast<std::int64_t>(i));
}

Value to_value(Val v, const Sort& sort) {
  if (!v.known()) throw EvalError("value is not known");
  if (sort.is_bool()) return v.v != 0;
  if (sort.is_bitvec()) return BitVec::make(u(v.v), sort.width);
  return Integer(v.v);
}

namespace {

void emit(const Term& t, std::span<const std::string> vars, std::string_view function,
          Program& out) {
  Node n;
  switch (t.kind()) {
    case TermKind::IntLit:
    case TermKind::BoolLit:
    case TermKind::BvLit: {
      n.kind = Node::Kind::Const;
      n.value = from_value(t.kind() == TermKind::IntLit    ? Value{t.int_value()}
                           : t.kind() == TermKind::BoolLit ? Value{t.bool_value()}
                                                           : Value{t.bv_value()});
      out.nodes.push_back(n);
      return;
    }
    case TermKind::Var: {
      const auto it = std::find(vars.begin(), vars.end(), t.name());
      if (it == vars.end()) throw EvalError("unbound variable '" + t.name() + "'");
      n.kind = Node::Kind::Var;
      n.index = static_cast<std::uint32_t>(it - vars.begin());
      out.nodes.push_back(n);
      return;
    }
    case TermKind::Ite:
      n.kind = Node::Kind::Ite;
      n.arity = 3;
      break;
    case TermKind::App:
      n.kind = Node::Kind::App;
      n.op = t.op();
      n.arity = static_cast<std::uint32_t>(t.children().size());
      n.width = t.child(0).sort().width;
      break;
    case TermKind::Call:
      if (function.empty() || t.name() != function) {
        throw EvalError("call of uninterpreted function '" + t.name() + "'");
      }
      n.kind = Node::Kind::Call;
      n.arity = static_cast<std::uint32_t>(t.children().size());
      break;
  }
  out.nodes.push_back(n);
  for (const auto& c : t.children()) emit(c, vars, function, out);
}

}  // namespace

Program compile(const Term& term, std::span<const std::string> variables,
                std::string_view function) {
  Program p;
  emit(term, variables, function, p);
  return p;
}

}  // namespace synthsel::fast
