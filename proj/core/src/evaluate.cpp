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

#include "synthsel/evaluate.hpp"

#include "synthsel/error.hpp"

namespace synthsel {

std::string to_string(const Assignment& assignment) {
  std::string out;
  for (const auto& [name, value] : assignment) {
    if (!out.empty()) out += ", ";
    out += name + " = " + to_string(value);
  }
  return out;
}

Integer euclid_mod(const Integer& a, const Integer& b) {
  if (b == 0) throw DivisionByZero();
  Integer r = a % b;  // sign follows a
  if (r < 0) r += abs(b);
  return r;
}

Integer euclid_div(const Integer& a, const Integer& b) {
  const Integer r = euclid_mod(a, b);
  return (a - r) / b;
}

namespace {

struct Interp {
  std::string_view function;
  const Candidate* cand = nullptr;
};

const Integer& as_int(const Value& v) { return std::get<Integer>(v); }
bool as_bool(const Value& v) { return std::get<bool>(v); }
const BitVec& as_bv(const Value& v) { return std::get<BitVec>(v); }

Value apply_op(Op op, const std::vector<Value>& a) {
  switch (op) {
    case Op::Add: {
      Integer s = 0;
      for (const auto& v : a) s += as_int(v);
      return s;
    }
    case Op::Sub: {
      if (a.size() == 1) return Integer(-as_int(a[0]));
      Integer s = as_int(a[0]);
      for (std::size_t i = 1; i < a.size(); ++i) s -= as_int(a[i]);
      return s;
    }
    case Op::Mul: {
      Integer s = 1;
      for (const auto& v : a) s *= as_int(v);
      return s;
    }
    case Op::Div:
      return euclid_div(as_int(a[0]), as_int(a[1]));
    case Op::Mod:
      return euclid_mod(as_int(a[0]), as_int(a[1]));
    case Op::Abs:
      return Integer(abs(as_int(a[0])));
    case Op::Eq:
      for (std::size_t i = 1; i < a.size(); ++i) {
        if (!(a[i] == a[0])) return false;
      }
      return true;
    case Op::Distinct:
      for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
          if (a[i] == a[j]) return false;
        }
      }
      return true;
    case Op::Ge:
    case Op::Le:
    case Op::Gt:
    case Op::Lt:
      for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        const Integer& x = as_int(a[i]);
        const Integer& y = as_int(a[i + 1]);
        const bool ok = op == Op::Ge   ? x >= y
                        : op == Op::Le ? x <= y
                        : op == Op::Gt ? x > y
                                       : x < y;
        if (!ok) return false;
      }
      return true;
    case Op::And:
      for (const auto& v : a) {
        if (!as_bool(v)) return false;
      }
      return true;
    case Op::Or:
      for (const auto& v : a) {
        if (as_bool(v)) return true;
      }
      return false;
    case Op::Not:
      return !as_bool(a[0]);
    case Op::Implies: {
      // Right associative: a => (b => c).
      bool r = as_bool(a.back());
      for (std::size_t i = a.size() - 1; i-- > 0;) r = !as_bool(a[i]) || r;
      return r;
    }
    case Op::Xor: {
      bool r = false;
      for (const auto& v : a) r = r != as_bool(v);
      return r;
    }
    default:
      break;
  }
  // Bit-vector operators.
  const std::uint32_t w = as_bv(a[0]).width;
  auto bits = [&](std::size_t i) { return as_bv(a[i]).bits; };
  auto fold = [&](auto fn) {
    std::uint64_t r = bits(0);
    for (std::size_t i = 1; i < a.size(); ++i) r = fn(r, bits(i));
    return Value{BitVec::make(r, w)};
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
      return BitVec::make(~bits(0) + 1, w);
    case Op::BvNot:
      return BitVec::make(~bits(0), w);
    case Op::BvShl:
      return BitVec::make(bits(1) >= w ? 0 : bits(0) << bits(1), w);
    case Op::BvLshr:
      return BitVec::make(bits(1) >= w ? 0 : bits(0) >> bits(1), w);
    case Op::BvUlt:
      return bits(0) < bits(1);
    case Op::BvUle:
      return bits(0) <= bits(1);
    case Op::BvUgt:
      return bits(0) > bits(1);
    case Op::BvUge:
      return bits(0) >= bits(1);
    default:
      throw EvalError("unsupported operator '" + std::string(op_symbol(op)) + "'");
  }
}

Value eval(const Term& t, const Assignment& env, const Interp& in) {
  switch (t.kind()) {
    case TermKind::IntLit:
      return t.int_value();
    case TermKind::BoolLit:
      return t.bool_value();
    case TermKind::BvLit:
      return t.bv_value();
    case TermKind::Var: {
      const auto it = env.find(t.name());
      if (it == env.end()) throw EvalError("unbound variable '" + t.name() + "'");
      if (sort_of(it->second) != t.sort()) {
        throw SortError("variable '" + t.name() + "' bound to a value of sort " +
                        to_string(sort_of(it->second)));
      }
      return it->second;
    }
    case TermKind::Ite:
      return as_bool(eval(t.child(0), env, in)) ? eval(t.child(1), env, in)
                                                : eval(t.child(2), env, in);
    case TermKind::App: {
      std::vector<Value> args;
      args.reserve(t.children().size());
      for (const auto& c : t.children()) args.push_back(eval(c, env, in));
      return apply_op(t.op(), args);
    }
    case TermKind::Call: {
      if (in.cand == nullptr || t.name() != in.function) {
        throw EvalError("call of uninterpreted function '" + t.name() + "'");
      }
      Assignment inner;
      const auto& params = in.cand->params();
      for (std::size_t i = 0; i < params.size(); ++i) {
        inner[params[i].name] = eval(t.child(i), env, in);
      }
      return eval(in.cand->body(), inner, Interp{});
    }
  }
  throw EvalError("malformed term");
}

}  // namespace

Value evaluate(const Term& term, const Assignment& env) {
  return eval(term, env, Interp{});
}

Value evaluate(const Term& term, const Assignment& env, std::string_view function,
               const Candidate& cand) {
  return eval(term, env, Interp{function, &cand});
}

}  // namespace synthsel
