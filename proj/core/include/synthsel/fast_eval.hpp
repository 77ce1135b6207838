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

// Flat, machine-word evaluator used on hot paths (grid verification and
// enumeration). Integers are int64; any overflow is reported so callers can
// fall back to the exact evaluator. Values may be Unknown, which makes the
// evaluator three-valued for partial programs.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "synthsel/term.hpp"

namespace synthsel::fast {

/// Ordered so that combining two states takes the maximum.
enum class State : std::uint8_t { Known, DivZero, Overflow, Unknown };

/// Int as int64, Bool as 0/1, BitVec as its bits.
struct Val {
  std::int64_t v = 0;
  State st = State::Known;

  bool known() const { return st == State::Known; }
};

inline Val known(std::int64_t v) { return {v, State::Known}; }
inline Val unknown() { return {0, State::Unknown}; }

/// Applies `op`; `width` is the operand width for bit-vector operators.
/// Three-valued: and/or/=>/ite/* may be decided with unknown operands.
Val apply(Op op, std::uint32_t width, std::span<const Val> args);
Val ite(Val c, Val t, Val e);

/// Converts an exact value; Overflow for integers outside int64.
Val from_value(const Value& value);
Value to_value(Val v, const Sort& sort);

struct Node {
  enum class Kind : std::uint8_t { Const, Var, Ite, App, Call };

  Kind kind = Kind::Const;
  Op op = Op::Add;
  std::uint32_t width = 0;
  std::uint32_t arity = 0;
  Val value;             // Const
  std::uint32_t index = 0;  // Var: slot in the environment
};

/// A term compiled to prefix order over an indexed environment.
struct Program {
  std::vector<Node> nodes;
};

/// Compiles `term`. Variables are resolved against `variables`; applications
/// of `function` become Call nodes. Throws EvalError for anything else.
Program compile(const Term& term, std::span<const std::string> variables,
                std::string_view function = {});

namespace detail {

template <class CallFn>
Val run(const Node* nodes, std::size_t& pos, const Val* env, CallFn& call) {
  const Node& n = nodes[pos++];
  switch (n.kind) {
    case Node::Kind::Const:
      return n.value;
    case Node::Kind::Var:
      return env[n.index];
    case Node::Kind::Ite: {
      const Val c = run(nodes, pos, env, call);
      const Val t = run(nodes, pos, env, call);
      const Val e = run(nodes, pos, env, call);
      return ite(c, t, e);
    }
    case Node::Kind::App:
    case Node::Kind::Call: {
      Val small[8];
      std::vector<Val> big;
      Val* args = small;
      if (n.arity > 8) {
        big.resize(n.arity);
        args = big.data();
      }
      for (std::uint32_t i = 0; i < n.arity; ++i) args[i] = run(nodes, pos, env, call);
      const std::span<const Val> span(args, n.arity);
      if (n.kind == Node::Kind::Call) return call(span);
      return apply(n.op, n.width, span);
    }
  }
  return unknown();
}

}  // namespace detail

/// Evaluates `program` with variables read from `env`; Call nodes invoke
/// `call(span<const Val> args) -> Val`.
template <class CallFn>
Val run(const Program& program, const Val* env, CallFn&& call) {
  std::size_t pos = 0;
  return detail::run(program.nodes.data(), pos, env, call);
}

inline Val run(const Program& program, const Val* env) {
  auto no_call = [](std::span<const Val>) { return unknown(); };
  return run(program, env, no_call);
}

}  // namespace synthsel::fast
