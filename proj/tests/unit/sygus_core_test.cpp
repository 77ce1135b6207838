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


#include <gtest/gtest.h>

#include <random>
#include <set>

#include "synthsel/error.hpp"
#include "synthsel/evaluate.hpp"
#include "synthsel/fast_eval.hpp"
#include "synthsel/grammar.hpp"
#include "synthsel/query.hpp"
#include "synthsel/sexpr.hpp"
#include "synthsel/verify.hpp"
#include "test_util.hpp"

namespace synthsel {
namespace {

using testing::kMax2Solution;
using testing::kMax3Solution;
using testing::max3_text;

std::vector<std::string> production_forms(const Grammar& g, std::size_t nt) {
  std::vector<std::string> out;
  for (const auto& p : g.productions(nt)) out.push_back(g.print_form(p.rhs));
  return out;
}

bool has(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

TEST(SExpr, StripsCommentsAndCountsTokens) {
  const auto doc = read_sexprs("; header\n(a (b c)) ; tail\nd");
  ASSERT_EQ(doc.items.size(), 2u);
  EXPECT_EQ(to_string(doc.items[0]), "(a (b c))");
  EXPECT_TRUE(doc.items[1].is_symbol("d"));
  EXPECT_EQ(doc.token_count, 8u);
}

TEST(SExpr, UnbalancedInputReportsPosition) {
  try {
    read_sexprs("(a\n  (b c)");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_GE(e.line(), 1u);
  }
  EXPECT_THROW(read_sexprs("a)"), ParseError);
}

TEST(SExpr, ReadBalancedStopsAtClosingParen) {
  std::size_t end = 0;
  const std::string text = "xx (f (g 1) 2) yy";
  const auto e = read_balanced(text, 3, end);
  ASSERT_TRUE(e.has_value());
  EXPECT_EQ(text.substr(end), " yy");
  EXPECT_FALSE(read_balanced("(f (g 1)", 0, end).has_value());
}

TEST(ParseQuery, FigureOneShape) {
  const SynthQuery q = parse_query(max3_text());
  EXPECT_EQ(q.logic, "LIA");
  EXPECT_EQ(q.fun.name, "f");
  ASSERT_EQ(q.fun.params.size(), 3u);
  for (const auto& p : q.fun.params) EXPECT_TRUE(p.sort.is_int());
  EXPECT_TRUE(q.fun.result.is_int());
  EXPECT_EQ(q.variables.size(), 3u);
  EXPECT_EQ(q.constraints.size(), 4u);
  EXPECT_FALSE(q.grammar.has_value());
  EXPECT_FALSE(q.from_invariant);
  EXPECT_GT(q.source_tokens, 0u);
}

TEST(ParseQuery, ZeroConstraints) {
  const SynthQuery q = parse_query(
      "(set-logic LIA)(synth-fun f ((x Int)) Int)(declare-var x Int)(check-synth)");
  EXPECT_TRUE(q.constraints.empty());
}

TEST(ParseQuery, ArityErrorForComparison) {
  EXPECT_THROW(parse_query("(set-logic LIA)(synth-fun f ((v0 Int)) Int)(declare-var v0 Int)"
                           "(constraint (>= v0))(check-synth)"),
               SortError);
}

TEST(ParseQuery, Rejections) {
  // undeclared symbol
  EXPECT_THROW(parse_query("(set-logic LIA)(synth-fun f ((x Int)) Int)"
                           "(constraint (= (f y) 0))"),
               Error);
  // sort mismatch
  EXPECT_THROW(parse_query("(set-logic LIA)(synth-fun f ((x Int)) Int)(declare-var x Int)"
                           "(constraint (and x true))"),
               SortError);
  // second synth-fun
  EXPECT_THROW(parse_query("(set-logic LIA)(synth-fun f ((x Int)) Int)"
                           "(synth-fun g ((x Int)) Int)"),
               UnsupportedError);
  // unsupported command
  EXPECT_THROW(parse_query("(set-logic LIA)(declare-datatype T ((a)))"
                           "(synth-fun f ((x Int)) Int)"),
               UnsupportedError);
  EXPECT_THROW(parse_query("(set-logic LIA)(synth-fun f ((x Int)) Int"), ParseError);
}

TEST(ParseQuery, InvariantConstraintIsDesugared) {
  const SynthQuery q = parse_query(
      "(set-logic LIA)\n"
      "(synth-inv inv ((x Int)))\n"
      "(declare-primed-var x Int)\n"
      "(define-fun pre ((x Int)) Bool (= x 0))\n"
      "(define-fun trans ((x Int) (x! Int)) Bool (= x! (+ x 1)))\n"
      "(define-fun post ((x Int)) Bool (>= x 0))\n"
      "(inv-constraint inv pre trans post)\n"
      "(check-synth)\n");
  EXPECT_TRUE(q.from_invariant);
  EXPECT_TRUE(q.fun.result.is_bool());
  EXPECT_EQ(q.constraints.size(), 3u);
  EXPECT_EQ(q.variables.size(), 2u);  // x and x!
  const Candidate good = parse_define_fun("(define-fun inv ((x Int)) Bool (>= x 0))");
  const Candidate bad = parse_define_fun("(define-fun inv ((x Int)) Bool (<= x 5))");
  Assignment at{{"x", Integer(5)}, {"x!", Integer(6)}};
  EXPECT_TRUE(satisfies(q, good, at));
  EXPECT_FALSE(satisfies(q, bad, at));
}

TEST(ParseQuery, UserGrammar) {
  const SynthQuery q = parse_query(
      "(set-logic LIA)\n"
      "(synth-fun f ((x Int)) Int ((S Int) (C Int)) ((S Int (x C (+ S S))) (C Int (0 1))))\n"
      "(declare-var x Int)\n"
      "(constraint (= (f x) (+ x 1)))\n"
      "(check-synth)\n");
  ASSERT_TRUE(q.grammar.has_value());
  EXPECT_EQ(q.grammar->nonterminals().size(), 2u);
  EXPECT_EQ(q.grammar->productions(0).size(), 3u);
}

TEST(Substitute, ProjectionReplacesEveryApplication) {
  const SynthQuery q = parse_query(max3_text());
  const Candidate c = Candidate::for_function(q.fun, Term::var("v0", Sort::integer()));
  const Term phi = substitute_solution(q, c);
  EXPECT_FALSE(contains_call(phi, "f"));
  EXPECT_EQ(print_term(phi),
            "(and (>= v0 v0) (>= v0 v1) (>= v0 v2) (or (= v0 v0) (or (= v1 v0) (= v2 v0))))");
}

TEST(Substitute, NoOccurrenceLeavesConstraintsUnchanged) {
  const SynthQuery q = parse_query("(set-logic LIA)(synth-fun f ((x Int)) Int)"
                                   "(declare-var x Int)(constraint (>= (+ x 1) x))");
  const Candidate c = Candidate::for_function(q.fun, Term::int_lit(7));
  EXPECT_EQ(substitute_solution(q, c), q.constraints.front());
}

TEST(Substitute, NestedApplications) {
  const SynthQuery q = parse_query(
      "(set-logic LIA)(synth-fun f ((v0 Int) (v1 Int) (v2 Int)) Int)"
      "(declare-var v0 Int)(declare-var v1 Int)(declare-var v2 Int)"
      "(constraint (>= (f (f v0 v0 v0) v1 v2) v0))");
  const Candidate c = Candidate::for_function(q.fun, Term::var("v0", Sort::integer()));
  EXPECT_EQ(print_term(substitute_solution(q, c)), "(>= v0 v0)");
  // A body that swaps its arguments checks that binding is capture-avoiding.
  const Candidate swap = parse_define_fun(
      "(define-fun f ((v0 Int) (v1 Int) (v2 Int)) Int (+ v1 v2))");
  EXPECT_EQ(print_term(substitute_solution(q, swap)), "(>= (+ v1 v2) v0)");
}

TEST(Substitute, SignatureMismatchThrows) {
  const SynthQuery q = parse_query(max3_text());
  const Candidate c = parse_define_fun("(define-fun f ((v0 Int)) Int v0)");
  EXPECT_THROW(substitute_solution(q, c), SortError);
}

TEST(Substitute, SoundAgainstInterpretedEvaluation) {
  const SynthQuery q = parse_query(max3_text());
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> d(-50, 50);
  for (const char* text : {kMax3Solution, "(define-fun f ((a Int) (b Int) (c Int)) Int (- a c))"}) {
    const Candidate c = parse_define_fun(text);
    const Term phi = substitute_solution(q, c);
    for (int i = 0; i < 200; ++i) {
      Assignment env{{"v0", Integer(d(rng))}, {"v1", Integer(d(rng))}, {"v2", Integer(d(rng))}};
      const bool direct = std::get<bool>(evaluate(phi, env));
      bool interpreted = true;
      for (const auto& k : q.constraints) {
        interpreted = interpreted && std::get<bool>(evaluate(k, env, "f", c));
      }
      EXPECT_EQ(direct, interpreted);
    }
  }
}

TEST(DefaultGrammar, LiaProductions) {
  const SynthQuery q = parse_query(max3_text());
  const Grammar g = default_grammar(q);
  ASSERT_EQ(g.nonterminals().size(), 2u);
  const std::size_t i = g.find_nonterminal("I");
  const std::size_t b = g.find_nonterminal("B");
  ASSERT_NE(i, Grammar::npos);
  ASSERT_NE(b, Grammar::npos);
  EXPECT_EQ(g.start(), i);
  const auto ip = production_forms(g, i);
  for (const char* s : {"v0", "v1", "v2", "0", "1", "(+ I I)", "(- I I)", "(* I I)",
                        "(ite B I I)"}) {
    EXPECT_TRUE(has(ip, s)) << s;
  }
  const auto bp = production_forms(g, b);
  for (const char* s : {"(>= I I)", "(<= I I)", "(= I I)", "(and B B)", "(or B B)", "(not B)"}) {
    EXPECT_TRUE(has(bp, s)) << s;
  }
}

// Every terminal string reachable in a few leftmost expansions decodes to a
// well-sorted term of the start sort; this covers all depth-2 terms.
void check_depth2(const Grammar& g) {
  std::vector<std::vector<Symbol>> frontier{{nonterminal_symbol(g.start())}};
  std::size_t complete = 0;
  for (int step = 0; step < 4 && !frontier.empty(); ++step) {
    std::vector<std::vector<Symbol>> next;
    for (const auto& form : frontier) {
      const auto it = std::find_if(form.begin(), form.end(), is_nonterminal);
      const auto pos = static_cast<std::size_t>(it - form.begin());
      for (const auto& p : g.productions(nonterminal_index(*it))) {
        std::vector<Symbol> grown(form.begin(), form.begin() + pos);
        grown.insert(grown.end(), p.rhs.begin(), p.rhs.end());
        grown.insert(grown.end(), form.begin() + pos + 1, form.end());
        if (std::none_of(grown.begin(), grown.end(), is_nonterminal)) {
          EXPECT_EQ(g.to_term(grown).sort(), g.nonterminals()[g.start()].sort)
              << g.print_form(grown);
          ++complete;
        } else {
          next.push_back(std::move(grown));
        }
      }
    }
    frontier = std::move(next);
  }
  EXPECT_GE(complete, 20u);
}

TEST(DefaultGrammar, DepthTwoStringsAreWellSorted) {
  const SynthQuery q = parse_query(max3_text());
  check_depth2(default_grammar(q));
}

TEST(DefaultGrammar, NoParameters) {
  const SynthFun f{"c", {}, Sort::integer()};
  const Grammar g = default_grammar("LIA", f);
  for (const auto& form : production_forms(g, g.find_nonterminal("I"))) {
    EXPECT_TRUE(form == "0" || form == "1" || form.front() == '(') << form;
  }
}

TEST(DefaultGrammar, LiteralPoolFromConstraints) {
  const SynthQuery q = parse_query("(set-logic LIA)(synth-fun f ((x Int)) Int)"
                                   "(declare-var x Int)(constraint (= (f x) (+ x 7)))");
  const Grammar g = default_grammar(q);
  EXPECT_TRUE(has(production_forms(g, g.find_nonterminal("I")), "7"));
}

TEST(DefaultGrammar, BitVectorAndUnsupported) {
  const SynthFun f{"f", {{"x", Sort::bitvec(8)}}, Sort::bitvec(8)};
  const Grammar g = default_grammar("BV", f);
  g.validate();
  EXPECT_NO_THROW(check_depth2(g));
  EXPECT_THROW(default_grammar("STRINGS", SynthFun{"f", {}, Sort::integer()}),
               UnsupportedError);
}

TEST(Grammar, ValidateRejectsDeadNonterminal) {
  Grammar g;
  const auto a = g.add_nonterminal("A", Sort::integer());
  g.add_production(a, {g.op(Op::Add, 2, Sort::integer()), nonterminal_symbol(a),
                       nonterminal_symbol(a)});
  EXPECT_THROW(g.validate(), Error);
  EXPECT_THROW(g.add_production(a, {g.op(Op::Add, 2, Sort::integer())}), SortError);
}

TEST(Print, DefineFun) {
  const SynthQuery q = parse_query(max3_text());
  EXPECT_EQ(print_define_fun(Candidate::for_function(q.fun, Term::var("v0", Sort::integer()))),
            "(define-fun f ((v0 Int) (v1 Int) (v2 Int)) Int v0)");
  EXPECT_EQ(print_define_fun(parse_define_fun(kMax2Solution)), kMax2Solution);
  EXPECT_THROW(parse_define_fun("(define-fun f ((v0 Int)) Int (frob v0))"), Error);
}

TEST(Print, DefineFunFixpoint) {
  for (const char* text :
       {kMax3Solution, "(define-fun g ((x (_ BitVec 8))) (_ BitVec 8) (bvand x #x0f))",
        "(define-fun h ((x Int)) Int (- 5))", "(define-fun p ((b Bool)) Bool (not b))"}) {
    const std::string once = print_define_fun(parse_define_fun(text));
    EXPECT_EQ(print_define_fun(parse_define_fun(once)), once);
  }
}

TEST(Print, QueryRoundTripOnCorpus) {
  std::vector<std::string> texts{testing::max2_text(), max3_text()};
  texts.push_back(
      "(set-logic BV)(synth-fun f ((x (_ BitVec 8))) (_ BitVec 8))"
      "(declare-var x (_ BitVec 8))(constraint (= (f x) (bvand (bvadd x #x03) #xf0)))");
  texts.push_back(
      "(set-logic LIA)(synth-fun f ((x Int)) Int ((S Int) (C Int)) ((S Int (x C (+ S S)))"
      " (C Int (0 1))))(declare-var x Int)(constraint (= (f x) (+ x 1)))");
  texts.push_back("(set-logic LIA)(synth-fun f ((x Int)) Int)(constraint (= (f 2) (- 3)))");
  for (const auto& t : texts) {
    const SynthQuery q = parse_query(t);
    const SynthQuery again = parse_query(print_query(q));
    EXPECT_EQ(again, q) << print_query(q);
  }
}

TEST(Evaluate, Examples) {
  const std::vector<Param> vars{{"v0", Sort::integer()}, {"v1", Sort::integer()}};
  EXPECT_EQ(std::get<Integer>(evaluate(parse_term("(ite (>= v0 v1) v0 v1)", vars),
                                       {{"v0", Integer(3)}, {"v1", Integer(5)}})),
            5);
  EXPECT_EQ(std::get<Integer>(evaluate(parse_term("(+ v0 1)", vars), {{"v0", Integer(41)}})),
            42);
  EXPECT_THROW(evaluate(parse_term("(div v0 0)", vars), {{"v0", Integer(1)}}), DivisionByZero);
  EXPECT_THROW(evaluate(parse_term("(+ v0 v1)", vars), {{"v0", Integer(1)}}), EvalError);
}

TEST(Evaluate, EuclideanDivision) {
  // a = b*q + r with 0 <= r < |b|
  for (int a = -9; a <= 9; ++a) {
    for (int b : {-4, -3, 3, 4}) {
      const Integer q = euclid_div(a, b);
      const Integer r = euclid_mod(a, b);
      EXPECT_EQ(Integer(b) * q + r, Integer(a));
      EXPECT_GE(r, 0);
      EXPECT_LT(r, std::abs(b));
    }
  }
  EXPECT_EQ(euclid_div(-7, 2), -4);
  EXPECT_EQ(euclid_mod(-7, 2), 1);
  EXPECT_EQ(euclid_div(7, -2), -3);
}

TEST(Evaluate, ArbitraryPrecision) {
  const std::vector<Param> vars{{"x", Sort::integer()}};
  const Term t = parse_term("(* x x)", vars);
  const Integer big("123456789012345678901");
  EXPECT_EQ(std::get<Integer>(evaluate(t, {{"x", big}})), big * big);
}

TEST(Evaluate, BitVectors) {
  const std::vector<Param> vars{{"x", Sort::bitvec(8)}};
  const Value v = evaluate(parse_term("(bvadd x #xff)", vars), {{"x", BitVec::make(1, 8)}});
  EXPECT_EQ(std::get<BitVec>(v), BitVec::make(0, 8));
  EXPECT_TRUE(std::get<bool>(
      evaluate(parse_term("(bvult x #x80)", vars), {{"x", BitVec::make(0x7f, 8)}})));
}

TEST(FastEval, AgreesWithExactEvaluator) {
  const std::vector<Param> vars{{"a", Sort::integer()}, {"b", Sort::integer()}};
  const std::vector<std::string> names{"a", "b"};
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(-20, 20);
  for (const char* text : {"(ite (>= a b) (- a b) (* a 3))", "(+ (div a 3) (mod b 4))",
                           "(abs (- a (* b b)))"}) {
    const Term t = parse_term(text, vars);
    const fast::Program p = fast::compile(t, names);
    for (int i = 0; i < 100; ++i) {
      const int a = d(rng), b = d(rng);
      const fast::Val env[2] = {fast::known(a), fast::known(b)};
      const fast::Val v = fast::run(p, env);
      ASSERT_TRUE(v.known());
      EXPECT_EQ(Integer(v.v), std::get<Integer>(evaluate(t, {{"a", Integer(a)}, {"b", Integer(b)}})))
          << text;
    }
  }
}

TEST(FastEval, OverflowAndDivisionStates) {
  const std::vector<Param> vars{{"a", Sort::integer()}};
  const std::vector<std::string> names{"a"};
  const fast::Program mul = fast::compile(parse_term("(* a a)", vars), names);
  const fast::Val big[1] = {fast::known(std::int64_t{1} << 40)};
  EXPECT_EQ(fast::run(mul, big).st, fast::State::Overflow);
  const fast::Program div = fast::compile(parse_term("(div 1 a)", vars), names);
  const fast::Val zero[1] = {fast::known(0)};
  EXPECT_EQ(fast::run(div, zero).st, fast::State::DivZero);
}

}  // namespace
}  // namespace synthsel
