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

#include "synthsel/enumerator.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <string>
#include <unordered_map>

#include "synthsel/error.hpp"
#include "synthsel/fast_eval.hpp"

namespace synthsel {

double edge_cost(const Grammar& grammar, std::size_t nt, double scale) {
  if (nt >= grammar.nonterminals().size()) throw Error("unknown nonterminal");
  return scale * static_cast<double>(grammar.productions(nt).size());
}

std::vector<double> min_completion_costs(const Grammar& grammar, double scale) {
  const std::size_t n = grammar.nonterminals().size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> mc(n, kInf);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t nt = 0; nt < n; ++nt) {
      const double edge = edge_cost(grammar, nt, scale);
      for (const auto& p : grammar.productions(nt)) {
        double c = edge;
        for (Symbol s : p.rhs) {
          if (is_nonterminal(s)) c += mc[nonterminal_index(s)];
        }
        if (c < mc[nt]) {
          mc[nt] = c;
          changed = true;
        }
      }
    }
  }
  return mc;
}

double heuristic(std::span<const Symbol> form, std::span<const double> mc) {
  double g = 0;
  for (Symbol s : form) {
    if (is_nonterminal(s)) g += mc[nonterminal_index(s)];
  }
  return g;
}

double heuristic(const Grammar& grammar, std::span<const Symbol> form, double scale) {
  const auto mc = min_completion_costs(grammar, scale);
  return heuristic(form, mc);
}

std::string_view to_string(SynthesisResult::Status status) {
  switch (status) {
    case SynthesisResult::Status::Found:
      return "found";
    case SynthesisResult::Status::Exhausted:
      return "exhausted";
    case SynthesisResult::Status::Timeout:
      return "timeout";
    case SynthesisResult::Status::MemoryLimit:
      return "memory-limit";
  }
  return "unknown";
}

std::string_view to_string(CegisResult::Status status) {
  switch (status) {
    case CegisResult::Status::Solved:
      return "solved";
    case CegisResult::Status::Timeout:
      return "timeout";
    case CegisResult::Status::Exhausted:
      return "exhausted";
    case CegisResult::Status::MemoryLimit:
      return "memory-limit";
    case CegisResult::Status::Unknown:
      return "unknown";
  }
  return "unknown";
}

Assignment zero_assignment(const SynthQuery& query) {
  Assignment a;
  for (const auto& v : query.variables) {
    if (v.sort.is_bool()) {
      a[v.name] = false;
    } else if (v.sort.is_bitvec()) {
      a[v.name] = BitVec::make(0, v.sort.width);
    } else {
      a[v.name] = Integer(0);
    }
  }
  return a;
}

namespace {

using fast::Val;

/// Grammar terminals in a form the evaluator can run directly.
struct TerminalInfo {
  GrammarTerminal::Kind kind;
  Op op = Op::Add;
  std::uint32_t arity = 0;
  std::uint32_t width = 0;
  Val constant;
  int param = -1;  // Leaf referring to a parameter
};

bool contains_nested_call(const Term& t, std::string_view fun, bool inside) {
  if (t.kind() == TermKind::Call && t.name() == fun) {
    if (inside) return true;
    inside = true;
  }
  for (const auto& c : t.children()) {
    if (contains_nested_call(c, fun, inside)) return true;
  }
  return false;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

class Search {
 public:
  Search(const Grammar& g, const CounterexampleSet& examples, const SynthQuery& q,
         Clock::time_point deadline, const EnumeratorConfig& cfg, bool record)
      : g_(g), q_(q), deadline_(deadline), cfg_(cfg), record_(record) {
    prepare_grammar();
    prepare_examples(examples);
  }

  SynthesisResult run();

 private:
  struct State {
    std::uint64_t offset;
    std::uint32_t len;
    std::uint32_t leftmost;  // position of the leftmost nonterminal, len if none
    double f;
    double g;
  };

  struct Entry {
    double priority;
    std::uint64_t seq;
    std::uint32_t state;
    bool operator>(const Entry& o) const {
      return priority != o.priority ? priority > o.priority : seq > o.seq;
    }
  };

  struct Rep {
    double cost;
    std::size_t nt;
    std::uint32_t values;  // offset into rep_values_
    std::uint32_t term;    // offset into rep_terms_
    std::uint32_t term_len;
    std::uint32_t next;    // next rep with the same hash, or kNone
  };
  static constexpr std::uint32_t kNone = 0xffffffffU;

  enum class Verdict { Consistent, Inconsistent, Open };

  void prepare_grammar();
  void prepare_examples(const CounterexampleSet& examples);

  Val eval_form(const Symbol* form, std::size_t& pos, const Val* params) const;
  std::size_t subterm_end(const Symbol* form, std::size_t pos) const;
  Verdict check_examples(const Symbol* form, std::size_t len, bool complete) const;
  bool exact_consistent(const Symbol* form, std::size_t len) const;
  bool equivalent_pruned(const Symbol* form, const std::int16_t* origin, std::size_t filled,
                         std::size_t next_nt);
  bool redundant_operand(const Symbol* form, const std::int16_t* origin, std::size_t q,
                         std::size_t end, std::span<const std::int64_t> values) const;
  bool redundant_expansion(const Symbol* form, const std::int16_t* origin, std::size_t p,
                           std::size_t nt, const Production& prod) const;
  std::size_t memory_bytes() const;

  const Grammar& g_;
  const SynthQuery& q_;
  Clock::time_point deadline_;
  const EnumeratorConfig& cfg_;
  bool record_;

  std::vector<TerminalInfo> terms_;
  std::vector<double> edge_;
  std::vector<double> mc_;

  fast::Program spec_;
  std::vector<std::vector<Val>> envs_;
  bool exact_examples_ = false;  // an example value does not fit in int64
  std::vector<std::vector<Val>> points_;  // distinct call arguments
  // Per example, the point index of each call in evaluation order.
  std::vector<std::vector<std::uint32_t>> call_points_;
  bool oe_enabled_ = false;
  CounterexampleSet examples_;

  std::vector<Symbol> forms_;
  std::vector<std::int16_t> origins_;
  std::vector<State> states_;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open_;
  std::unordered_map<std::uint64_t, double> seen_;
  std::unordered_map<std::uint64_t, std::uint32_t> rep_heads_;
  std::vector<Rep> reps_;
  std::vector<std::int64_t> rep_values_;
  std::vector<Symbol> rep_terms_;
  mutable std::vector<Val> outputs_;
  SearchStats stats_;
};

void Search::prepare_grammar() {
  const auto& params = q_.fun.params;
  for (const auto& t : g_.terminals()) {
    TerminalInfo info;
    info.kind = t.kind;
    info.op = t.op;
    info.arity = t.arity;
    info.width = t.sort.width;
    if (t.kind == GrammarTerminal::Kind::Leaf) {
      if (t.leaf.kind() == TermKind::Var) {
        const auto it = std::find_if(params.begin(), params.end(),
                                     [&](const Param& p) { return p.name == t.leaf.name(); });
        if (it == params.end()) {
          throw Error("grammar leaf '" + t.leaf.name() + "' is not a parameter");
        }
        info.param = static_cast<int>(it - params.begin());
      } else {
        info.constant = fast::from_value(t.leaf.kind() == TermKind::IntLit ? Value{t.leaf.int_value()}
                                         : t.leaf.kind() == TermKind::BoolLit
                                             ? Value{t.leaf.bool_value()}
                                             : Value{t.leaf.bv_value()});
      }
    }
    terms_.push_back(info);
  }
  for (std::size_t nt = 0; nt < g_.nonterminals().size(); ++nt) {
    edge_.push_back(edge_cost(g_, nt, cfg_.cost_scale));
  }
  mc_ = min_completion_costs(g_, cfg_.cost_scale);
  if (g_.nonterminals().size() > static_cast<std::size_t>(std::numeric_limits<std::int16_t>::max())) {
    throw UnsupportedError("grammar has too many nonterminals");
  }
}

void Search::prepare_examples(const CounterexampleSet& examples) {
  examples_ = examples;
  std::vector<std::string> names;
  for (const auto& v : q_.variables) names.push_back(v.name);
  const Term spec = conjunction(q_.constraints);
  spec_ = fast::compile(spec, names, q_.fun.name);
  for (const auto& ex : examples) {
    std::vector<Val> env;
    for (const auto& v : q_.variables) {
      const auto it = ex.find(v.name);
      if (it == ex.end()) throw EvalError("example does not bind '" + v.name + "'");
      env.push_back(fast::from_value(it->second));
      if (!env.back().known()) exact_examples_ = true;
    }
    envs_.push_back(std::move(env));
  }
  oe_enabled_ = cfg_.prune_equivalent && !exact_examples_ &&
                !contains_nested_call(spec, q_.fun.name, false);
  if (!oe_enabled_) return;
  for (const auto& env : envs_) {
    std::vector<std::uint32_t> seq;
    auto record = [&](std::span<const Val> args) {
      const auto same = [&](const std::vector<Val>& p) {
        return std::equal(p.begin(), p.end(), args.begin(), args.end(),
                          [](Val x, Val y) { return x.v == y.v && x.st == y.st; });
      };
      const auto it = std::find_if(points_.begin(), points_.end(), same);
      seq.push_back(static_cast<std::uint32_t>(it - points_.begin()));
      if (it == points_.end()) points_.emplace_back(args.begin(), args.end());
      return fast::unknown();
    };
    fast::run(spec_, env.data(), record);
    call_points_.push_back(std::move(seq));
  }
  for (const auto& p : points_) {
    for (const auto& v : p) {
      if (!v.known()) oe_enabled_ = false;
    }
  }
  outputs_.resize(points_.size());
}

Val Search::eval_form(const Symbol* form, std::size_t& pos, const Val* params) const {
  const Symbol s = form[pos++];
  if (is_nonterminal(s)) return fast::unknown();
  const TerminalInfo& t = terms_[static_cast<std::size_t>(s)];
  switch (t.kind) {
    case GrammarTerminal::Kind::Leaf:
      return t.param >= 0 ? params[t.param] : t.constant;
    case GrammarTerminal::Kind::Ite: {
      const Val c = eval_form(form, pos, params);
      const Val a = eval_form(form, pos, params);
      const Val b = eval_form(form, pos, params);
      return fast::ite(c, a, b);
    }
    case GrammarTerminal::Kind::Operator: {
      Val small[8];
      std::vector<Val> big;
      Val* args = small;
      if (t.arity > 8) {
        big.resize(t.arity);
        args = big.data();
      }
      for (std::uint32_t i = 0; i < t.arity; ++i) args[i] = eval_form(form, pos, params);
      return fast::apply(t.op, t.width, std::span<const Val>(args, t.arity));
    }
  }
  return fast::unknown();
}

std::size_t Search::subterm_end(const Symbol* form, std::size_t pos) const {
  std::size_t need = 1;
  while (need > 0) {
    const Symbol s = form[pos++];
    --need;
    if (!is_nonterminal(s)) need += terms_[static_cast<std::size_t>(s)].arity;
  }
  return pos;
}

Search::Verdict Search::check_examples(const Symbol* form, std::size_t len,
                                       bool complete) const {
  // Without nested calls every call point is fixed, so the program runs once
  // per point instead of once per call.
  const bool memo = oe_enabled_;
  if (memo) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      std::size_t pos = 0;
      outputs_[i] = eval_form(form, pos, points_[i].data());
    }
  }
  bool open = false;
  for (std::size_t e = 0; e < envs_.size(); ++e) {
    std::size_t k = 0;
    auto call = [&](std::span<const Val> args) {
      if (memo) return outputs_[call_points_[e][k++]];
      std::size_t pos = 0;
      return eval_form(form, pos, args.data());
    };
    const Val r = fast::run(spec_, envs_[e].data(), call);
    if (r.known()) {
      if (r.v == 0) return Verdict::Inconsistent;
      continue;
    }
    // Division by zero on an example fails that example.
    if (complete && r.st == fast::State::DivZero) return Verdict::Inconsistent;
    open = true;
  }
  if (!open) return Verdict::Consistent;
  if (!complete) return Verdict::Open;
  return exact_consistent(form, len) ? Verdict::Consistent : Verdict::Inconsistent;
}

bool Search::exact_consistent(const Symbol* form, std::size_t len) const {
  const Term body = g_.to_term(std::span<const Symbol>(form, len));
  const Candidate cand = Candidate::for_function(q_.fun, body);
  for (const auto& ex : examples_) {
    try {
      if (!satisfies(q_, cand, ex)) return false;
    } catch (const DivisionByZero&) {
      return false;
    }
  }
  return true;
}

bool Search::equivalent_pruned(const Symbol* form, const std::int16_t* origin,
                               std::size_t filled, std::size_t next_nt) {
  std::vector<std::int64_t> values(points_.size());
  // Walk outwards over expansion roots whose subterm contains `filled` and
  // has just become complete.
  for (std::size_t q = filled + 1; q-- > 0;) {
    if (origin[q] < 0) continue;
    const std::size_t end = subterm_end(form, q);
    if (end <= filled) continue;
    if (end > next_nt) break;  // still has a hole; so do all enclosing subterms
    const auto nt = static_cast<std::size_t>(origin[q]);
    std::uint64_t h = mix(0x84222325cbf29ce4ULL, nt);
    bool usable = true;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      std::size_t pos = q;
      const Val v = eval_form(form, pos, points_[i].data());
      if (!v.known()) {
        usable = false;
        break;
      }
      values[i] = v.v;
      h = mix(h, static_cast<std::uint64_t>(v.v));
    }
    if (!usable) continue;
    if (redundant_operand(form, origin, q, end, values)) return true;
    double cost = 0;
    for (std::size_t i = q; i < end; ++i) {
      if (origin[i] >= 0) cost += edge_[static_cast<std::size_t>(origin[i])];
    }
    auto [head, inserted] = rep_heads_.try_emplace(h, kNone);
    std::uint32_t r = head->second;
    for (; r != kNone; r = reps_[r].next) {
      const Rep& rep = reps_[r];
      if (rep.nt == nt &&
          std::equal(values.begin(), values.end(), rep_values_.begin() + rep.values)) {
        break;
      }
    }
    if (r == kNone) {
      reps_.push_back({cost, nt, static_cast<std::uint32_t>(rep_values_.size()),
                       static_cast<std::uint32_t>(rep_terms_.size()),
                       static_cast<std::uint32_t>(end - q), head->second});
      head->second = static_cast<std::uint32_t>(reps_.size() - 1);
      rep_values_.insert(rep_values_.end(), values.begin(), values.end());
      rep_terms_.insert(rep_terms_.end(), form + q, form + end);
      continue;
    }
    Rep& rep = reps_[r];
    const bool same = rep.term_len == end - q &&
                      std::equal(form + q, form + end, rep_terms_.begin() + rep.term);
    if (same) continue;
    if (rep.cost <= cost) return true;
    rep.cost = cost;
    rep.term = static_cast<std::uint32_t>(rep_terms_.size());
    rep.term_len = static_cast<std::uint32_t>(end - q);
    rep_terms_.insert(rep_terms_.end(), form + q, form + end);
  }
  return false;
}

bool Search::redundant_operand(const Symbol* form, const std::int16_t* origin,
                               std::size_t q, std::size_t end,
                               std::span<const std::int64_t> values) const {
  // The completed subterm at q is the first operand of the node at q - 1.
  // Some first operands make the whole node agree on every point with a
  // cheaper subterm of the same nonterminal: the operand itself (absorbing
  // values) or the next operand (identities, constant ite conditions).
  if (q == 0 || origin[q - 1] < 0 || is_nonterminal(form[q - 1])) return false;
  const TerminalInfo& t = terms_[static_cast<std::size_t>(form[q - 1])];
  const Symbol whole = nonterminal_symbol(static_cast<std::size_t>(origin[q - 1]));
  const auto all = [&](std::int64_t x) {
    return std::all_of(values.begin(), values.end(), [x](std::int64_t v) { return v == x; });
  };
  const bool operand_is_whole = origin[q] == origin[q - 1];
  const bool next_is_whole = form[end] == whole;
  if (t.kind == GrammarTerminal::Kind::Ite) {
    if (!is_nonterminal(form[end])) return false;
    if (all(1)) return next_is_whole;
    return all(0) && form[end + 1] == whole;
  }
  if (t.kind != GrammarTerminal::Kind::Operator || t.arity != 2) return false;
  switch (t.op) {
    case Op::Add:
      return all(0) && next_is_whole;
    case Op::Mul:
      return (all(1) && next_is_whole) || (all(0) && operand_is_whole);
    case Op::And:
      return (all(1) && next_is_whole) || (all(0) && operand_is_whole);
    case Op::Or:
      return (all(0) && next_is_whole) || (all(1) && operand_is_whole);
    default:
      return false;
  }
}

bool Search::redundant_expansion(const Symbol* form, const std::int16_t* origin,
                                 std::size_t p, std::size_t nt,
                                 const Production& prod) const {
  // (not (not X)) is X, and (ite (not C) A B) is (ite C B A).
  if (p == 0 || prod.rhs.size() != 2 || !is_nonterminal(prod.rhs[1])) return false;
  const Symbol s = prod.rhs[0];
  const TerminalInfo& t = terms_[static_cast<std::size_t>(s)];
  if (t.kind != GrammarTerminal::Kind::Operator || t.op != Op::Not) return false;
  const Symbol inner = prod.rhs[1];
  if (is_nonterminal(form[p - 1]) || origin[p - 1] < 0) return false;
  const TerminalInfo& parent = terms_[static_cast<std::size_t>(form[p - 1])];
  if (parent.kind == GrammarTerminal::Kind::Operator && parent.op == Op::Not) {
    return inner == nonterminal_symbol(static_cast<std::size_t>(origin[p - 1]));
  }
  if (parent.kind == GrammarTerminal::Kind::Ite) {
    return inner == nonterminal_symbol(nt) && is_nonterminal(form[p + 1]) &&
           form[p + 1] == form[p + 2];
  }
  return false;
}

std::size_t Search::memory_bytes() const {
  return forms_.capacity() * sizeof(Symbol) + origins_.capacity() * sizeof(std::int16_t) +
         states_.capacity() * sizeof(State) + open_.size() * sizeof(Entry) +
         seen_.size() * 40 + reps_.capacity() * sizeof(Rep) + rep_heads_.size() * 32 +
         rep_values_.capacity() * sizeof(std::int64_t) + rep_terms_.capacity() * sizeof(Symbol);
}

SynthesisResult Search::run() {
  SynthesisResult result;
  const Symbol start = nonterminal_symbol(g_.start());
  forms_.push_back(start);
  origins_.push_back(-1);
  states_.push_back({0, 1, 0, 0.0, mc_[g_.start()]});
  open_.push({mc_[g_.start()], 0, 0});
  std::uint64_t seq = 1;
  std::vector<Symbol> child;
  std::vector<std::int16_t> child_origin;

  while (!open_.empty()) {
    if (Clock::now() >= deadline_) {
      result.status = SynthesisResult::Status::Timeout;
      result.stats = std::move(stats_);
      return result;
    }
    const Entry top = open_.top();
    open_.pop();
    const State st = states_[top.state];
    ++stats_.expanded;
    if (record_) stats_.pop_priorities.push_back(top.priority);
    const Symbol* form = forms_.data() + st.offset;
    const std::int16_t* origin = origins_.data() + st.offset;

    if (st.leftmost == st.len) {
      // Complete programs are pushed only when consistent with every example.
      const Term body = g_.to_term(std::span<const Symbol>(form, st.len));
      result.status = SynthesisResult::Status::Found;
      result.candidate = Candidate::for_function(q_.fun, body);
      result.cost = st.f;
      result.stats = std::move(stats_);
      return result;
    }

    const std::size_t p = st.leftmost;
    const std::size_t nt = nonterminal_index(form[p]);
    for (const auto& prod : g_.productions(nt)) {
      if (oe_enabled_ && redundant_expansion(form, origin, p, nt, prod)) {
        ++stats_.pruned_equivalent;
        continue;
      }
      child.assign(form, form + p);
      child.insert(child.end(), prod.rhs.begin(), prod.rhs.end());
      child.insert(child.end(), form + p + 1, form + st.len);
      child_origin.assign(origin, origin + p);
      child_origin.push_back(static_cast<std::int16_t>(nt));
      child_origin.insert(child_origin.end(), prod.rhs.size() - 1, -1);
      child_origin.insert(child_origin.end(), origin + p + 1, origin + st.len);
      ++stats_.generated;

      std::size_t next = p;
      while (next < child.size() && !is_nonterminal(child[next])) ++next;
      const bool complete = next == child.size();
      double g = st.g - mc_[nt];
      for (Symbol s : prod.rhs) {
        if (is_nonterminal(s)) g += mc_[nonterminal_index(s)];
      }
      g = std::max(0.0, g);
      const double f = st.f + edge_[nt];

      // A leaf expansion is the only step that makes new values known.
      const bool leaf = next > p;
      if (leaf) {
        if (oe_enabled_ &&
            equivalent_pruned(child.data(), child_origin.data(), p, next)) {
          ++stats_.pruned_equivalent;
          continue;
        }
        if (cfg_.prune_partial || complete) {
          const Verdict v = check_examples(child.data(), child.size(), complete);
          if (v == Verdict::Inconsistent) {
            ++stats_.pruned_partial;
            continue;
          }
        }
      }

      std::uint64_t h = 0xcbf29ce484222325ULL;
      for (Symbol s : child) h = mix(h, static_cast<std::uint32_t>(s));
      auto [it, inserted] = seen_.try_emplace(h, f);
      if (!inserted) {
        if (it->second <= f) {
          ++stats_.duplicates;
          continue;
        }
        it->second = f;
      }

      const std::uint64_t offset = forms_.size();
      forms_.insert(forms_.end(), child.begin(), child.end());
      origins_.insert(origins_.end(), child_origin.begin(), child_origin.end());
      states_.push_back({offset, static_cast<std::uint32_t>(child.size()),
                         static_cast<std::uint32_t>(next), f, complete ? 0.0 : g});
      open_.push({f + (complete ? 0.0 : g), seq++, static_cast<std::uint32_t>(states_.size() - 1)});
      // Forms may point into forms_, which just grew.
      form = forms_.data() + st.offset;
      origin = origins_.data() + st.offset;
    }
    if (memory_bytes() > cfg_.memory_limit_bytes) {
      result.status = SynthesisResult::Status::MemoryLimit;
      result.stats = std::move(stats_);
      return result;
    }
  }
  result.status = SynthesisResult::Status::Exhausted;
  result.stats = std::move(stats_);
  return result;
}

}  // namespace

SynthesisResult astar_synthesize(const Grammar& grammar, const CounterexampleSet& examples,
                                 const SynthQuery& query, Clock::time_point deadline,
                                 const EnumeratorConfig& config, bool record_pops) {
  if (grammar.nonterminals().empty()) throw Error("empty grammar");
  if (grammar.nonterminals()[grammar.start()].sort != query.fun.result) {
    throw SortError("grammar start sort differs from the function's result sort");
  }
  Search search(grammar, examples, query, deadline, config, record_pops);
  return search.run();
}

CegisResult cegis_solve(const SynthQuery& query, const Grammar& grammar,
                        Clock::time_point deadline, Verifier& verifier,
                        const EnumeratorConfig& config) {
  CegisResult out;
  out.examples.push_back(zero_assignment(query));
  while (true) {
    if (Clock::now() >= deadline) {
      out.status = CegisResult::Status::Timeout;
      return out;
    }
    SynthesisResult found = astar_synthesize(grammar, out.examples, query, deadline, config);
    switch (found.status) {
      case SynthesisResult::Status::Found:
        break;
      case SynthesisResult::Status::Timeout:
        out.status = CegisResult::Status::Timeout;
        return out;
      case SynthesisResult::Status::Exhausted:
        out.status = CegisResult::Status::Exhausted;
        return out;
      case SynthesisResult::Status::MemoryLimit:
        out.status = CegisResult::Status::MemoryLimit;
        return out;
    }
    VerificationResult verdict = verifier.check(query, *found.candidate, deadline);
    out.verdict = verdict;
    if (verdict.is_valid()) {
      out.status = CegisResult::Status::Solved;
      out.candidate = std::move(found.candidate);
      return out;
    }
    if (!verdict.is_counterexample()) {
      out.status = Clock::now() >= deadline ? CegisResult::Status::Timeout
                                            : CegisResult::Status::Unknown;
      out.reason = verdict.reason;
      return out;
    }
    if (std::find(out.examples.begin(), out.examples.end(), verdict.counterexample) !=
        out.examples.end()) {
      // The candidate satisfied this example during search, so the two
      // evaluators disagree; stop instead of looping.
      out.status = CegisResult::Status::Unknown;
      out.reason = "counterexample repeats a known example";
      return out;
    }
    out.examples.push_back(verdict.counterexample);
    ++out.iterations;
  }
}

}  // namespace synthsel
