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

#include "synthsel/llm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "synthsel/error.hpp"

namespace synthsel {

const std::string_view kEmotionalStimuli =
    "You are excited to help, and you are ready to provide the best answer possible. You "
    "understand that if you fail to provide the best answer, your client will be extremely "
    "upset. Please don't fail me.";

const std::string_view kLispTranslationPrompt =
    "Please convert the Lisp function you generated into SMT-LIB format. Follow these "
    "guidelines: \n"
    "1. Start the function with `(define-fun`.\n"
    "2. Provide only the function definition, starting with `(define-fun`.\n"
    "3. Ensure the SMT-LIB function contains exactly one function definition.\n"
    "4. Avoid using iterations, bitvec, or int notations inside the body.\n"
    "5. Check the function description in the first message to ensure variable and function "
    "names are consistent.\n"
    "6. Use the assigned values from the Lisp code during translation.\n"
    "7. Do not introduce any new variables that do not exist in the Lisp function.\n"
    "8. Pay attention to types. If there are bit-vector terms, ensure they are of the same "
    "width.\n"
    "Rules for SMT-LIB: +, -, *, ite, >, =, <, >=, <=, and, or, not, true, false.";

namespace {

struct TranslationExample {
  std::string_view lisp;
  std::string_view smtlib;
};

constexpr TranslationExample kTranslationExamples[kTranslationExampleCount] = {
    {"(defun f (x y) (if (>= x y) x y))",
     "(define-fun f ((x Int) (y Int)) Int (ite (>= x y) x y))"},
    {"(defun f (x) (if (< x 0) (- 0 x) x))", "(define-fun f ((x Int)) Int (ite (< x 0) (- 0 x) x))"},
    {"(defun f (a b c) (and (<= a b) (<= b c)))",
     "(define-fun f ((a Int) (b Int) (c Int)) Bool (and (<= a b) (<= b c)))"},
};

// "a", "a, and b", "a, b, and c".
std::string join_and(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    if (i > 0 && i + 1 == items.size()) out += "and ";
    out += items[i];
  }
  return out;
}

bool is_atomic(const Term& t) {
  return t.kind() != TermKind::App && t.kind() != TermKind::Ite;
}

std::string operand(const Term& t) {
  std::string s = translate_term_nl(t);
  return is_atomic(t) ? s : "(" + s + ")";
}

std::string join_operands(const Term& t, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < t.children().size(); ++i) {
    if (i > 0) out += sep;
    out += operand(t.child(i));
  }
  return out;
}

std::string_view relation_phrase(Op op) {
  switch (op) {
    case Op::Ge:
      return " is greater than or equal to ";
    case Op::Le:
      return " is less than or equal to ";
    case Op::Gt:
      return " is greater than ";
    case Op::Lt:
      return " is less than ";
    case Op::Eq:
      return " is equal to ";
    case Op::Distinct:
      return " is not equal to ";
    default:
      return {};
  }
}

}  // namespace

PromptStyle prompt_style(int index) {
  switch (index) {
    case 1:
      return {1, true, true, false, false, false};
    case 2:
      return {2, true, true, false, false, true};
    case 3:
      return {3, false, true, false, false, false};
    case 4:
      return {4, false, false, false, false, false};
    case 5:
      return {5, false, true, true, false, false};
    case 6:
      return {6, true, true, true, true, false};
    default:
      throw Error("prompt style must be in 1..6");
  }
}

std::string translate_term_nl(const Term& t) {
  switch (t.kind()) {
    case TermKind::IntLit:
      return t.int_value().str();
    case TermKind::BoolLit:
      return t.bool_value() ? "true" : "false";
    case TermKind::BvLit:
      return print_term(t);
    case TermKind::Var:
      return t.name();
    case TermKind::Call: {
      std::vector<std::string> args;
      for (const auto& c : t.children()) args.push_back(translate_term_nl(c));
      std::string out = t.name() + "(";
      for (std::size_t i = 0; i < args.size(); ++i) out += (i > 0 ? ", " : "") + args[i];
      return out + ")";
    }
    case TermKind::Ite:
      return "if " + operand(t.child(0)) + " then " + operand(t.child(1)) + " else " +
             operand(t.child(2));
    case TermKind::App:
      break;
  }
  const auto n = t.children().size();
  const std::string_view rel = relation_phrase(t.op());
  if (!rel.empty() && n == 2) return operand(t.child(0)) + std::string(rel) + operand(t.child(1));
  switch (t.op()) {
    case Op::And:
      return join_operands(t, " and ");
    case Op::Or:
      return join_operands(t, " or ");
    case Op::Not:
      return "it is not the case that " + operand(t.child(0));
    case Op::Implies:
      if (n == 2) return "if " + operand(t.child(0)) + " then " + operand(t.child(1));
      break;
    case Op::Add:
      return join_operands(t, " plus ");
    case Op::Sub:
      if (n == 1) return "the negation of " + operand(t.child(0));
      return join_operands(t, " minus ");
    case Op::Mul:
      return join_operands(t, " times ");
    case Op::Div:
      return join_operands(t, " divided by ");
    case Op::Mod:
      return join_operands(t, " modulo ");
    case Op::Abs:
      return "the absolute value of " + operand(t.child(0));
    default:
      break;
  }
  // No phrase for this operator: keep the prefix form.
  return print_term(t);
}

std::string translate_constraints_nl(const SynthQuery& query) {
  if (query.constraints.empty()) return "There are no constraints.";
  std::string out;
  for (std::size_t i = 0; i < query.constraints.size(); ++i) {
    if (i > 0) out += '\n';
    out += std::to_string(i + 1) + ". " + translate_term_nl(query.constraints[i]) + ".";
  }
  return out;
}

std::vector<FewShotExample> select_few_shot(const std::vector<FewShotExample>& pool,
                                            const SynthQuery& query, std::size_t count) {
  std::vector<FewShotExample> out;
  for (auto it = pool.rbegin(); it != pool.rend() && out.size() < count; ++it) {
    if (it->logic == query.logic) out.push_back(*it);
  }
  if (out.empty()) {
    for (auto it = pool.rbegin(); it != pool.rend() && out.size() < count; ++it) {
      out.push_back(*it);
    }
  }
  return out;
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::System:
      return "system";
    case Role::User:
      return "user";
    case Role::Assistant:
      return "assistant";
  }
  return "user";
}

std::string render_first_prompt(const SynthQuery& query, std::string_view query_text,
                                const PromptStyle& style,
                                const std::vector<FewShotExample>& few_shot) {
  const std::string source = query_text.empty() ? print_query(query) : std::string(query_text);
  std::string out;
  if (style.roles) out += std::string(kRoleSentence) + ".\n\n";

  if (!few_shot.empty()) {
    out += "Here are previously solved synthesis problems and their solutions.\n\n";
    for (std::size_t i = 0; i < few_shot.size(); ++i) {
      out += "Solved example " + std::to_string(i + 1) + ":\n" + few_shot[i].query_text +
             "\nSolution:\n" + few_shot[i].solution + "\n\n";
    }
  }

  std::string constraints;
  if (style.natural_language) {
    constraints = translate_constraints_nl(query);
  } else if (style.higher_resource_pl) {
    for (const auto& c : query.constraints) constraints += "(constraint " + print_term(c) + ")\n";
    if (constraints.empty()) constraints = "There are no constraints.";
  }

  if (style.higher_resource_pl) {
    const std::string& f = query.fun.name;
    std::string sig = "(synth-fun " + f + " (";
    std::vector<std::string> names;
    std::vector<std::string> sorts;
    for (std::size_t i = 0; i < query.fun.params.size(); ++i) {
      const auto& p = query.fun.params[i];
      sig += (i > 0 ? " (" : "(") + p.name + " " + to_string(p.sort) + ")";
      names.push_back(p.name);
      sorts.push_back(to_string(p.sort));
    }
    sig += ") " + to_string(query.fun.result) + ")";
    std::vector<std::string> vars;
    std::vector<std::string> var_sorts;
    for (const auto& v : query.variables) {
      vars.push_back(v.name);
      var_sorts.push_back(to_string(v.sort));
    }
    out += "Solve the following function '" + f +
           "' with Lisp.\n"
           "Only return one function, do not use recursion or \n"
           "iterations. Do not return any text that isn't code. \n"
           "Minimise token use.It's important you keep the \n"
           "variables and function names the same as the original \n"
           "function. The following is the problem that you are \n"
           "meant to solve: \n\n"
           "You need to synthesise: " +
           sig + ". The function is called \"" + f + "\" and takes arguments " +
           join_and(names) + ". These arguments are " + join_and(sorts) +
           ".\n"
           "Write only one Lisp-like method \"defun " +
           f +
           "\" that never violates the SMT-LIB constraints.\n"
           "No built-in functions in code.\n"
           "Universally quantified variables: " +
           join_and(vars) + ". The type of universally quantified variables are " +
           join_and(var_sorts) +
           ".\n"
           "The function must follow the constraints: \n" +
           constraints;
  } else if (style.natural_language) {
    out += "Synthesize the function described below. Reply with one SMT-LIB function "
           "definition starting with `(define-fun`.\n\n" +
           source + "\nThe constraints in words:\n" + constraints;
  } else {
    out += "Synthesize a function that satisfies the following SyGuS problem. Reply with one "
           "SMT-LIB function definition starting with `(define-fun`.\n\n" +
           source;
  }

  if (style.emotional_stimuli) out += "\n\n" + std::string(kEmotionalStimuli);
  return out;
}

std::string render_translation_prompt(const PromptStyle& style) {
  std::string out;
  if (style.roles) out += std::string(kRoleSentence) + ".\n\n";
  out += kLispTranslationPrompt;
  out += "\n\nExamples of previous translations:\n";
  for (const auto& ex : kTranslationExamples) {
    out += "Lisp: " + std::string(ex.lisp) + "\nSMT-LIB: " + std::string(ex.smtlib) + "\n";
  }
  return out;
}

std::vector<Message> render_prompt(const SynthQuery& query, std::string_view query_text,
                                   const PromptStyle& style,
                                   const std::vector<FewShotExample>& pool,
                                   const std::vector<Message>& history) {
  std::vector<FewShotExample> shots;
  if (style.few_shot) shots = select_few_shot(pool, query);
  std::vector<Message> out{{Role::User, render_first_prompt(query, query_text, style, shots)}};
  out.insert(out.end(), history.begin(), history.end());
  return out;
}

// ---- tokens ---------------------------------------------------------------

namespace {

// Calls `fn(begin, end)` for every token; stops early when fn returns false.
template <class Fn>
void for_each_token(std::string_view text, Fn fn) {
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(' || c == ')') {
      if (!fn(i, i + 1)) return;
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
           text[j] != '(' && text[j] != ')') {
      ++j;
    }
    if (!fn(i, j)) return;
    i = j;
  }
}

std::string truncate_tokens(const std::string& text, std::size_t limit) {
  std::size_t seen = 0;
  std::size_t cut = 0;
  for_each_token(text, [&](std::size_t, std::size_t end) {
    if (seen == limit) return false;
    ++seen;
    cut = end;
    return true;
  });
  return text.substr(0, cut);
}

}  // namespace

std::size_t count_tokens(std::string_view text) {
  std::size_t n = 0;
  for_each_token(text, [&](std::size_t, std::size_t) {
    ++n;
    return true;
  });
  return n;
}

std::size_t count_tokens(const std::vector<Message>& messages) {
  std::size_t n = 0;
  for (const auto& m : messages) n += count_tokens(m.content);
  return n;
}

std::size_t ChatTranscript::input_tokens() const {
  std::size_t n = 0;
  for (const auto& e : exchanges) n += e.input_tokens;
  return n;
}

std::size_t ChatTranscript::output_tokens() const {
  std::size_t n = 0;
  for (const auto& e : exchanges) n += e.output_tokens;
  return n;
}

double ChatTranscript::cost() const {
  return static_cast<double>(input_tokens()) + 3.0 * static_cast<double>(output_tokens());
}

std::size_t ChatTranscript::assistant_messages() const {
  return static_cast<std::size_t>(std::count_if(
      messages.begin(), messages.end(), [](const Message& m) { return m.role == Role::Assistant; }));
}

// ---- extraction -----------------------------------------------------------

namespace {

Candidate rebind(const Candidate& cand, const SynthFun& fun) {
  if (!cand.matches(fun)) {
    throw ExtractionError("function '" + cand.name() + "' does not match the signature of '" +
                          fun.name + "'");
  }
  std::vector<Term> args;
  for (const auto& p : fun.params) args.push_back(Term::var(p.name, p.sort));
  const Term call = Term::call(cand.name(), cand.result(), std::move(args));
  return Candidate::for_function(fun, substitute_calls(call, cand.name(), cand));
}

// Lisp spellings of SMT-LIB operators and constants.
void lisp_to_smtlib(SExpr& e) {
  if (e.is_atom()) {
    if (e.quoted) return;
    if (e.atom == "t") e.atom = "true";
    if (e.atom == "nil") e.atom = "false";
    return;
  }
  if (!e.items.empty() && e.items[0].is_atom() && !e.items[0].quoted) {
    std::string& h = e.items[0].atom;
    if (h == "if") h = "ite";
    if (h == "/=") h = "distinct";
    if (h == "equal" || h == "eql" || h == "eq") h = "=";
  }
  for (auto& c : e.items) lisp_to_smtlib(c);
}

Candidate parse_defun(const SExpr& e, const SynthFun& fun) {
  if (!e.is_list() || e.items.size() < 4 || !e.items[1].is_atom() || !e.items[2].is_list()) {
    throw ExtractionError("expected (defun name (params) body)");
  }
  const auto& plist = e.items[2].items;
  if (plist.size() != fun.params.size()) {
    throw ExtractionError("defun takes " + std::to_string(plist.size()) + " parameters, '" +
                          fun.name + "' takes " + std::to_string(fun.params.size()));
  }
  std::vector<Param> params;
  for (std::size_t i = 0; i < plist.size(); ++i) {
    const SExpr& p = plist[i];
    const SExpr& name = p.is_list() && !p.items.empty() ? p.items[0] : p;
    if (!name.is_atom()) throw ExtractionError("malformed defun parameter");
    params.push_back({name.atom, fun.params[i].sort});
  }
  SExpr body = e.items.back();
  lisp_to_smtlib(body);
  Term t = parse_term(body, params);
  return rebind(Candidate::make(e.items[1].atom, std::move(params), fun.result, std::move(t)),
                fun);
}

}  // namespace

Extracted extract_candidate(std::string_view response, AnswerForm form, const SynthFun& fun) {
  const std::string_view marker = form == AnswerForm::Smtlib ? "(define-fun" : "(defun";
  std::optional<SExpr> first;
  std::size_t found = 0;
  std::size_t pos = 0;
  while ((pos = response.find(marker, pos)) != std::string_view::npos) {
    const std::size_t after = pos + marker.size();
    // The marker must be followed by a delimiter, not a longer symbol.
    if (after < response.size() && !std::isspace(static_cast<unsigned char>(response[after]))) {
      pos = after;
      continue;
    }
    std::size_t end = 0;
    std::optional<SExpr> e;
    try {
      e = read_balanced(response, pos, end);
    } catch (const ParseError& err) {
      if (!first) throw ExtractionError(std::string("malformed definition: ") + err.what());
    }
    if (!e) {
      if (!first) throw ExtractionError("unbalanced parentheses in the definition");
      break;
    }
    ++found;
    if (!first) first = std::move(e);
    pos = end;
  }
  if (!first) {
    throw ExtractionError(std::string("no ") + std::string(marker) + " form in the response");
  }
  try {
    if (form == AnswerForm::Smtlib) return {rebind(parse_define_fun(*first), fun), found};
    return {parse_defun(*first, fun), found};
  } catch (const ExtractionError&) {
    throw;
  } catch (const Error& err) {
    throw ExtractionError(err.what());
  }
}

// ---- backends -------------------------------------------------------------

std::string replay_key(const std::string& model, const std::vector<Message>& messages) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0xff;  // field separator that cannot occur in UTF-8
    h *= 0x100000001b3ULL;
  };
  feed(model);
  for (const auto& m : messages) {
    feed(to_string(m.role));
    feed(m.content);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ReplayBackend::ReplayBackend(const std::vector<ReplayEntry>& entries) {
  for (const auto& e : entries) queues_[e.key].entries.push_back(e);
}

std::vector<ReplayEntry> ReplayBackend::read_entries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read replay fixture " + path.string());
  std::vector<ReplayEntry> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ReplayEntry e;
      e.key = j.at("key_hash").get<std::string>();
      e.response = j.at("response_text").get<std::string>();
      if (j.contains("input_tokens") && !j["input_tokens"].is_null()) {
        e.input_tokens = j["input_tokens"].get<std::size_t>();
      }
      if (j.contains("output_tokens") && !j["output_tokens"].is_null()) {
        e.output_tokens = j["output_tokens"].get<std::size_t>();
      }
      out.push_back(std::move(e));
    } catch (const nlohmann::json::exception& err) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": " + err.what());
    }
  }
  return out;
}

ReplayBackend ReplayBackend::from_file(const std::filesystem::path& path) {
  return ReplayBackend(read_entries(path));
}

ChatResponse ReplayBackend::complete(const ChatRequest& request) {
  const std::string key = replay_key(request.model, request.messages);
  const auto it = queues_.find(key);
  if (it == queues_.end()) throw ReplayGap(key, request.model);
  Queue& q = it->second;
  const ReplayEntry& e = q.entries[std::min(q.next, q.entries.size() - 1)];
  if (q.next < q.entries.size()) ++q.next;
  return {e.response, e.input_tokens, e.output_tokens};
}

ChatResponse RecordingBackend::complete(const ChatRequest& request) {
  ChatResponse r = inner_.complete(request);
  nlohmann::json j{{"key_hash", replay_key(request.model, request.messages)},
                   {"response_text", r.text},
                   {"input_tokens", r.input_tokens ? nlohmann::json(*r.input_tokens) : nlohmann::json(nullptr)},
                   {"output_tokens", r.output_tokens ? nlohmann::json(*r.output_tokens) : nlohmann::json(nullptr)}};
  std::ofstream out(path_, std::ios::app);
  if (!out) throw Error("cannot append to " + path_.string());
  out << j.dump() << '\n';
  return r;
}

ScriptedBackend ScriptedBackend::sequence(std::vector<std::string> answers) {
  if (answers.empty()) throw Error("scripted backend needs at least one answer");
  auto next = std::make_shared<std::size_t>(0);
  auto list = std::make_shared<std::vector<std::string>>(std::move(answers));
  return ScriptedBackend([next, list](const ChatRequest&) {
    const std::string& a = (*list)[std::min(*next, list->size() - 1)];
    ++*next;
    return ChatResponse{a, std::nullopt, std::nullopt};
  });
}

// ---- repair loop ----------------------------------------------------------

std::string counterexample_feedback(const SynthQuery& query, const Candidate& cand,
                                    const Assignment& counterexample) {
  std::string violated;
  for (const auto& c : query.constraints) {
    try {
      if (!std::get<bool>(evaluate(c, counterexample, query.fun.name, cand))) {
        violated = print_term(c);
        break;
      }
    } catch (const EvalError&) {
      violated = print_term(c);
      break;
    }
  }
  if (violated.empty()) violated = print_term(conjunction(query.constraints));
  return "Your previous answer was incorrect. On inputs " + to_string(counterexample) +
         ", constraint " + violated + " is violated.";
}

namespace {

class Loop {
 public:
  Loop(const SynthQuery& q, std::string_view text, const SolverId& solver, const LlmSlice& slice,
       LlmBackend& backend, Verifier& verifier, const std::vector<FewShotExample>& pool,
       const LlmOptions& options)
      : q_(q),
        text_(text),
        solver_(solver),
        style_(prompt_style(solver.style)),
        slice_(slice),
        backend_(backend),
        verifier_(verifier),
        pool_(pool),
        options_(options),
        start_(Clock::now()),
        deadline_(start_ + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(std::max(0.0, slice.time)))) {}

  LlmOutcome run();

 private:
  // Sends the conversation; false when a budget stops the loop.
  bool send();
  void finish(std::string reason) { out_.reason = std::move(reason); }

  const SynthQuery& q_;
  std::string_view text_;
  const SolverId& solver_;
  PromptStyle style_;
  LlmSlice slice_;
  LlmBackend& backend_;
  Verifier& verifier_;
  const std::vector<FewShotExample>& pool_;
  const LlmOptions& options_;
  Clock::time_point start_;
  Clock::time_point deadline_;
  LlmOutcome out_;
};

bool Loop::send() {
  auto& tr = out_.transcript;
  if (out_.attempts >= options_.max_attempts) {
    finish("attempt limit reached");
    return false;
  }
  if (Clock::now() >= deadline_) {
    finish("time slice exhausted");
    return false;
  }
  const double spent = tr.cost();
  const std::size_t prompt = count_tokens(tr.messages);
  if (spent + static_cast<double>(prompt) > slice_.cost) {
    finish("cost slice exhausted");
    return false;
  }
  const auto room = static_cast<std::size_t>(
      std::floor((slice_.cost - spent - static_cast<double>(prompt)) / 3.0));
  ChatRequest req{solver_.model, tr.messages, deadline_, room};
  ChatResponse resp;
  try {
    resp = backend_.complete(req);
  } catch (const ReplayGap& gap) {
    if (!options_.tolerant_replay) throw;
    finish(std::string("replay gap: ") + gap.what());
    return false;
  } catch (const TransportError& err) {
    finish(std::string("transport error: ") + err.what());
    return false;
  }
  ++out_.attempts;
  std::size_t in = resp.input_tokens.value_or(prompt);
  std::size_t outn = resp.output_tokens.value_or(count_tokens(resp.text));
  // Provider counts can exceed the local estimate; never charge past the slice.
  in = std::min<std::size_t>(in, static_cast<std::size_t>(std::max(0.0, slice_.cost - spent)));
  const auto left = static_cast<std::size_t>(
      std::floor(std::max(0.0, slice_.cost - spent - static_cast<double>(in)) / 3.0));
  if (outn > left) {
    resp.text = truncate_tokens(resp.text, left);
    outn = left;
    tr.events.push_back("response truncated to " + std::to_string(left) + " tokens");
  }
  tr.exchanges.push_back({in, outn});
  tr.messages.push_back({Role::Assistant, resp.text});
  if (Clock::now() >= deadline_) {
    finish("time slice exhausted");
    return false;
  }
  return true;
}

LlmOutcome Loop::run() {
  auto& tr = out_.transcript;
  tr.messages = render_prompt(q_, text_, style_, pool_, {});
  if (style_.few_shot && pool_.empty()) tr.events.push_back("few-shot pool empty; no examples");

  const auto stop = [&] {
    out_.time = std::chrono::duration<double>(Clock::now() - start_).count();
    out_.cost = tr.cost();
    return std::move(out_);
  };

  while (true) {
    if (!send()) return stop();
    std::string lisp_answer;
    if (style_.higher_resource_pl) {
      lisp_answer = tr.messages.back().content;
      tr.messages.push_back({Role::User, render_translation_prompt(style_)});
      if (!send()) return stop();
    }
    const std::string& answer = tr.messages.back().content;

    std::optional<Extracted> got;
    std::string extraction_error;
    const std::string* sources[] = {&answer, &answer, &lisp_answer};
    const AnswerForm forms[] = {AnswerForm::Smtlib, AnswerForm::Lisp, AnswerForm::Lisp};
    for (int i = 0; i < 3 && !got; ++i) {
      if (sources[i]->empty()) continue;
      try {
        got = extract_candidate(*sources[i], forms[i], q_.fun);
      } catch (const ExtractionError& err) {
        if (extraction_error.empty()) extraction_error = err.what();
      }
    }

    std::string feedback;
    if (!got) {
      tr.events.push_back("extraction failed: " + extraction_error);
      feedback = std::string(kExtractionFeedback);
    } else {
      if (got->forms_found > 1) {
        tr.events.push_back(std::to_string(got->forms_found) +
                            " definitions in the answer; using the first");
      }
      VerificationResult v = verifier_.check(q_, got->candidate, deadline_);
      out_.verdict = v;
      if (v.is_valid()) {
        out_.solved = true;
        out_.candidate = got->candidate;
        finish("verified");
        return stop();
      }
      if (v.is_counterexample()) {
        feedback = counterexample_feedback(q_, got->candidate, v.counterexample);
      } else {
        feedback = "Your previous answer could not be verified (" + v.reason +
                   "). Please give a different answer.";
      }
    }
    if (style_.higher_resource_pl) feedback += " Please write a corrected Lisp function.";
    tr.messages.push_back({Role::User, feedback});
  }
}

}  // namespace

LlmOutcome solve_with_llm(const SynthQuery& query, std::string_view query_text,
                          const SolverId& solver, const LlmSlice& slice, LlmBackend& backend,
                          Verifier& verifier, const std::vector<FewShotExample>& pool,
                          const LlmOptions& options) {
  if (solver.kind != SolverId::Kind::Llm) throw Error("solve_with_llm needs an LLM solver");
  return Loop(query, query_text, solver, slice, backend, verifier, pool, options).run();
}

}  // namespace synthsel
