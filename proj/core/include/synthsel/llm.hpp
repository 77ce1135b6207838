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

// LLM-backed solvers: prompt rendering, chat backends and the repair loop.

#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synthsel/bandit.hpp"
#include "synthsel/query.hpp"
#include "synthsel/verify.hpp"

namespace synthsel {

// ---- prompts --------------------------------------------------------------

struct PromptStyle {
  int index = 4;
  bool natural_language = false;
  bool higher_resource_pl = false;  // Lisp first, then translation
  bool roles = false;
  bool emotional_stimuli = false;
  bool few_shot = false;
};

/// The fixed style matrix; throws Error outside 1..6.
PromptStyle prompt_style(int index);

inline constexpr std::string_view kRoleSentence = "You are a good program synthesizer";
extern const std::string_view kEmotionalStimuli;
extern const std::string_view kLispTranslationPrompt;
inline constexpr std::size_t kFewShotCount = 3;
inline constexpr std::size_t kTranslationExampleCount = 3;

/// Deterministic English rendering, one numbered sentence per constraint.
std::string translate_constraints_nl(const SynthQuery& query);
std::string translate_term_nl(const Term& term);

/// A previously solved problem usable as a few-shot example.
struct FewShotExample {
  std::string logic;
  std::string query_text;
  std::string solution;  // define-fun text
};

/// The 3 most recent entries with the query's logic; most recent overall
/// when none share it. Most recent first.
std::vector<FewShotExample> select_few_shot(const std::vector<FewShotExample>& pool,
                                            const SynthQuery& query,
                                            std::size_t count = kFewShotCount);

enum class Role { System, User, Assistant };
std::string_view to_string(Role role);

struct Message {
  Role role = Role::User;
  std::string content;

  bool operator==(const Message&) const = default;
};

/// Text of the first prompt for `style`. `query_text` is the SyGuS source
/// used when constraints are not rendered in English.
std::string render_first_prompt(const SynthQuery& query, std::string_view query_text,
                                const PromptStyle& style,
                                const std::vector<FewShotExample>& few_shot);
/// Text of the Lisp-to-SMT-LIB translation prompt for `style`.
std::string render_translation_prompt(const PromptStyle& style);

/// The message sequence of the next request: the first prompt followed by
/// the prior exchange history.
std::vector<Message> render_prompt(const SynthQuery& query, std::string_view query_text,
                                   const PromptStyle& style,
                                   const std::vector<FewShotExample>& pool,
                                   const std::vector<Message>& history);

// ---- tokens ---------------------------------------------------------------

/// Parentheses count one each; every maximal run of other non-space
/// characters counts one.
std::size_t count_tokens(std::string_view text);
std::size_t count_tokens(const std::vector<Message>& messages);

/// One request/response round trip.
struct Exchange {
  std::size_t input_tokens = 0;
  std::size_t output_tokens = 0;
};

struct ChatTranscript {
  std::vector<Message> messages;
  std::vector<Exchange> exchanges;
  std::vector<std::string> events;

  std::size_t input_tokens() const;
  std::size_t output_tokens() const;
  /// input + 3 * output.
  double cost() const;
  std::size_t assistant_messages() const;
};

// ---- extraction -----------------------------------------------------------

enum class AnswerForm { Smtlib, Lisp };

class ExtractionError : public Error {
 public:
  using Error::Error;
};

struct Extracted {
  Candidate candidate;
  std::size_t forms_found = 1;
};

/// Finds the first balanced `(define-fun ...)` (Smtlib) or `(defun ...)`
/// (Lisp) form and parses it as a candidate for `fun`. Parameter names may
/// differ from the signature; they are bound positionally.
Extracted extract_candidate(std::string_view response, AnswerForm form, const SynthFun& fun);

// ---- backends -------------------------------------------------------------

struct ChatRequest {
  std::string model;
  std::vector<Message> messages;
  Clock::time_point deadline;
  /// Upper bound on response tokens; unbounded when empty.
  std::optional<std::size_t> max_output_tokens;
};

struct ChatResponse {
  std::string text;
  /// Provider-reported counts; the local tokenizer is used when absent.
  std::optional<std::size_t> input_tokens;
  std::optional<std::size_t> output_tokens;
};

/// The backend could not produce a response (network, HTTP status, timeout).
class TransportError : public Error {
 public:
  using Error::Error;
};

/// A replay fixture has no entry for the request.
class ReplayGap : public Error {
 public:
  ReplayGap(std::string key, const std::string& model)
      : Error("no replay fixture for key " + key + " (model " + model + ")"), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
};

/// FNV-1a 64 over the model name and every message, as 16 hex digits.
std::string replay_key(const std::string& model, const std::vector<Message>& messages);

struct ReplayEntry {
  std::string key;
  std::string response;
  std::optional<std::size_t> input_tokens;
  std::optional<std::size_t> output_tokens;
};

/// Answers from a JSON-lines fixture of {key_hash, response_text,
/// input_tokens, output_tokens}. Repeated keys are answered in file order
/// and the last answer repeats once the queue is drained.
class ReplayBackend final : public LlmBackend {
 public:
  explicit ReplayBackend(const std::vector<ReplayEntry>& entries);
  static ReplayBackend from_file(const std::filesystem::path& path);
  static std::vector<ReplayEntry> read_entries(const std::filesystem::path& path);

  ChatResponse complete(const ChatRequest& request) override;

 private:
  struct Queue {
    std::vector<ReplayEntry> entries;
    std::size_t next = 0;
  };
  std::map<std::string, Queue> queues_;
};

/// Appends every exchange of `inner` to a fixture file.
class RecordingBackend final : public LlmBackend {
 public:
  RecordingBackend(LlmBackend& inner, std::filesystem::path path)
      : inner_(inner), path_(std::move(path)) {}
  ChatResponse complete(const ChatRequest& request) override;

 private:
  LlmBackend& inner_;
  std::filesystem::path path_;
};

/// Answers with a callback; for tests and simulations.
class ScriptedBackend final : public LlmBackend {
 public:
  using Script = std::function<ChatResponse(const ChatRequest&)>;
  explicit ScriptedBackend(Script script) : script_(std::move(script)) {}
  /// Replies with `answers` in order, repeating the last one.
  static ScriptedBackend sequence(std::vector<std::string> answers);
  ChatResponse complete(const ChatRequest& request) override { return script_(request); }

 private:
  Script script_;
};

struct HttpBackendConfig {
  /// Base URL, e.g. "https://api.example.com".
  std::string endpoint;
  std::string path = "/v1/chat/completions";
  /// Name of the environment variable holding the API key; no key if empty.
  std::string api_key_env;
  double temperature = 0.2;
};

/// Single-turn JSON chat-completion client.
class HttpBackend final : public LlmBackend {
 public:
  explicit HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {}
  ChatResponse complete(const ChatRequest& request) override;

  /// Request body and response parsing, exposed for testing.
  static std::string request_body(const ChatRequest& request, double temperature);
  static ChatResponse parse_response(const std::string& body);

 private:
  HttpBackendConfig config_;
};

// ---- repair loop ----------------------------------------------------------

inline constexpr std::size_t kMaxAttempts = 16;

struct LlmSlice {
  double time = 100.0;     // seconds
  double cost = 100000.0;  // cost units
};

struct LlmOptions {
  std::size_t max_attempts = kMaxAttempts;
  /// Treat replay gaps as an unsolved outcome instead of an error.
  bool tolerant_replay = false;
};

struct LlmOutcome {
  bool solved = false;
  std::optional<Candidate> candidate;
  VerificationResult verdict;
  double time = 0;
  double cost = 0;
  /// Requests sent; both stages of the Lisp flow count.
  std::size_t attempts = 0;
  ChatTranscript transcript;
  std::string reason;
};

/// Feedback sent after a candidate fails verification.
std::string counterexample_feedback(const SynthQuery& query, const Candidate& cand,
                                    const Assignment& counterexample);

inline constexpr std::string_view kExtractionFeedback =
    "Your previous answer did not contain a function definition. Reply with exactly one "
    "function definition starting with `(define-fun`.";

/// Up to max_attempts requests: prompt, extract, verify, and on failure send
/// the verifier's feedback. Stops at a verified candidate, the attempt bound,
/// the time slice or the cost slice. Requests whose prompt alone would exceed
/// the cost slice are not sent; responses are capped to the remaining cost.
LlmOutcome solve_with_llm(const SynthQuery& query, std::string_view query_text,
                          const SolverId& solver, const LlmSlice& slice, LlmBackend& backend,
                          Verifier& verifier, const std::vector<FewShotExample>& pool,
                          const LlmOptions& options = {});

}  // namespace synthsel
