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

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "synthsel/error.hpp"
#include "synthsel/evaluate.hpp"
#include "synthsel/query.hpp"

namespace synthsel {

using Clock = std::chrono::steady_clock;

/// Outcome of checking whether exists x. not phi(f) is satisfiable.
struct VerificationResult {
  enum class Kind { Valid, Counterexample, Unknown };

  Kind kind = Kind::Unknown;
  /// Valid only up to the internal search bound, not proven.
  bool bounded = false;
  /// Which checker produced the verdict ("internal", "external", ...).
  std::string verifier;
  Assignment counterexample;
  std::string reason;

  static VerificationResult valid(std::string verifier, bool bounded);
  static VerificationResult falsified(std::string verifier, Assignment cex);
  static VerificationResult unknown(std::string verifier, std::string reason);

  bool is_valid() const { return kind == Kind::Valid; }
  bool is_counterexample() const { return kind == Kind::Counterexample; }
};

std::string to_string(const VerificationResult& result);

struct CheckConfig {
  /// Grid [-grid_bound, grid_bound]^n, used exhaustively when n <= grid_max_vars.
  std::int64_t grid_bound = 32;
  std::size_t grid_max_vars = 3;
  /// Above grid_max_vars the grid shrinks to keep at most this many points.
  std::size_t grid_point_cap = 274625;  // 65^3
  std::size_t samples = 10000;
  std::int64_t sample_bound = 1000000;
  std::uint64_t seed = 0x5eed;
};

/// Searches for a falsifying assignment: the grid in order of increasing
/// magnitude (0, 1, -1, 2, -2, ...), then seeded random samples. Valid
/// verdicts are bounded. Points where phi(f) divides by zero are skipped; if
/// any were skipped and no counterexample exists the verdict is Unknown.
VerificationResult check_candidate_internal(const SynthQuery& query, const Candidate& cand,
                                            const CheckConfig& config = {});

/// True when every constraint holds at `point` (exact evaluation).
/// Throws DivisionByZero like evaluate().
bool satisfies(const SynthQuery& query, const Candidate& cand, const Assignment& point);

/// SMT-LIB2 script asserting not phi(f) with the universal variables as
/// constants.
std::string emit_smtlib(const SynthQuery& query, const Candidate& cand);

/// The external solver could not be started.
class LaunchError : public Error {
 public:
  using Error::Error;
};

/// Runs `command` (whitespace-separated argv, e.g. "z3 -in") on the emitted
/// script. sat becomes a Counterexample (re-checked by evaluation), unsat
/// becomes Valid, anything else Unknown. The child is killed at `deadline`.
/// Throws LaunchError when the executable cannot be started.
VerificationResult check_candidate_external(const SynthQuery& query, const Candidate& cand,
                                            const std::string& command,
                                            Clock::time_point deadline);

/// Parses solver output into a verdict. Exposed for testing.
VerificationResult parse_solver_output(const SynthQuery& query, const Candidate& cand,
                                       const std::string& output);

class Verifier {
 public:
  virtual ~Verifier() = default;
  virtual VerificationResult check(const SynthQuery& query, const Candidate& cand,
                                   Clock::time_point deadline) = 0;
};

class InternalVerifier final : public Verifier {
 public:
  explicit InternalVerifier(CheckConfig config = {}) : config_(config) {}
  VerificationResult check(const SynthQuery& query, const Candidate& cand,
                           Clock::time_point deadline) override;

 private:
  CheckConfig config_;
};

class ExternalVerifier final : public Verifier {
 public:
  explicit ExternalVerifier(std::string command) : command_(std::move(command)) {}
  VerificationResult check(const SynthQuery& query, const Candidate& cand,
                           Clock::time_point deadline) override;

 private:
  std::string command_;
};

/// Internal check first; a bounded Valid is confirmed externally when a
/// command is configured. If the external solver cannot be launched the
/// internal verdict stands and the reason records the failure.
class PolicyVerifier final : public Verifier {
 public:
  PolicyVerifier(CheckConfig config, std::string command)
      : internal_(config), command_(std::move(command)) {}
  VerificationResult check(const SynthQuery& query, const Candidate& cand,
                           Clock::time_point deadline) override;

 private:
  InternalVerifier internal_;
  std::string command_;
};

std::unique_ptr<Verifier> make_verifier(const CheckConfig& config,
                                        const std::string& smt_command);

}  // namespace synthsel
