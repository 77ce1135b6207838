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

#include "synthsel/verify.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "synthsel/fast_eval.hpp"

namespace synthsel {

VerificationResult VerificationResult::valid(std::string verifier, bool bounded) {
  VerificationResult r;
  r.kind = Kind::Valid;
  r.bounded = bounded;
  r.verifier = std::move(verifier);
  return r;
}

VerificationResult VerificationResult::falsified(std::string verifier, Assignment cex) {
  VerificationResult r;
  r.kind = Kind::Counterexample;
  r.verifier = std::move(verifier);
  r.counterexample = std::move(cex);
  return r;
}

VerificationResult VerificationResult::unknown(std::string verifier, std::string reason) {
  VerificationResult r;
  r.kind = Kind::Unknown;
  r.verifier = std::move(verifier);
  r.reason = std::move(reason);
  return r;
}

std::string to_string(const VerificationResult& r) {
  switch (r.kind) {
    case VerificationResult::Kind::Valid:
      return r.bounded ? "valid (bounded, " + r.verifier + ")" : "valid (" + r.verifier + ")";
    case VerificationResult::Kind::Counterexample:
      return "counterexample {" + to_string(r.counterexample) + "}";
    case VerificationResult::Kind::Unknown:
      return "unknown (" + r.reason + ")";
  }
  return "unknown";
}

bool satisfies(const SynthQuery& query, const Candidate& cand, const Assignment& point) {
  for (const auto& c : query.constraints) {
    if (!std::get<bool>(evaluate(c, point, query.fun.name, cand))) return false;
  }
  return true;
}

namespace {

/// i-th value of the sequence 0, 1, -1, 2, -2, ...
std::int64_t zigzag(std::int64_t i) { return (i % 2 == 1) ? (i + 1) / 2 : -(i / 2); }

fast::Val grid_value(const Sort& sort, std::int64_t index) {
  if (sort.is_bool()) return fast::known(index);
  const std::int64_t z = zigzag(index);
  if (sort.is_bitvec()) {
    return fast::known(static_cast<std::int64_t>(static_cast<std::uint64_t>(z) &
                                                 BitVec::mask(sort.width)));
  }
  return fast::known(z);
}

/// Number of grid indices for a variable of `sort` under `bound`.
std::int64_t grid_size(const Sort& sort, std::int64_t bound) {
  if (sort.is_bool()) return 2;
  std::int64_t n = 2 * bound + 1;
  if (sort.is_bitvec() && sort.width < 62) {
    n = std::min<std::int64_t>(n, std::int64_t{1} << sort.width);
  }
  return n;
}

class PointChecker {
 public:
  PointChecker(const SynthQuery& q, const Candidate& c)
      : query_(q), phi_(substitute_solution(q, c)) {
    for (const auto& v : q.variables) names_.push_back(v.name);
    program_ = fast::compile(phi_, names_);
  }

  /// Returns true when `env` is a confirmed counterexample.
  bool falsifies(const std::vector<fast::Val>& env) {
    const fast::Val r = fast::run(program_, env.data());
    if (r.known()) {
      if (r.v != 0) return false;
      // Confirm with the exact evaluator before reporting.
      return exact_false(env);
    }
    return exact_false(env);
  }

  Assignment assignment(const std::vector<fast::Val>& env) const {
    Assignment a;
    for (std::size_t i = 0; i < names_.size(); ++i) {
      a[names_[i]] = fast::to_value(env[i], query_.variables[i].sort);
    }
    return a;
  }

  bool skipped_division() const { return skipped_division_; }

 private:
  bool exact_false(const std::vector<fast::Val>& env) {
    try {
      return !std::get<bool>(evaluate(phi_, assignment(env)));
    } catch (const DivisionByZero&) {
      skipped_division_ = true;
      return false;
    }
  }

  const SynthQuery& query_;
  Term phi_;
  std::vector<std::string> names_;
  fast::Program program_;
  bool skipped_division_ = false;
};

}  // namespace

VerificationResult check_candidate_internal(const SynthQuery& query, const Candidate& cand,
                                            const CheckConfig& config) {
  static const std::string kName = "internal";
  std::unique_ptr<PointChecker> checker;
  try {
    checker = std::make_unique<PointChecker>(query, cand);
  } catch (const SortError& e) {
    return VerificationResult::unknown(kName, e.what());
  } catch (const EvalError& e) {
    return VerificationResult::unknown(kName, e.what());
  }
  const std::size_t n = query.variables.size();
  std::vector<fast::Val> env(n);

  // Grid phase, shell by shell so that small counterexamples come first.
  std::int64_t bound = config.grid_bound;
  if (n > config.grid_max_vars && n > 0) {
    const double side = std::pow(static_cast<double>(config.grid_point_cap), 1.0 / n);
    bound = std::min(bound, static_cast<std::int64_t>((side - 1) / 2));
  }
  if (n == 0) {
    if (checker->falsifies(env)) return VerificationResult::falsified(kName, {});
  } else if (bound >= 0) {
    std::vector<std::int64_t> size(n);
    std::int64_t max_index = 0;
    for (std::size_t i = 0; i < n; ++i) {
      size[i] = grid_size(query.variables[i].sort, bound);
      max_index = std::max(max_index, size[i] - 1);
    }
    std::vector<std::int64_t> idx(n);
    for (std::int64_t shell = 0; shell <= max_index; ++shell) {
      std::fill(idx.begin(), idx.end(), 0);
      while (true) {
        const bool on_shell =
            std::any_of(idx.begin(), idx.end(), [&](std::int64_t v) { return v == shell; });
        if (on_shell) {
          for (std::size_t i = 0; i < n; ++i) {
            env[i] = grid_value(query.variables[i].sort, idx[i]);
          }
          if (checker->falsifies(env)) {
            return VerificationResult::falsified(kName, checker->assignment(env));
          }
        }
        std::size_t k = n;
        while (k-- > 0) {
          if (++idx[k] <= std::min(shell, size[k] - 1)) break;
          idx[k] = 0;
        }
        if (k == static_cast<std::size_t>(-1)) break;
      }
    }
  }

  // Random phase.
  if (n > 0) {
    std::mt19937_64 rng(config.seed);
    std::uniform_int_distribution<std::int64_t> wide(-config.sample_bound, config.sample_bound);
    for (std::size_t s = 0; s < config.samples; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        const Sort& sort = query.variables[i].sort;
        if (sort.is_bool()) {
          env[i] = fast::known(static_cast<std::int64_t>(rng() & 1U));
        } else if (sort.is_bitvec()) {
          env[i] = fast::known(static_cast<std::int64_t>(rng() & BitVec::mask(sort.width)));
        } else {
          env[i] = fast::known(wide(rng));
        }
      }
      if (checker->falsifies(env)) {
        return VerificationResult::falsified(kName, checker->assignment(env));
      }
    }
  }
  if (checker->skipped_division()) {
    return VerificationResult::unknown(kName, "division by zero on sampled inputs");
  }
  return VerificationResult::valid(kName, true);
}

std::string emit_smtlib(const SynthQuery& query, const Candidate& cand) {
  const Candidate named =
      Candidate::make(query.fun.name, cand.params(), cand.result(), cand.body());
  if (!named.matches(query.fun)) {
    throw SortError("candidate signature does not match synth-fun '" + query.fun.name + "'");
  }
  std::string out = "(set-logic ALL)\n";
  for (const auto& v : query.variables) {
    out += "(declare-const " + print_term(Term::var(v.name, v.sort)) + " " +
           to_string(v.sort) + ")\n";
  }
  out += print_define_fun(named) + "\n";
  out += "(assert (not " + print_term(conjunction(query.constraints)) + "))\n";
  out += "(check-sat)\n(get-model)\n";
  return out;
}

namespace {

Value default_value(const Sort& s) {
  if (s.is_bool()) return false;
  if (s.is_bitvec()) return BitVec::make(0, s.width);
  return Integer(0);
}

void collect_model(const SExpr& e, std::map<std::string, const SExpr*>& defs) {
  if (!e.is_list()) return;
  if (e.items.size() == 5 && e.items[0].is_symbol("define-fun") && e.items[1].is_atom() &&
      e.items[2].is_list() && e.items[2].items.empty()) {
    defs[e.items[1].atom] = &e.items[4];
    return;
  }
  for (const auto& item : e.items) collect_model(item, defs);
}

}  // namespace

VerificationResult parse_solver_output(const SynthQuery& query, const Candidate& cand,
                                       const std::string& output) {
  static const std::string kName = "external";
  std::istringstream in(output);
  std::string verdict;
  in >> verdict;
  if (verdict == "unsat") return VerificationResult::valid(kName, false);
  if (verdict == "unknown" || verdict == "timeout") {
    return VerificationResult::unknown(kName, "solver returned " + verdict);
  }
  if (verdict != "sat") {
    return VerificationResult::unknown(kName, "malformed solver output: '" +
                                                  output.substr(0, 200) + "'");
  }
  const std::string rest = output.substr(static_cast<std::size_t>(in.tellg()));
  Assignment cex;
  try {
    const auto doc = read_sexprs(rest);
    std::map<std::string, const SExpr*> defs;
    for (const auto& item : doc.items) collect_model(item, defs);
    for (const auto& v : query.variables) {
      const auto it = defs.find(v.name);
      cex[v.name] = it == defs.end() ? default_value(v.sort) : parse_value(*it->second);
    }
  } catch (const Error& e) {
    return VerificationResult::unknown(kName, std::string("malformed model: ") + e.what());
  }
  try {
    if (satisfies(query, cand, cex)) {
      return VerificationResult::unknown(kName, "model does not falsify the specification");
    }
  } catch (const Error& e) {
    return VerificationResult::unknown(kName, std::string("model not checkable: ") + e.what());
  }
  return VerificationResult::falsified(kName, std::move(cex));
}

namespace {

struct Fd {
  int fd = -1;
  Fd() = default;
  explicit Fd(int f) : fd(f) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() { reset(); }
  void reset() {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
};

std::vector<std::string> split_command(const std::string& command) {
  std::istringstream in(command);
  std::vector<std::string> argv;
  std::string word;
  while (in >> word) argv.push_back(word);
  return argv;
}

int remaining_ms(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
  return static_cast<int>(std::max<std::int64_t>(0, left.count()));
}

}  // namespace

VerificationResult check_candidate_external(const SynthQuery& query, const Candidate& cand,
                                            const std::string& command,
                                            Clock::time_point deadline) {
  const std::vector<std::string> args = split_command(command);
  if (args.empty()) throw LaunchError("empty solver command");
  const std::string script = emit_smtlib(query, cand);

  int in_pipe[2];
  int out_pipe[2];
  int err_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0 || ::pipe2(out_pipe, O_CLOEXEC) != 0 ||
      ::pipe2(err_pipe, O_CLOEXEC) != 0) {
    throw LaunchError(std::string("pipe: ") + std::strerror(errno));
  }
  Fd child_in(in_pipe[1]);
  Fd child_out(out_pipe[0]);
  Fd exec_err(err_pipe[0]);
  Fd in_read(in_pipe[0]);
  Fd out_write(out_pipe[1]);
  Fd err_write(err_pipe[1]);

  const pid_t pid = ::fork();
  if (pid < 0) throw LaunchError(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::dup2(in_read.fd, STDIN_FILENO);
    ::dup2(out_write.fd, STDOUT_FILENO);
    const int devnull = ::open("/dev/null", O_WRONLY);
    if (devnull >= 0) ::dup2(devnull, STDERR_FILENO);
    std::vector<char*> argv;
    for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    ::execvp(argv[0], argv.data());
    const int code = errno;
    [[maybe_unused]] auto n = ::write(err_write.fd, &code, sizeof code);
    ::_exit(127);
  }
  in_read.reset();
  out_write.reset();
  err_write.reset();

  int exec_errno = 0;
  if (::read(exec_err.fd, &exec_errno, sizeof exec_errno) == sizeof exec_errno) {
    ::waitpid(pid, nullptr, 0);
    throw LaunchError("cannot start '" + args[0] + "': " + std::strerror(exec_errno));
  }

  ::signal(SIGPIPE, SIG_IGN);
  std::size_t written = 0;
  std::string output;
  bool timed_out = false;
  ::fcntl(child_in.fd, F_SETFL, O_NONBLOCK);
  char buf[4096];
  while (true) {
    const int wait = remaining_ms(deadline);
    if (wait == 0) {
      timed_out = true;
      break;
    }
    pollfd fds[2];
    nfds_t count = 0;
    fds[count++] = {child_out.fd, POLLIN, 0};
    if (child_in.fd >= 0) fds[count++] = {child_in.fd, POLLOUT, 0};
    const int rc = ::poll(fds, count, wait);
    if (rc < 0 && errno == EINTR) continue;
    if (rc < 0) break;
    if (count == 2 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP)) != 0) {
      const ssize_t n = ::write(child_in.fd, script.data() + written, script.size() - written);
      if (n > 0) written += static_cast<std::size_t>(n);
      if (n < 0 && errno != EAGAIN) written = script.size();
      if (written == script.size()) child_in.reset();
    }
    if ((fds[0].revents & (POLLIN | POLLHUP | POLLERR)) != 0) {
      const ssize_t n = ::read(child_out.fd, buf, sizeof buf);
      if (n <= 0) break;
      output.append(buf, static_cast<std::size_t>(n));
    }
  }
  if (timed_out) ::kill(pid, SIGKILL);
  child_in.reset();
  child_out.reset();
  int status = 0;
  ::waitpid(pid, &status, 0);
  if (timed_out) return VerificationResult::unknown("external", "deadline exceeded");
  return parse_solver_output(query, cand, output);
}

VerificationResult InternalVerifier::check(const SynthQuery& query, const Candidate& cand,
                                           Clock::time_point) {
  return check_candidate_internal(query, cand, config_);
}

VerificationResult ExternalVerifier::check(const SynthQuery& query, const Candidate& cand,
                                           Clock::time_point deadline) {
  return check_candidate_external(query, cand, command_, deadline);
}

VerificationResult PolicyVerifier::check(const SynthQuery& query, const Candidate& cand,
                                         Clock::time_point deadline) {
  VerificationResult r = internal_.check(query, cand, deadline);
  if (command_.empty() || r.is_counterexample()) return r;
  try {
    return check_candidate_external(query, cand, command_, deadline);
  } catch (const LaunchError& e) {
    r.reason = std::string("external solver unavailable: ") + e.what();
    return r;
  }
}

std::unique_ptr<Verifier> make_verifier(const CheckConfig& config,
                                        const std::string& smt_command) {
  if (smt_command.empty()) return std::make_unique<InternalVerifier>(config);
  return std::make_unique<PolicyVerifier>(config, smt_command);
}

}  // namespace synthsel
