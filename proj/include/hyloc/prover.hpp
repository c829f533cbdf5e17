#pragma once

// Dispatch of encoded tasks to external first-order provers speaking TPTP and
// SZS, and assembly of final verdicts together with the internal bounded
// countermodel search.
//
// Registry files hold blank-line separated blocks of `key = value` lines:
//
//   id = eprover
//   path = /usr/bin/eprover
//   args = --auto --tstp-format -s {file}
//   timeout = 30
//
// `{file}` is replaced by the problem path; when absent the path is appended.
// `#` starts a comment line.

#include <atomic>
#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyloc/countermodel.hpp"
#include "hyloc/encoder.hpp"
#include "hyloc/hybrid.hpp"

namespace hyloc {

enum class ProofStatus { Proved, CounterSatisfiable, Timeout, Unknown, ProverError };

std::string_view to_string(ProofStatus s);

enum class ProverFailure { None, ExecutableNotFound, LaunchFailed, Crashed, NoVerdict, Conflict };

std::string_view to_string(ProverFailure f);

struct ProverConfig {
  std::string id;
  std::string path;
  std::vector<std::string> args{"{file}"};
  double timeout_seconds = 30.0;
};

struct ProverRegistry {
  std::vector<ProverConfig> provers;

  const ProverConfig* find(std::string_view id) const;
  // First entry whose executable can be found.
  const ProverConfig* first_available() const;
};

// Throws Error with a line number on malformed input.
ProverRegistry parse_registry(std::string_view text);
ProverRegistry load_registry(const std::string& path);

// Resolves `path` against PATH when it has no slash; empty when not found or
// not executable.
std::string find_executable(const std::string& path);

struct ProcessResult {
  bool launched = false;
  bool timed_out = false;
  bool cancelled = false;
  int exit_code = -1;      // -1 when killed by a signal
  int signal = 0;
  std::string output;      // stdout and stderr interleaved
  double seconds = 0.0;
};

// Runs `argv` with a wall-clock limit, killing the whole process group on
// expiry or cancellation.
ProcessResult run_process(const std::vector<std::string>& argv, double timeout_seconds,
                          const std::atomic<bool>* cancel = nullptr);

// Status word of the last `SZS status <Word>` line, if any.
std::optional<std::string> parse_szs(std::string_view output);
ProofStatus status_from_szs(std::string_view word);

struct ProverVerdict {
  ProofStatus status = ProofStatus::Unknown;
  ProverFailure failure = ProverFailure::None;
  std::string provenance;     // prover id, or the search bounds
  double seconds = 0.0;
  std::string szs;            // raw SZS word when one was printed
  std::string excerpt;        // tail of the prover output or a diagnostic
  std::optional<Countermodel> countermodel;
};

// Writes the task to a temporary TPTP file and runs the prover on it.
ProverVerdict run_prover(const EncodedTask& task, const ProverConfig& cfg,
                         const std::atomic<bool>* cancel = nullptr);

enum class Strategy { External, Bounded, Both };

bool parse_strategy(std::string_view text, Strategy& out);

struct ProveOptions {
  Strategy strategy = Strategy::Both;
  std::optional<ProverConfig> prover;  // required unless strategy is Bounded
  SearchBounds bounds;
  // Run both strategies at once under `Both`, cancelling the slower one when
  // the other returns a definitive answer.
  bool parallel = false;
};

// External Proved and internal CounterSatisfiable both win under `Both`; if
// both occur the verdict is ProverError with failure Conflict. Bounded search
// alone never proves anything.
ProverVerdict prove_goal(const HybridTheory& theory, const Sentence& goal, const ProveOptions& options);

}  // namespace hyloc
