#include "hyloc/prover.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <future>
#include <regex>
#include <sstream>

#include <fmt/format.h>

#include "hyloc/error.hpp"

namespace hyloc {

namespace {

using Clock = std::chrono::steady_clock;

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_args(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string word;
  while (is >> word) out.push_back(word);
  return out;
}

std::string tail(const std::string& s, std::size_t lines) {
  std::size_t pos = s.size();
  while (lines > 0 && pos > 0) {
    pos = s.rfind('\n', pos - 1);
    if (pos == std::string::npos) return s;
    --lines;
  }
  return s.substr(pos == 0 ? 0 : pos + 1);
}

double elapsed(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

}  // namespace

std::string_view to_string(ProofStatus s) {
  switch (s) {
    case ProofStatus::Proved: return "Proved";
    case ProofStatus::CounterSatisfiable: return "CounterSatisfiable";
    case ProofStatus::Timeout: return "Timeout";
    case ProofStatus::Unknown: return "Unknown";
    case ProofStatus::ProverError: return "ProverError";
  }
  return "?";
}

std::string_view to_string(ProverFailure f) {
  switch (f) {
    case ProverFailure::None: return "none";
    case ProverFailure::ExecutableNotFound: return "executable not found";
    case ProverFailure::LaunchFailed: return "launch failed";
    case ProverFailure::Crashed: return "prover crashed";
    case ProverFailure::NoVerdict: return "no SZS verdict";
    case ProverFailure::Conflict: return "conflicting verdicts";
  }
  return "?";
}

const ProverConfig* ProverRegistry::find(std::string_view id) const {
  for (const auto& p : provers)
    if (p.id == id) return &p;
  return nullptr;
}

const ProverConfig* ProverRegistry::first_available() const {
  for (const auto& p : provers)
    if (!find_executable(p.path).empty()) return &p;
  return nullptr;
}

ProverRegistry parse_registry(std::string_view text) {
  ProverRegistry reg;
  std::optional<ProverConfig> cur;
  int line_no = 0;
  auto flush = [&] {
    if (!cur) return;
    if (cur->id.empty()) throw Error(fmt::format("registry entry ending at line {} has no id", line_no));
    if (cur->path.empty()) throw Error(fmt::format("prover '{}' has no path", cur->id));
    if (reg.find(cur->id)) throw Error(fmt::format("prover '{}' registered twice", cur->id));
    reg.provers.push_back(std::move(*cur));
    cur.reset();
  };
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(fmt::format("registry line {}: expected key = value", line_no));
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!cur) cur.emplace();
    if (key == "id") {
      cur->id = value;
    } else if (key == "path") {
      cur->path = value;
    } else if (key == "args") {
      cur->args = split_args(value);
    } else if (key == "timeout") {
      char* end = nullptr;
      double t = std::strtod(value.c_str(), &end);
      if (end == value.c_str() || *end != '\0' || !(t > 0))
        throw Error(fmt::format("registry line {}: timeout must be a positive number", line_no));
      cur->timeout_seconds = t;
    } else {
      throw Error(fmt::format("registry line {}: unknown key '{}'", line_no, key));
    }
  }
  flush();
  return reg;
}

ProverRegistry load_registry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot read prover registry '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_registry(ss.str());
}

std::string find_executable(const std::string& path) {
  auto usable = [](const std::string& p) {
    struct stat st {};
    return ::stat(p.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(p.c_str(), X_OK) == 0;
  };
  if (path.empty()) return {};
  if (path.find('/') != std::string::npos) return usable(path) ? path : std::string{};
  const char* env = std::getenv("PATH");
  std::istringstream dirs(env ? env : "/usr/local/bin:/usr/bin:/bin");
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) continue;
    std::string candidate = dir + "/" + path;
    if (usable(candidate)) return candidate;
  }
  return {};
}

ProcessResult run_process(const std::vector<std::string>& argv, double timeout_seconds,
                          const std::atomic<bool>* cancel) {
  ProcessResult result;
  if (argv.empty()) return result;
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) return result;
  const auto start = Clock::now();
  pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    return result;
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(fds[1], STDOUT_FILENO);
    ::dup2(fds[1], STDERR_FILENO);
    int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    ::execv(args[0], args.data());
    _exit(127);
  }
  ::setpgid(pid, pid);
  ::close(fds[1]);
  result.launched = true;

  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                    std::chrono::duration<double>(timeout_seconds));
  bool open = true;
  char buf[4096];
  while (open) {
    if (cancel && cancel->load()) {
      result.cancelled = true;
      break;
    }
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    if (left <= 0) {
      result.timed_out = true;
      break;
    }
    pollfd pfd{fds[0], POLLIN, 0};
    int r = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left, 50)));
    if (r < 0 && errno != EINTR) break;
    if (r <= 0) continue;
    ssize_t n = ::read(fds[0], buf, sizeof buf);
    if (n > 0) result.output.append(buf, static_cast<std::size_t>(n));
    else if (n == 0 || errno != EINTR) open = false;
  }
  if (result.timed_out || result.cancelled) ::kill(-pid, SIGKILL);
  ::close(fds[0]);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.signal = WTERMSIG(status);
  }
  result.seconds = elapsed(start);
  return result;
}

std::optional<std::string> parse_szs(std::string_view output) {
  static const std::regex re(R"(SZS status\s+([A-Za-z]+))");
  std::optional<std::string> last;
  std::string text(output);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it)
    last = (*it)[1].str();
  return last;
}

ProofStatus status_from_szs(std::string_view word) {
  if (word == "Theorem" || word == "Unsatisfiable")
    return ProofStatus::Proved;
  if (word == "CounterSatisfiable" || word == "Satisfiable" || word == "CounterTheorem")
    return ProofStatus::CounterSatisfiable;
  if (word == "Timeout" || word == "ResourceOut") return ProofStatus::Timeout;
  if (word == "Error" || word == "InputError" || word == "SyntaxError" || word == "OSError")
    return ProofStatus::ProverError;
  return ProofStatus::Unknown;
}

ProverVerdict run_prover(const EncodedTask& task, const ProverConfig& cfg, const std::atomic<bool>* cancel) {
  ProverVerdict v;
  v.provenance = cfg.id;
  const std::string exe = find_executable(cfg.path);
  if (exe.empty()) {
    v.status = ProofStatus::ProverError;
    v.failure = ProverFailure::ExecutableNotFound;
    v.excerpt = fmt::format("prover '{}': executable '{}' not found", cfg.id, cfg.path);
    return v;
  }
  const std::string text = emit_tptp(task);

  namespace fs = std::filesystem;
  std::string pattern = (fs::temp_directory_path() / "hyloc-XXXXXX.p").string();
  std::vector<char> name(pattern.begin(), pattern.end());
  name.push_back('\0');
  int fd = ::mkstemps(name.data(), 2);
  if (fd < 0) {
    v.status = ProofStatus::ProverError;
    v.failure = ProverFailure::LaunchFailed;
    v.excerpt = "cannot create a temporary problem file";
    return v;
  }
  const std::string file(name.data());
  {
    std::size_t off = 0;
    while (off < text.size()) {
      ssize_t n = ::write(fd, text.data() + off, text.size() - off);
      if (n <= 0) break;
      off += static_cast<std::size_t>(n);
    }
    ::close(fd);
  }

  std::vector<std::string> argv{exe};
  bool placed = false;
  for (const auto& a : cfg.args) {
    auto at = a.find("{file}");
    if (at == std::string::npos) {
      argv.push_back(a);
    } else {
      argv.push_back(a.substr(0, at) + file + a.substr(at + 6));
      placed = true;
    }
  }
  if (!placed) argv.push_back(file);

  ProcessResult pr = run_process(argv, cfg.timeout_seconds, cancel);
  std::error_code ec;
  fs::remove(file, ec);

  v.seconds = pr.seconds;
  v.excerpt = tail(pr.output, 5);
  if (!pr.launched) {
    v.status = ProofStatus::ProverError;
    v.failure = ProverFailure::LaunchFailed;
    v.excerpt = fmt::format("prover '{}' could not be started", cfg.id);
    return v;
  }
  if (pr.timed_out || pr.cancelled) {
    v.status = ProofStatus::Timeout;
    return v;
  }
  if (pr.exit_code == 127 && pr.output.empty()) {
    v.status = ProofStatus::ProverError;
    v.failure = ProverFailure::LaunchFailed;
    return v;
  }
  auto szs = parse_szs(pr.output);
  if (szs) {
    v.szs = *szs;
    v.status = status_from_szs(*szs);
    return v;
  }
  v.status = pr.exit_code == 0 ? ProofStatus::Unknown : ProofStatus::ProverError;
  v.failure = pr.exit_code == 0 ? ProverFailure::NoVerdict : ProverFailure::Crashed;
  return v;
}

bool parse_strategy(std::string_view text, Strategy& out) {
  if (text == "external") out = Strategy::External;
  else if (text == "bounded") out = Strategy::Bounded;
  else if (text == "both") out = Strategy::Both;
  else return false;
  return true;
}

namespace {

std::string bounds_provenance(const SearchBounds& b) {
  return fmt::format("bounded(worlds={},carrier={})", b.max_worlds, b.max_carrier);
}

ProverVerdict bounded(const HybridTheory& th, const Sentence& goal, SearchBounds bounds,
                      const std::atomic<bool>* cancel) {
  ProverVerdict v;
  v.provenance = bounds_provenance(bounds);
  bounds.cancel = cancel;
  const auto start = Clock::now();
  auto hit = find_countermodel(th.signature, th.constraints, th.axioms, goal, bounds);
  v.seconds = elapsed(start);
  if (hit) {
    v.status = ProofStatus::CounterSatisfiable;
    v.excerpt = fmt::format("countermodel with {} world(s), goal fails at {}", hit->model.world_count(),
                            hit->model.worlds[static_cast<std::size_t>(hit->world)]);
    v.countermodel = std::move(hit);
  } else {
    v.status = ProofStatus::Unknown;
    v.excerpt = "no countermodel within bounds";
  }
  return v;
}

ProverVerdict external(const HybridTheory& th, const Sentence& goal, const std::optional<ProverConfig>& cfg,
                       const std::atomic<bool>* cancel) {
  if (!cfg) {
    ProverVerdict v;
    v.status = ProofStatus::ProverError;
    v.failure = ProverFailure::ExecutableNotFound;
    v.excerpt = "no external prover configured";
    return v;
  }
  return run_prover(encode_task(th, goal), *cfg, cancel);
}

ProverVerdict combine(ProverVerdict ext, ProverVerdict in) {
  const bool proved = ext.status == ProofStatus::Proved;
  const bool refuted = in.status == ProofStatus::CounterSatisfiable;
  if (proved && refuted) {
    ProverVerdict v;
    v.status = ProofStatus::ProverError;
    v.failure = ProverFailure::Conflict;
    v.provenance = ext.provenance + "+" + in.provenance;
    v.seconds = ext.seconds + in.seconds;
    v.excerpt = fmt::format("{} reports Proved but a countermodel exists within {}", ext.provenance,
                            in.provenance);
    v.countermodel = std::move(in.countermodel);
    return v;
  }
  if (proved) return ext;
  if (refuted) return in;
  // External CounterSatisfiable is also definitive.
  if (ext.status == ProofStatus::CounterSatisfiable) return ext;
  if (ext.status == ProofStatus::Timeout) return ext;
  if (ext.status == ProofStatus::ProverError) {
    in.excerpt = fmt::format("{}; external: {}", in.excerpt, ext.excerpt);
    return in;
  }
  return in;
}

}  // namespace

ProverVerdict prove_goal(const HybridTheory& theory, const Sentence& goal, const ProveOptions& options) {
  switch (options.strategy) {
    case Strategy::External:
      return external(theory, goal, options.prover, nullptr);
    case Strategy::Bounded:
      return bounded(theory, goal, options.bounds, nullptr);
    case Strategy::Both:
      break;
  }
  if (!options.parallel) {
    ProverVerdict ext = external(theory, goal, options.prover, nullptr);
    ProverVerdict in = bounded(theory, goal, options.bounds, nullptr);
    return combine(std::move(ext), std::move(in));
  }
  std::atomic<bool> stop_external{false};
  std::atomic<bool> stop_internal{false};
  auto ext_future = std::async(std::launch::async, [&] {
    auto v = external(theory, goal, options.prover, &stop_external);
    if (v.status == ProofStatus::Proved) stop_internal = true;
    return v;
  });
  ProverVerdict in = bounded(theory, goal, options.bounds, &stop_internal);
  if (in.status == ProofStatus::CounterSatisfiable) stop_external = true;
  ProverVerdict ext = ext_future.get();
  if (ext.status == ProofStatus::Timeout && stop_external) ext.excerpt = "cancelled after internal verdict";
  return combine(std::move(ext), std::move(in));
}

}  // namespace hyloc
