// hyloc: parse, check, encode, prove and refute hybrid specifications.
//
// Exit codes: 0 success/holds, 1 definitive negative (diagnostics, failing
// axiom, counter-satisfiable goal), 2 usage or file error, 3 unknown,
// timeout or prover error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "hyloc/countermodel.hpp"
#include "hyloc/encoder.hpp"
#include "hyloc/error.hpp"
#include "hyloc/prover.hpp"
#include "hyloc/syntax.hpp"

namespace {

using namespace hyloc;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;
constexpr int kUnknown = 3;

struct Exit {
  int code;
};

[[noreturn]] void die(int code, const std::string& message) {
  std::cerr << "hyloc: " << message << "\n";
  throw Exit{code};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die(kUsage, fmt::format("cannot read '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) die(kUsage, fmt::format("cannot write '{}'", path));
}

void print_diagnostics(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) std::cout << d.to_string() << "\n";
}

// Loads the named hlogic spec, or the last one in the file.
HybridTheory load_theory(const std::string& path, const std::string& name) {
  ParseOptions opts;
  opts.file_name = path;
  auto result = parse_spec(read_file(path), opts);
  if (!result.ok()) {
    print_diagnostics(result.diagnostics);
    die(kUsage, fmt::format("'{}' has errors", path));
  }
  if (!name.empty()) {
    if (const HybridTheory* th = result.theory(name)) return *th;
    die(kUsage, fmt::format("no hlogic spec named '{}' in '{}'", name, path));
  }
  if (result.theories.empty()) die(kUsage, fmt::format("no hlogic spec in '{}'", path));
  return result.theories.back();
}

Sentence load_goal(const std::string& text, const HybridTheory& th) {
  ParseOptions opts;
  opts.file_name = "<goal>";
  auto result = parse_sentence(text, th.signature, opts);
  if (!result.sentence) {
    print_diagnostics(result.diagnostics);
    die(kUsage, fmt::format("cannot parse goal '{}'", text));
  }
  return *result.sentence;
}

std::string world_name(const KripkeModel& m, int w) { return m.worlds.at(static_cast<std::size_t>(w)); }

std::string describe(const KripkeModel& m, const Witness& w) {
  std::string out = fmt::format("fails at world {}", world_name(m, w.world));
  if (w.focus != w.world) out += fmt::format(", evaluated at {}", world_name(m, w.focus));
  for (const auto& [name, value] : w.bindings) out += fmt::format(", {}={}", name, value);
  return out;
}

// --- parse -----------------------------------------------------------------

int cmd_parse(const std::vector<std::string>& paths, bool first_error) {
  int code = kOk;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      std::cout << path << ": cannot read file\n";
      code = kUsage;
      continue;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    ParseOptions opts;
    opts.file_name = path;
    opts.first_error_only = first_error;
    auto result = parse_spec(ss.str(), opts);
    if (result.ok()) {
      std::cout << path << ": ok: " << result.file.blocks.size() << " specs, " << result.file.axiom_count()
                << " axioms\n";
      continue;
    }
    print_diagnostics(result.diagnostics);
    std::cout << path << ": " << result.diagnostics.size() << " error(s)\n";
    if (code == kOk) code = kNegative;
  }
  return code;
}

// --- check -----------------------------------------------------------------

int cmd_check(const std::string& spec_path, const std::string& model_path, const std::string& spec_name,
              const std::vector<std::string>& goals) {
  HybridTheory th = load_theory(spec_path, spec_name);
  auto sig = std::make_shared<const HybridSignature>(th.signature);
  ParseOptions opts;
  opts.file_name = model_path;
  auto loaded = parse_model(read_file(model_path), sig, opts);
  if (!loaded.diagnostics.empty() || !loaded.model) {
    print_diagnostics(loaded.diagnostics);
    die(kUsage, fmt::format("'{}' is not a model of spec '{}'", model_path, th.name));
  }
  const KripkeModel& model = *loaded.model;
  std::vector<Sentence> goal_sentences;
  for (const auto& g : goals) goal_sentences.push_back(load_goal(g, th));

  TheoryReport report;
  try {
    report = check_theory(model, th);
  } catch (const SignatureMismatch& e) {
    die(kUsage, e.what());
  }
  // Rigidity problems of the loaded model are reported by the loader too;
  // print each once.
  std::vector<std::string> violations;
  for (const auto& v : loaded.violations) violations.push_back(v.message);
  for (const auto& v : report.violations)
    if (std::find(violations.begin(), violations.end(), v.message) == violations.end())
      violations.push_back(v.message);
  for (const auto& v : violations) std::cout << "violation: " << v << "\n";

  std::size_t holding = 0;
  for (const auto& a : report.axioms) {
    if (a.holds) {
      ++holding;
      std::cout << "axiom " << a.index + 1 << ": holds\n";
    } else {
      std::cout << "axiom " << a.index + 1 << ": " << describe(model, *a.witness) << "\n";
    }
  }
  std::cout << holding << "/" << report.axioms.size() << " axioms hold\n";
  bool goals_hold = true;
  for (std::size_t i = 0; i < goal_sentences.size(); ++i) {
    auto fail = first_failing_world(model, goal_sentences[i]);
    if (!fail) {
      std::cout << "goal " << i + 1 << ": holds\n";
      continue;
    }
    goals_hold = false;
    std::cout << "goal " << i + 1 << ": " << describe(model, explain_failure(model, *fail, goal_sentences[i]))
              << "\n";
  }
  return violations.empty() && holding == report.axioms.size() && goals_hold ? kOk : kNegative;
}

// --- encode ----------------------------------------------------------------

int cmd_encode(const std::string& spec_path, const std::string& spec_name, const std::string& goal,
               const std::string& out, const std::string& dump_sorted) {
  HybridTheory th = load_theory(spec_path, spec_name);
  std::optional<Sentence> g;
  if (!goal.empty()) g = load_goal(goal, th);
  std::string text;
  EncodedTask task;
  try {
    task = encode_task(th, g);
    text = emit_tptp(task);
  } catch (const Error& e) {
    die(kUsage, fmt::format("encoding failed: {}", e.what()));
  }
  if (!dump_sorted.empty()) {
    std::string dump = fol::dump(task.sorted);
    if (task.sorted_goal) dump += "goal " + fol::to_string(*task.sorted_goal) + "\n";
    write_file(dump_sorted, dump);
  }
  if (out.empty()) std::cout << text;
  else write_file(out, text);
  return kOk;
}

// --- prove -----------------------------------------------------------------

struct ProveFlags {
  std::string strategy = "both";
  std::string prover;
  std::string registry;
  double timeout = 0;
  int max_worlds = 2;
  int max_carrier = 1;
  std::string model_out;
  int jobs = 1;
  bool parallel = false;
};

std::string verdict_word(ProofStatus s) {
  switch (s) {
    case ProofStatus::Proved: return "PROVED";
    case ProofStatus::CounterSatisfiable: return "COUNTERSAT";
    case ProofStatus::Timeout:
    case ProofStatus::Unknown: return "UNKNOWN";
    case ProofStatus::ProverError: return "ERROR";
  }
  return "ERROR";
}

int cmd_prove(const std::string& spec_path, const std::string& spec_name, const std::vector<std::string>& goals,
              const ProveFlags& flags) {
  HybridTheory th = load_theory(spec_path, spec_name);
  std::vector<Sentence> sentences;
  for (const auto& g : goals) sentences.push_back(load_goal(g, th));

  ProveOptions options;
  if (!parse_strategy(flags.strategy, options.strategy))
    die(kUsage, fmt::format("unknown strategy '{}'", flags.strategy));
  if (flags.max_worlds < 1 || flags.max_carrier < 1) die(kUsage, "search bounds must be at least 1");
  options.bounds.max_worlds = flags.max_worlds;
  options.bounds.max_carrier = flags.max_carrier;
  options.parallel = flags.parallel;

  std::string setup_error;
  if (options.strategy != Strategy::Bounded) {
    std::string registry_path = flags.registry;
    if (registry_path.empty()) {
      if (const char* env = std::getenv("HYLOC_PROVERS")) registry_path = env;
    }
    if (registry_path.empty()) {
      setup_error = "no prover registry: set HYLOC_PROVERS or pass --provers";
    } else {
      ProverRegistry reg;
      try {
        reg = load_registry(registry_path);
      } catch (const Error& e) {
        die(kUsage, e.what());
      }
      const ProverConfig* cfg = flags.prover.empty() ? reg.first_available() : reg.find(flags.prover);
      if (cfg) options.prover = *cfg;
      else if (!flags.prover.empty()) die(kUsage, fmt::format("prover '{}' is not in the registry", flags.prover));
      else setup_error = "no prover in the registry is installed";
      if (options.prover && flags.timeout > 0) options.prover->timeout_seconds = flags.timeout;
    }
    if (options.strategy == Strategy::External && !setup_error.empty()) {
      std::cerr << "hyloc: " << setup_error << "\n";
      for (std::size_t i = 0; i < sentences.size(); ++i) std::cout << "ERROR none 0.000s\n";
      return kUnknown;
    }
  }

  auto run = [&](const Sentence& goal) {
    try {
      return prove_goal(th, goal, options);
    } catch (const BoundsTooLarge& e) {
      die(kUsage, e.what());
    } catch (const Error& e) {
      ProverVerdict v;
      v.status = ProofStatus::ProverError;
      v.excerpt = e.what();
      return v;
    }
  };
  std::vector<ProverVerdict> verdicts(sentences.size());
  const std::size_t jobs = static_cast<std::size_t>(std::max(1, flags.jobs));
  for (std::size_t start = 0; start < sentences.size(); start += jobs) {
    std::vector<std::future<ProverVerdict>> batch;
    for (std::size_t i = start; i < std::min(sentences.size(), start + jobs); ++i)
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                 [&, i] { return run(sentences[i]); }));
    for (std::size_t k = 0; k < batch.size(); ++k) verdicts[start + k] = batch[k].get();
  }

  bool unknown = false;
  bool negative = false;
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    const ProverVerdict& v = verdicts[i];
    std::string extra;
    if (v.countermodel && !flags.model_out.empty()) {
      std::string path = flags.model_out;
      if (verdicts.size() > 1) {
        std::filesystem::path p(path);
        path = (p.parent_path() / fmt::format("{}-{}{}", p.stem().string(), i + 1, p.extension().string())).string();
      }
      write_file(path, print_model(v.countermodel->model));
      extra = " model=" + path;
    }
    if (v.status == ProofStatus::ProverError) {
      std::cerr << "hyloc: goal " << i + 1 << ": " << to_string(v.failure) << ": " << v.excerpt << "\n";
      if (!setup_error.empty()) std::cerr << "hyloc: " << setup_error << "\n";
    }
    std::cout << verdict_word(v.status) << " " << (v.provenance.empty() ? "none" : v.provenance) << extra << " "
              << fmt::format("{:.3f}s", v.seconds) << "\n";
    if (v.status == ProofStatus::CounterSatisfiable) negative = true;
    else if (v.status != ProofStatus::Proved) unknown = true;
  }
  if (unknown) return kUnknown;
  return negative ? kNegative : kOk;
}

// --- countermodel ----------------------------------------------------------

int cmd_countermodel(const std::string& spec_path, const std::string& spec_name, const std::string& goal,
                     int max_worlds, int max_carrier, double max_candidates, const std::string& out) {
  if (max_worlds < 1 || max_carrier < 1) die(kUsage, "search bounds must be at least 1");
  HybridTheory th = load_theory(spec_path, spec_name);
  Sentence g = load_goal(goal, th);
  SearchBounds bounds;
  bounds.max_worlds = max_worlds;
  bounds.max_carrier = max_carrier;
  bounds.max_candidates = max_candidates;
  std::optional<Countermodel> hit;
  try {
    hit = find_countermodel(th.signature, th.constraints, th.axioms, g, bounds);
  } catch (const BoundsTooLarge& e) {
    die(kUsage, e.what());
  } catch (const Error& e) {
    die(kUsage, e.what());
  }
  if (!hit) {
    std::cout << "none within bounds\n";
    return kUnknown;
  }
  std::string text = print_model(hit->model);
  std::string where = world_name(hit->model, hit->world);
  if (out.empty()) {
    std::cout << "-- goal fails at world " << where << "\n" << text;
  } else {
    write_file(out, text);
    std::cout << "countermodel written to " << out << " (goal fails at world " << where << ")\n";
  }
  return kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid specification workbench"};
  app.require_subcommand(1);

  std::vector<std::string> parse_paths;
  bool first_error = false;
  auto* parse = app.add_subcommand("parse", "Parse specification files and report diagnostics");
  parse->add_option("paths", parse_paths, "Specification files")->required();
  parse->add_flag("--first-error", first_error, "Stop at the first diagnostic");

  std::string spec, model, spec_name, out, dump_sorted, goal;
  std::vector<std::string> goals;
  bool all_axioms = false;

  auto* check = app.add_subcommand("check", "Check a Kripke model against a specification");
  check->add_option("file", spec, "Specification file")->required();
  check->add_option("model", model, "Model file")->required();
  check->add_option("--spec", spec_name, "Name of the hlogic spec (default: last one)");
  check->add_option("--goal", goals, "Extra sentence to evaluate");

  auto* encode = app.add_subcommand("encode", "Emit the TPTP encoding of a specification");
  encode->add_option("file", spec, "Specification file")->required();
  encode->add_option("--spec", spec_name, "Name of the hlogic spec (default: last one)");
  auto* goal_opt = encode->add_option("--goal", goal, "Conjecture to encode");
  encode->add_flag("--all-axioms", all_axioms, "Encode the axioms only")->excludes(goal_opt);
  encode->add_option("--out", out, "Output file (default: stdout)");
  encode->add_option("--dump-sorted", dump_sorted, "Also write the many-sorted intermediate theory");

  ProveFlags pf;
  auto* prove = app.add_subcommand("prove", "Decide goals with external provers and bounded search");
  prove->add_option("file", spec, "Specification file")->required();
  prove->add_option("--spec", spec_name, "Name of the hlogic spec (default: last one)");
  prove->add_option("--goal", goals, "Goal sentence (repeatable)")->required();
  prove->add_option("--strategy", pf.strategy, "external, bounded or both")
      ->check(CLI::IsMember({"external", "bounded", "both"}));
  prove->add_option("--prover", pf.prover, "Prover id from the registry");
  prove->add_option("--provers", pf.registry, "Prover registry file (default: $HYLOC_PROVERS)");
  prove->add_option("--timeout", pf.timeout, "Prover timeout in seconds")->check(CLI::PositiveNumber);
  prove->add_option("--max-worlds", pf.max_worlds, "Bounded search: maximal world count");
  prove->add_option("--max-carrier", pf.max_carrier, "Bounded search: maximal carrier size");
  prove->add_option("--model-out", pf.model_out, "Write countermodels to this file");
  prove->add_option("--jobs", pf.jobs, "Goals decided concurrently")->check(CLI::PositiveNumber);
  prove->add_flag("--parallel", pf.parallel, "Run both strategies concurrently");

  int max_worlds = 2, max_carrier = 1;
  double max_candidates = 5e7;
  auto* counter = app.add_subcommand("countermodel", "Search for a countermodel to a goal");
  counter->add_option("file", spec, "Specification file")->required();
  counter->add_option("--spec", spec_name, "Name of the hlogic spec (default: last one)");
  counter->add_option("--goal", goal, "Goal sentence")->required();
  counter->add_option("--max-worlds", max_worlds, "Maximal world count");
  counter->add_option("--max-carrier", max_carrier, "Maximal carrier size");
  counter->add_option("--max-candidates", max_candidates, "Refuse searches larger than this");
  counter->add_option("--out", out, "Write the model here (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*parse) return cmd_parse(parse_paths, first_error);
    if (*check) return cmd_check(spec, model, spec_name, goals);
    if (*encode) return cmd_encode(spec, spec_name, goal, out, dump_sorted);
    if (*prove) return cmd_prove(spec, spec_name, goals, pf);
    if (*counter) return cmd_countermodel(spec, spec_name, goal, max_worlds, max_carrier, max_candidates, out);
  } catch (const Exit& e) {
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "hyloc: " << e.what() << "\n";
    return kUnknown;
  }
  return kUsage;
}
