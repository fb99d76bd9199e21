// phzc: parse, explore and check phaser programs.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "phz/concrete.hpp"
#include "phz/engine.hpp"
#include "phz/lang.hpp"
#include "phz/targets.hpp"

namespace {

constexpr int kExitSafe = 0;
constexpr int kExitFound = 1;
constexpr int kExitError = 2;
constexpr int kExitInconclusive = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

phz::ProgramPtr load(const std::string& path) {
  phz::ProgramPtr p;
  try {
    p = phz::parse_file(path);
  } catch (const phz::SyntaxError& e) {
    throw InputError(path + ":" + std::to_string(e.line) + ":" + std::to_string(e.col) + ": " + e.what());
  }
  for (const phz::Diagnostic& d : phz::validate(*p))
    if (d.level == phz::Diagnostic::Error) throw InputError(path + ":" + std::to_string(d.line) + ": " + d.message);
  return p;
}

int run_parse(const std::string& file) {
  phz::ProgramPtr p;
  try {
    p = phz::parse_file(file);
  } catch (const phz::SyntaxError& e) {
    std::cerr << file << ":" << e.line << ":" << e.col << ": " << e.what() << "\n";
    return kExitError;
  }
  std::cout << p->print();
  int code = kExitSafe;
  for (const phz::Diagnostic& d : phz::validate(*p)) {
    std::cerr << file << ":" << d.line << ": " << (d.level == phz::Diagnostic::Error ? "error: " : "info: ") << d.message
              << "\n";
    if (d.level == phz::Diagnostic::Error) code = kExitError;
  }
  return code;
}

struct ExploreArgs {
  std::string file, graph;
  phz::Bounds bounds;
};

int run_explore(const ExploreArgs& a) {
  phz::ProgramPtr p = load(a.file);
  phz::ExploreResult r = phz::explore(*p, a.bounds);
  std::cout << "configurations: " << r.configs.size() << "\n";
  std::cout << "exhausted: " << (r.exhausted ? "yes" : "no") << "\n";
  bool asrt = r.has(phz::ErrorKind::Assertion), reg = r.has(phz::ErrorKind::Registration);
  int cyc = r.min_cycle();
  std::cout << "assertion violation: " << (asrt ? "reachable" : "not found") << "\n";
  std::cout << "registration error: " << (reg ? "reachable" : "not found") << "\n";
  std::cout << "cyclic wait: " << (cyc > 0 ? "reachable (length " + std::to_string(cyc) + ")" : "not found") << "\n";
  std::cout << "global deadlocks: " << r.global_deadlocks << "\n";
  for (const phz::FoundError& e : r.errors)
    std::cout << "  " << phz::print_error(*p, e.error) << " at config " << e.config << "\n";
  if (!a.graph.empty()) {
    std::ofstream g(a.graph);
    if (!g) throw InputError("cannot write " + a.graph);
    for (size_t i = 0; i < r.configs.size(); ++i) {
      g << "config " << i << " " << phz::print_config(*p, r.configs[i]) << "\n";
      for (auto [stmt, to] : r.edges[i]) g << "  edge " << i << " -> " << to << " line " << p->stmts[stmt].line << "\n";
    }
  }
  if (asrt || reg || cyc > 0) return kExitFound;
  return r.exhausted ? kExitSafe : kExitInconclusive;
}

struct CheckArgs {
  std::string file, property = "assert", target, mode = "control", trace;
  int K = -1, B = 1, cycle = 2, jobs = 1, task_bound = 2;
  long budget = 0;
  double time_limit = 0;
  bool progress = false, verify_store = false;
};

int run_check(const CheckArgs& a) {
  phz::ProgramPtr p = load(a.file);
  const phz::Program& prog = *p;
  int K = a.K >= 0 ? a.K : phz::default_K(prog, a.task_bound);
  phz::Strategy s;
  if (a.mode == "control") {
    s = phz::Strategy::control(K);
  } else if (a.mode == "plain") {
    s = phz::Strategy::plain(K, a.B);
  } else {
    if (a.budget <= 0) throw InputError("unrestricted mode needs --budget");
    s = phz::Strategy::unrestricted(a.budget);
  }
  if (a.budget > 0) s.budget = a.budget;

  std::vector<phz::Constraint> targets;
  if (a.property == "assert") {
    targets = phz::assertion_targets(prog);
  } else if (a.property == "regerror") {
    targets = phz::registration_error_targets(prog);
  } else if (a.property == "cyclic-wait") {
    targets = phz::cyclic_wait_targets(prog, a.cycle, a.mode == "plain" ? a.B : -1);
  } else {
    if (a.target.empty()) throw InputError("--property custom needs --target");
    try {
      targets = phz::from_partial_config(prog, phz::parse_partial_config_file(prog, a.target));
    } catch (const phz::TargetFormatError& e) {
      throw InputError(a.target + ":" + std::to_string(e.line) + ": " + e.what());
    }
  }

  phz::CheckOptions opt;
  opt.jobs = a.jobs;
  opt.verify_store = a.verify_store;
  opt.time_limit = a.time_limit;
  if (a.progress) {
    opt.progress_every = 1;
    opt.on_progress = [](const phz::Progress& pr) {
      nlohmann::json j;
      j["iteration"] = pr.iteration;
      j["working"] = pr.working;
      j["visited"] = pr.visited;
      j["dimensions"] = pr.dimensions;
      std::cerr << j.dump() << "\n";
    };
  }
  phz::CheckResult r;
  try {
    r = phz::check(prog, targets, s, opt);
  } catch (const phz::EngineError& e) {
    throw InputError(e.what());
  } catch (const phz::AtomicUnsupported& e) {
    throw InputError(e.what());
  }
  const phz::CheckStats& st = r.stats;
  std::cout << "targets: " << targets.size() << "\n";
  std::cout << "verdict: " << phz::verdict_name(r.verdict) << "\n";
  std::cout << "iterations: " << st.iterations << "  generated: " << st.generated << "  pruned: " << st.pruned
            << "  subsumed: " << st.subsumed << "  evicted: " << st.evicted << "  visited: " << st.visited
            << "  max dimension: " << st.max_dimension << "\n";
  if (st.freeness_violations) std::cout << "freeness violations: " << st.freeness_violations << "\n";
  if (st.store_violations) std::cout << "store violations: " << st.store_violations << "\n";
  if (r.verdict == phz::CheckResult::Reachable) {
    std::cout << phz::print_trace(prog, r.trace);
    phz::TraceCheck tc = phz::validate_trace(prog, r.trace);
    std::cout << "trace: " << (tc.ok ? "validated" : "not validated: " + tc.message) << "\n";
    if (!a.trace.empty()) {
      std::ofstream f(a.trace);
      if (!f) throw InputError("cannot write " + a.trace);
      f << phz::trace_json(prog, r.trace) << "\n";
    }
    return kExitFound;
  }
  return r.verdict == phz::CheckResult::Unreachable ? kExitSafe : kExitInconclusive;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verifier for phaser programs"};
  app.require_subcommand(1);

  std::string parse_file;
  auto* parse = app.add_subcommand("parse", "Print the program and its diagnostics");
  parse->add_option("FILE", parse_file)->required();

  ExploreArgs ex;
  auto* explore = app.add_subcommand("explore", "Bounded forward exploration of the concrete semantics");
  explore->add_option("FILE", ex.file)->required();
  explore->add_option("--max-steps", ex.bounds.max_steps, "Explored configuration limit");
  explore->add_option("--max-tasks", ex.bounds.max_tasks);
  explore->add_option("--max-phasers", ex.bounds.max_phasers);
  explore->add_option("--max-phase", ex.bounds.max_phase);
  explore->add_option("--emit-graph", ex.graph, "Write the reachable graph to PATH");

  CheckArgs ck;
  auto* check = app.add_subcommand("check", "Symbolic backward reachability");
  check->add_option("FILE", ck.file)->required();
  check->add_option("--property", ck.property)->check(CLI::IsMember({"assert", "regerror", "cyclic-wait", "custom"}));
  check->add_option("--target", ck.target, "Partial configuration file for --property custom");
  check->add_option("--mode", ck.mode)->check(CLI::IsMember({"control", "plain", "unrestricted"}));
  check->add_option("--K", ck.K, "Dimension bound (default: newPhaser count per task times the task bound)");
  check->add_option("--task-bound", ck.task_bound, "Task bound in the default K")->check(CLI::PositiveNumber);
  check->add_option("--B", ck.B, "Gap bound for plain mode");
  check->add_option("--cycle", ck.cycle, "Longest cyclic wait to target")->check(CLI::PositiveNumber);
  check->add_option("--budget", ck.budget, "Iteration budget");
  check->add_option("--time-limit", ck.time_limit, "Seconds before giving up (exit 3)");
  check->add_option("--trace", ck.trace, "Write the trace as JSON to PATH");
  check->add_option("--jobs", ck.jobs)->check(CLI::PositiveNumber);
  check->add_flag("--progress", ck.progress, "Progress events as JSON lines on stderr");
  check->add_flag("--verify-store", ck.verify_store, "Check the antichain invariant after every iteration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }
  try {
    if (*parse) return run_parse(parse_file);
    if (*explore) return run_explore(ex);
    return run_check(ck);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitError;
}
