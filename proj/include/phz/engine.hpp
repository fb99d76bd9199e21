// Backward working-list reachability over gap constraints.
#pragma once

#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "phz/concrete.hpp"
#include "phz/lang.hpp"
#include "phz/pre.hpp"
#include "phz/symbolic.hpp"

namespace phz {

struct EngineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TargetNotFree : EngineError {
  TargetNotFree() : EngineError("control reachability needs a free target set") {}
};
struct TargetNotBGood : EngineError {
  explicit TargetNotBGood(int b) : EngineError("target set is not " + std::to_string(b) + "-good") {}
};
struct ModeUnsupported : EngineError {
  ModeUnsupported() : EngineError("symbolic engine needs a SIG_WAIT-only program") {}
};

struct Strategy {
  enum Kind { Control, Plain, Unrestricted } kind = Control;
  int K = 2;
  int B = 1;
  long budget = 0;  // iterations; 0 = none (Unrestricted requires one)

  static Strategy control(int k) { return {Control, k, 0, 0}; }
  static Strategy plain(int k, int b) { return {Plain, k, b, 0}; }
  static Strategy unrestricted(long budget) { return {Unrestricted, 0, 0, budget}; }
};

// Static default for K: newPhaser statements of the busiest task times a task bound.
int default_K(const Program& p, int task_bound = 2);

struct TraceStep {
  Constraint phi;
  int stmt = -1;    // statement leading to the next step; -1 on the last
  int suffix = -1;  // control of the executing task before the statement
  int next = -1;    // control after it
};

// phi_n, stmt_{n-1}, phi_{n-1}, ..., phi_1.
struct Trace {
  std::vector<TraceStep> steps;
};

struct Progress {
  long iteration = 0;
  std::size_t working = 0;
  std::size_t visited = 0;
  std::vector<int> dimensions;  // count of stored constraints per dimension
};

struct CheckOptions {
  int jobs = 1;
  bool verify_store = false;
  bool keep_store = false;  // copy the final store into CheckResult::store
  double time_limit = 0;    // seconds; 0 = none. Hitting it yields BudgetExhausted.
  long progress_every = 0;  // 0 disables progress events
  std::function<void(const Progress&)> on_progress;
};

struct CheckStats {
  long iterations = 0;
  long generated = 0;
  long pruned = 0;
  long subsumed = 0;
  long evicted = 0;
  long freeness_violations = 0;
  long store_violations = 0;
  std::size_t visited = 0;
  int max_dimension = 0;
};

struct CheckResult {
  enum Verdict { Reachable, Unreachable, BudgetExhausted } verdict = Unreachable;
  Trace trace;
  CheckStats stats;
  std::vector<Constraint> store;
};

const char* verdict_name(CheckResult::Verdict v);

CheckResult check(const Program& p, const std::vector<Constraint>& targets, const Strategy& s,
                  const CheckOptions& opt = {});

struct TraceCheck {
  bool ok = false;
  int failed_step = -1;  // index into Trace::steps
  std::string message;
};

struct ReplayBounds {
  int max_repeat = 4;          // executions of one statement per trace step
  std::size_t max_configs = 20000;
};

// Concrete replay: a run from the initial configuration through every constraint of the trace.
TraceCheck validate_trace(const Program& p, const Trace& tr, const ReplayBounds& b = {});

// True iff no stored constraint entails another.
bool is_antichain(const std::vector<Constraint>& store);

std::string print_trace(const Program& p, const Trace& tr);
std::string trace_json(const Program& p, const Trace& tr);

}  // namespace phz
