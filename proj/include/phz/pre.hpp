// Backward predecessor transformers over gap constraints.
#pragma once

#include <stdexcept>
#include <vector>

#include "phz/lang.hpp"
#include "phz/symbolic.hpp"

namespace phz {

struct AtomicUnsupported : std::runtime_error {
  AtomicUnsupported() : std::runtime_error("atomic next-block statement: exact symbolic engine unavailable") {}
};

struct PreOptions {
  // Largest finite gap bound kept when a drop inversion enumerates level shifts.
  int shift_cap = 8;
  // Discard predecessors the input constraint already entails. The engine's store
  // would subsume them anyway.
  bool drop_entailed = false;
};

// The task executing the statement: an explicit row of the constraint or a fresh environment task.
struct TaskRole {
  int task = -1;
  static TaskRole env() { return {}; }
  static TaskRole explicit_task(int t) { return {t}; }
  bool is_env() const { return task < 0; }
};

// Predecessors of phi for one control step: the executing task sits at `suffix`
// and moves to `step.next`.
std::vector<Constraint> pre_stmt(const Program& p, const Constraint& phi, int suffix, const Unfold& step, TaskRole role,
                                 const PreOptions& opt = {});

struct PreResult {
  Constraint phi;
  int suffix;  // pre-state control of the executing task
  int stmt;    // statement id executed
  int role;    // explicit row of the post constraint, -1 for env
};

// All predecessors over every suffix, control step and role, in deterministic order.
std::vector<PreResult> pre_all(const Program& p, const Constraint& phi, const PreOptions& opt = {});

// True iff phi_pre is free whenever phi is free.
bool preserves_freeness_check(const Constraint& phi_pre, const Constraint& phi, const Stmt& stmt);

}  // namespace phz
