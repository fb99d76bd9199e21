// Concrete configurations, operational semantics and the bounded explorer.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phz/lang.hpp"

namespace phz {

struct PhaseEntry {
  int var = -1;  // phaser variable naming the phaser, -1 for '-'
  bool reg = false;
  Mode mode = Mode::SigWait;
  int w = 0, s = 0;

  bool operator==(const PhaseEntry& o) const {
    return var == o.var && reg == o.reg && (!reg || (mode == o.mode && w == o.w && s == o.s));
  }
};

struct Config {
  std::vector<bool> bv;
  std::vector<int> seq;                        // per task: suffix id
  std::vector<std::vector<PhaseEntry>> phase;  // [task][phaser]
  int phasers = 0;

  int tasks() const { return static_cast<int>(seq.size()); }
  bool operator==(const Config& o) const = default;
  std::size_t hash() const;
  // Phaser bound to variable v in task t, or -1.
  int bound(int t, int v) const;
  bool well_formed() const;
};

struct ConfigHash {
  std::size_t operator()(const Config& c) const { return c.hash(); }
};

struct ErrorKind {
  enum Kind : std::uint8_t { Assertion, Registration, Deadlock } kind;
  int task = -1;
  int stmt = -1;
  int var = -1;
  std::vector<int> cycle;  // deadlock: tasks t1..tm of a cyclic wait
};

// One successor of a task step. Either next or error is set.
struct Succ {
  int task;
  int stmt;          // executed statement id
  Branch branch;
  int value = -1;    // assigned value, assert outcome, or executor
  std::optional<Config> next;
  std::optional<ErrorKind> error;
};

Config initial_config(const Program& p);

// All steps of task t (guards applied). Blocked or finished tasks yield none.
std::vector<Succ> task_steps(const Program& p, const Config& c, int t);
std::vector<Succ> all_steps(const Program& p, const Config& c);

struct Step {
  int task;
  int stmt;
};
std::vector<Step> enabled_steps(const Program& p, const Config& c);
// choice indexes task_steps(p, c, t).
Succ apply_step(const Program& p, const Config& c, int t, int choice);

// True iff t is at a wait that its guard currently blocks.
bool blocked_at_wait(const Program& p, const Config& c, int t);
// Shortest cyclic wait, empty if none.
std::vector<int> cyclic_wait(const Program& p, const Config& c);

// Subtracts per phaser the minimum registered wait value.
Config normalize(const Config& c);

struct PartialEntry {
  int var = -1;        // -1 '-', -2 '*'
  enum Val : std::uint8_t { Nreg, Pair } val = Pair;
  int w = -1, s = -1;  // -1 is '*'
};

struct PartialConfig {
  int tasks = 0, phasers = 0;
  std::vector<std::int8_t> bv;  // 0, 1, 2 = '*'
  std::vector<int> seq;         // suffix id or -1 = '*'
  std::vector<std::vector<std::optional<PartialEntry>>> phase;
  std::vector<std::string> task_names, phaser_names;

  bool is_control() const;
};

bool includes(const Config& c, const PartialConfig& pc);
// Some configuration equivalent to c includes pc.
bool includes_upto_equiv(const Config& c, const PartialConfig& pc);
bool equivalent(const Config& a, const Config& b);

struct Bounds {
  long max_steps = 200000;  // explored configurations
  int max_tasks = 6;
  int max_phasers = 4;
  int max_phase = 8;
};

struct FoundError {
  ErrorKind error;
  int config;  // index of the configuration where it fires
};

struct ExploreResult {
  std::vector<Config> configs;  // normalized; index 0 is initial
  std::vector<std::vector<std::pair<int, int>>> edges;  // (stmt, target)
  std::vector<FoundError> errors;
  bool exhausted = true;
  int global_deadlocks = 0;

  bool has(ErrorKind::Kind k) const;
  // Minimum cyclic-wait length over all reached configurations; 0 if none.
  int min_cycle() const;
  bool reaches(const PartialConfig& pc) const;
};

ExploreResult explore(const Program& p, const Bounds& b);

std::string print_config(const Program& p, const Config& c);
std::string print_error(const Program& p, const ErrorKind& e);

}  // namespace phz
