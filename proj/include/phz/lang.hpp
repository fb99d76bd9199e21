// Core phaser language: AST, parser, static checks and control suffixes.
#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace phz {

enum class Mode : std::uint8_t { SigWait, Sig, Wait };

const char* mode_name(Mode m);

struct Cond;
using CondPtr = std::shared_ptr<const Cond>;

struct Cond {
  enum Kind : std::uint8_t { Ndet, True, False, Var, Or, And, Not };
  Kind kind = True;
  int var = -1;  // bool variable index for Var
  CondPtr lhs, rhs;
};

// Possible outcomes of evaluating a condition; bit 0 = false, bit 1 = true.
using Outcomes = unsigned;
constexpr Outcomes kMayFalse = 1u;
constexpr Outcomes kMayTrue = 2u;

Outcomes eval_cond(const Cond& c, const std::vector<bool>& bv);
// Three-valued evaluation: entries of bv are 0, 1 or 2 (unknown).
Outcomes eval_cond3(const Cond& c, const std::vector<std::int8_t>& bv);

enum class StmtKind : std::uint8_t {
  NewPhaser,
  Asynch,
  Drop,
  Signal,
  Wait,
  NextBlock,
  Assign,
  Assert,
  While,
  If,
  Exit,
};

struct Stmt {
  StmtKind kind = StmtKind::Exit;
  int id = -1;
  int pvar = -1;          // phaser variable (NewPhaser, Drop, Signal, Wait, NextBlock)
  int bvar = -1;          // bool variable (Assign)
  Mode mode = Mode::SigWait;  // NewPhaser registration mode
  int task = -1;          // Asynch callee
  std::string task_name;
  std::vector<int> args;  // Asynch phaser arguments
  std::vector<Mode> arg_modes;
  std::vector<bool> arg_mode_given;
  CondPtr cond;
  std::vector<int> body;  // statement ids
  int line = 0, col = 0;
};

struct TaskDef {
  std::string name;
  std::vector<int> params;  // phaser variable ids
  std::vector<Mode> modes;
  std::vector<int> body;    // statement ids
  int line = 0;
};

struct SyntaxError : std::runtime_error {
  int line, col;
  SyntaxError(const std::string& msg, int l, int c);
};

// Control step labels produced by head_successors.
enum class Branch : std::uint8_t { Pop, True, False, Executor, Participant };

struct Unfold {
  Branch branch;
  int next;  // suffix id
};

class Program {
 public:
  std::vector<std::string> bool_vars;
  std::vector<std::string> phaser_vars;
  std::vector<TaskDef> tasks;
  std::vector<Stmt> stmts;  // arena; Stmt::id indexes it
  int main_task = -1;
  bool fragment = false;

  int task_index(std::string_view name) const;
  int bool_index(std::string_view name) const;
  int phaser_index(std::string_view name) const;

  // UnrSuff: interned control sequences. Suffix 0 is the empty sequence.
  int suffix_count() const { return static_cast<int>(suffixes_.size()); }
  const std::vector<int>& suffix(int id) const { return suffixes_[id]; }
  int find_suffix(const std::vector<int>& seq) const;
  int task_entry(int task) const { return entries_[task]; }
  // Head statement of a suffix, nullptr when empty.
  const Stmt* head(int suffix) const;
  // Suffix obtained by dropping the head.
  int tail(int suffix) const { return tails_[suffix]; }

  // Control-level unfolding of a suffix headed by a compound statement.
  std::vector<Unfold> head_successors(int suffix) const;
  // The suffix a NextBlock participant moves to (the empty barrier).
  int barrier_suffix(int suffix) const;
  // Suffix sig(v);wait(v);s2 for a suffix headed by an empty barrier.
  int expand_barrier(int suffix) const;

  bool has_atomic() const;
  bool sig_wait_only() const;

  std::string print_stmt(int id, int indent = -1) const;
  std::string print_cond(const Cond& c) const;
  std::string print_suffix(int suffix) const;
  std::string print() const;

  // Finalization: interns all suffixes and computes the UnrSuff closure.
  void close();

 private:
  friend class Parser;
  int intern(const std::vector<int>& seq);
  int add_stmt(Stmt s);
  int empty_barrier_of(int nb);
  std::pair<int, int> sig_wait_of(int nb);
  std::vector<std::vector<int>> suffixes_;
  std::vector<int> tails_;
  std::vector<int> entries_;
  std::unordered_map<std::string, int> suffix_index_;
  std::unordered_map<int, int> empty_barrier_;
  std::unordered_map<int, std::pair<int, int>> sig_wait_;
  std::unordered_map<int, int> barrier_of_suffix_;
  std::unordered_map<int, int> expanded_;
};

using ProgramPtr = std::shared_ptr<const Program>;

// Parses and validates; throws SyntaxError on the first hard error.
ProgramPtr parse(std::string_view text);
ProgramPtr parse_file(const std::string& path);
// Syntax only; semantic problems are left for validate().
ProgramPtr parse_unchecked(std::string_view text);

// Parses a statement list against an existing program's variables and
// returns the matching suffix id, or -1.
int parse_suffix(const Program& p, std::string_view text);

struct Diagnostic {
  enum Level : std::uint8_t { Error, Info } level;
  std::string message;
  int line = 0;
};

std::vector<Diagnostic> validate(const Program& p);

bool is_phaser_stmt(StmtKind k);

}  // namespace phz
