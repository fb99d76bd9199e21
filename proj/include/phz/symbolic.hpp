// Gap-based symbolic constraints: denotation, entailment, encodings.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phz/concrete.hpp"
#include "phz/lang.hpp"

namespace phz {

constexpr int kInf = 1 << 29;
constexpr int kVarNone = -1;  // '-'
constexpr int kVarAny = -2;   // '*'
constexpr std::int8_t kBvAny = 2;
constexpr int kSeqAny = -1;

inline int inf_add(int a, int d) { return a >= kInf ? kInf : a + d; }

struct Gap {
  int var = kVarAny;
  bool nreg = false;
  int lw = 0, ls = 0, uw = kInf, us = kInf;

  static Gap free(int var) { return Gap{var, false, 0, 0, kInf, kInf}; }
  static Gap unreg(int var) { return Gap{var, true, 0, 0, kInf, kInf}; }
  static Gap pinned(int var, int dw, int ds) { return Gap{var, false, dw, ds, dw, ds}; }

  bool is_free() const { return nreg || (uw >= kInf && us >= kInf); }
  bool bounded_by(int b) const { return nreg || (uw <= b && us <= b); }
  bool valid() const { return nreg || (lw >= 0 && ls >= 0 && lw <= uw && ls <= us); }
  bool operator==(const Gap& o) const {
    return var == o.var && nreg == o.nreg && (nreg || (lw == o.lw && ls == o.ls && uw == o.uw && us == o.us));
  }
  bool operator<(const Gap& o) const;
};

// g1 ⊴ g2
bool gap_leq(const Gap& g1, const Gap& g2);

struct EGap {
  int ew = 0, es = 0;
  bool operator==(const EGap&) const = default;
};

struct Constraint {
  int tasks = 0, phasers = 0;
  std::vector<std::int8_t> bv;         // 0, 1, kBvAny
  std::vector<int> seq;                // suffix id or kSeqAny
  std::vector<std::vector<Gap>> gap;   // [task][phaser]
  std::vector<EGap> egap;              // [phaser]

  bool operator==(const Constraint&) const = default;
  bool registered(int t, int p) const { return !gap[t][p].nreg; }
  int dimension() const { return phasers; }
  bool is_free() const;
  bool is_b_good(int b) const;
  bool valid() const;

  int add_task(int seq_id, const std::vector<Gap>& row);
  void remove_task(int t);
  int add_phaser(const EGap& e, const std::vector<Gap>& column);
  void remove_phaser(int p);

  // Canonical form: tasks and phasers sorted, for deduplication.
  Constraint canonical() const;
  std::size_t hash() const;
};

struct ConstraintHash {
  std::size_t operator()(const Constraint& c) const { return c.hash(); }
};

// Empty constraint (no tasks, no phasers, all bv wildcards).
Constraint top_constraint(const Program& p);

bool models(const Config& c, const Constraint& phi);
// phi_a ⊑ phi_b
bool entails(const Constraint& a, const Constraint& b);

struct Classification {
  int dimension = 0;
  bool free = false;
  int bounded_for = kInf;  // minimal B with B-gap-bounded, kInf when none
  int good_for = -1;       // minimal B with B-good, -1 when none
};
Classification classify(const Constraint& phi);

struct Encoding {
  std::vector<std::int8_t> bv;
  std::vector<int> seq;                // per row
  std::vector<std::vector<Gap>> acc;   // per row, per phaser index
  std::vector<EGap> env;               // per phaser index
};

Encoding encode(const Constraint& phi, const std::vector<int>& order_t, const std::vector<int>& order_p);
Encoding encode(const Constraint& phi);
bool encoding_entails(const Encoding& e1, const Encoding& e2);

std::vector<Constraint> minimize(const std::vector<Constraint>& set);

std::string print_gap(const Program& p, const Gap& g);
std::string print_constraint(const Program& p, const Constraint& phi);
std::string print_constraint_line(const Program& p, const Constraint& phi);

}  // namespace phz
