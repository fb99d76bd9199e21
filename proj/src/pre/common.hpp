// Shared helpers for the predecessor rules.
#pragma once

#include <vector>

#include "phz/pre.hpp"

namespace phz::pre_detail {

constexpr int kNegInf = -kInf;

// Where the executing task comes from in the post constraint.
enum class BaseKind { Sole, Shared, Env };

struct Base {
  Constraint c;
  int x;  // row of the executing task in c
  BaseKind kind;
};

std::vector<Base> make_bases(const Constraint& phi, int suffix, int next, TaskRole role);

// Move the level of phaser column p by d on a raw gap; lower bounds are clamped at 0.
bool shift_gap(Gap& g, int d);
// Shifts every registered gap of column p except row `skip`, plus egap.
bool shift_column(Constraint& c, int p, int d, int skip);

// Adds a fresh column where row x holds `xg` and every other row is nreg, registered-free or split in two.
void materialize(const Constraint& c, int x, const Gap& xg, std::vector<Constraint>& out);

// Merges variants that differ only in one named-gap variable covering every value.
void merge_vars(std::vector<Constraint>& set, int nvars);

// Pre-state valuations of the bool store for a statement on a given branch.
std::vector<std::vector<std::int8_t>> bv_pre(const Program& p, const Stmt& h, Branch br,
                                             const std::vector<std::int8_t>& post);

}  // namespace phz::pre_detail
