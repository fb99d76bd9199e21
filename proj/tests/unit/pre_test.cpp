#include <gtest/gtest.h>

#include <chrono>
#include <set>

#include "oracle.hpp"
#include "phz/pre.hpp"

using namespace phz;

namespace {

struct Occurrence {
  int suffix;
  Unfold step;
};

std::vector<Occurrence> occurrences(const Program& p) {
  std::vector<Occurrence> out;
  for (int s = 1; s < p.suffix_count(); ++s)
    for (const Unfold& u : p.head_successors(s)) out.push_back({s, u});
  return out;
}

void run_sandwich(StmtKind kind, int samples, int max_tasks, int max_phasers) {
  auto prog = parse(oracle::kEveryStatement);
  const Program& p = *prog;
  int checked = 0;
  for (const Occurrence& o : occurrences(p)) {
    if (p.head(o.suffix)->kind != kind) continue;
    std::set<int> seqs{o.suffix, o.step.next, p.task_entry(p.task_index("T"))};
    oracle::Universe u;
    u.max_tasks = max_tasks;
    u.max_phasers = max_phasers;
    u.max_phase = max_phasers > 1 ? 1 : 2;
    u.seqs.assign(seqs.begin(), seqs.end());
    u.vars = {-1, 0, 1};
    oracle::SandwichOracle orc(p, o.suffix, o.step, u);
    oracle::GenParams g;
    g.max_tasks = 2;
    g.max_phasers = max_phasers;
    g.seqs = u.seqs;
    g.vars = u.vars;
    std::mt19937 rng(1234 + o.suffix);
    oracle::SandwichStats st;
    PreOptions opt;
    opt.shift_cap = 2 * u.max_phase + 2;
    for (int i = 0; i < samples; ++i) orc.check(oracle::random_constraint(p, g, rng), opt, max_tasks, st);
    EXPECT_EQ(st.failures, 0) << p.print_suffix(o.suffix) << "\n" << st.first_failure;
    EXPECT_GT(st.sound_checked, 0);
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

}  // namespace

TEST(PreSandwich, Signal) { run_sandwich(StmtKind::Signal, 60, 2, 2); }
TEST(PreSandwich, Wait) { run_sandwich(StmtKind::Wait, 60, 2, 2); }
TEST(PreSandwich, Drop) { run_sandwich(StmtKind::Drop, 60, 2, 2); }
TEST(PreSandwich, NewPhaser) { run_sandwich(StmtKind::NewPhaser, 60, 2, 2); }
TEST(PreSandwich, Asynch) { run_sandwich(StmtKind::Asynch, 60, 2, 2); }
TEST(PreSandwich, Assign) { run_sandwich(StmtKind::Assign, 60, 2, 1); }
TEST(PreSandwich, Assert) { run_sandwich(StmtKind::Assert, 60, 2, 1); }
TEST(PreSandwich, While) { run_sandwich(StmtKind::While, 60, 2, 1); }
TEST(PreSandwich, If) { run_sandwich(StmtKind::If, 60, 2, 1); }
TEST(PreSandwich, Exit) { run_sandwich(StmtKind::Exit, 60, 2, 1); }
TEST(PreSandwich, ThreeTasksOnePhaser) {
  run_sandwich(StmtKind::Signal, 20, 3, 1);
  run_sandwich(StmtKind::Drop, 20, 3, 1);
  run_sandwich(StmtKind::Asynch, 20, 3, 1);
}
