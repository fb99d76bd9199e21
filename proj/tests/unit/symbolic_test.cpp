#include <gtest/gtest.h>

#include "phz/lang.hpp"
#include "phz/symbolic.hpp"

using namespace phz;

namespace {

Config one_task(int w, int s) {
  Config c;
  c.bv = {};
  c.seq = {0};
  c.phasers = 1;
  c.phase = {{PhaseEntry{0, true, Mode::SigWait, w, s}}};
  return c;
}

Constraint one_gap(Gap g, EGap e = {}) {
  Constraint phi;
  phi.add_phaser(e, {});
  phi.add_task(kSeqAny, {g});
  return phi;
}

}  // namespace

TEST(GapOrder, WidestBelowRegistered) {
  EXPECT_TRUE(gap_leq(Gap::free(kVarAny), Gap{0, false, 1, 1, 2, 2}));
  EXPECT_FALSE(gap_leq(Gap::unreg(0), Gap::pinned(0, 0, 0)));
  Gap g{0, false, 1, 2, 3, 4};
  EXPECT_TRUE(gap_leq(g, g));
  EXPECT_FALSE(gap_leq(Gap::free(0), Gap::free(1)));
  EXPECT_FALSE(gap_leq(Gap::free(0), Gap::free(kVarAny)));
}

TEST(Models, LevelIsExistential) {
  Constraint phi = one_gap(Gap::pinned(0, 0, 0));
  EXPECT_TRUE(models(one_task(0, 0), phi));
  EXPECT_TRUE(models(one_task(3, 3), phi));
  EXPECT_FALSE(models(one_task(3, 4), phi));
}

TEST(Models, EmptyIntervalRejects) {
  Constraint phi = one_gap(Gap{kVarAny, false, 0, 1, kInf, kInf});
  EXPECT_FALSE(models(one_task(2, 2), phi));
  EXPECT_TRUE(models(one_task(2, 3), phi));
}

TEST(Models, SurjectionAllowsSharedRow) {
  Config c = one_task(0, 1);
  c.seq.push_back(0);
  c.phase.push_back({PhaseEntry{0, true, Mode::SigWait, 1, 1}});
  Constraint phi = one_gap(Gap{0, false, 0, 0, 1, 1});
  EXPECT_TRUE(models(c, phi));
  phi.egap[0] = EGap{0, 1};
  phi.gap[0][0] = Gap::pinned(0, 1, 0);
  // row needs s-l=0 with w=l-1, env needs s-l>=1; task 1 matches neither role at l=1.
  EXPECT_FALSE(models(c, phi));
}

TEST(Entails, Reflexive) {
  Constraint phi = one_gap(Gap{0, false, 1, 0, 2, 3}, EGap{1, 0});
  EXPECT_TRUE(entails(phi, phi));
}

TEST(Entails, WidenedUpperBound) {
  Constraint b = one_gap(Gap{0, false, 1, 0, 2, 3});
  Constraint a = b;
  a.gap[0][0].uw = kInf;
  EXPECT_TRUE(entails(a, b));
  EXPECT_FALSE(entails(b, a));
}

TEST(Entails, SeqMismatch) {
  Constraint a = one_gap(Gap::free(0));
  Constraint b = a;
  a.seq[0] = 3;
  b.seq[0] = 4;
  EXPECT_FALSE(entails(a, b));
  a.seq[0] = kSeqAny;
  EXPECT_TRUE(entails(a, b));
  EXPECT_FALSE(entails(b, a));
}

TEST(Entails, EnvAbsorbsExtraTask) {
  Constraint a = one_gap(Gap::free(0));
  Constraint b = a;
  b.add_task(kSeqAny, {Gap{1, false, 2, 0, kInf, kInf}});
  EXPECT_TRUE(entails(a, b));
  a.egap[0] = EGap{3, 0};
  EXPECT_FALSE(entails(a, b));
}

TEST(Classify, Examples) {
  Constraint free = one_gap(Gap::free(0));
  Classification k = classify(free);
  EXPECT_TRUE(k.free);
  EXPECT_EQ(k.good_for, 0);
  Constraint two = free;
  two.add_task(kSeqAny, {Gap{0, false, 0, 0, 2, 3}});
  k = classify(two);
  EXPECT_FALSE(k.free);
  EXPECT_EQ(k.good_for, 3);
  EXPECT_EQ(k.bounded_for, kInf);
  two.add_phaser(EGap{}, {Gap::free(1), Gap::free(1)});
  EXPECT_EQ(classify(two).dimension, 2);
}

TEST(Encoding, RenamedTasksEncodeAlike) {
  Constraint a;
  a.add_phaser(EGap{}, {});
  a.add_task(3, {Gap::pinned(0, 0, 1)});
  a.add_task(5, {Gap::free(1)});
  Constraint b;
  b.add_phaser(EGap{}, {});
  b.add_task(5, {Gap::free(1)});
  b.add_task(3, {Gap::pinned(0, 0, 1)});
  Encoding ea = encode(a), eb = encode(b, {1, 0}, {0});
  EXPECT_EQ(ea.seq, eb.seq);
  EXPECT_EQ(ea.acc, eb.acc);
  EXPECT_TRUE(encoding_entails(ea, ea));
}

TEST(Encoding, DimensionMismatch) {
  Constraint a = one_gap(Gap::free(0));
  Constraint b = a;
  b.add_phaser(EGap{}, {Gap::free(1)});
  EXPECT_FALSE(encoding_entails(encode(a), encode(b)));
}

TEST(Encoding, ConstantSurjection) {
  Constraint a = one_gap(Gap::free(kVarAny));
  Constraint b = one_gap(Gap{0, false, 1, 1, 2, 2});
  b.add_task(7, {Gap::pinned(1, 0, 0)});
  EXPECT_TRUE(encoding_entails(encode(a), encode(b)));
}

TEST(Minimize, KeepsWidened) {
  Constraint b = one_gap(Gap{0, false, 1, 0, 2, 3});
  Constraint a = b;
  a.gap[0][0].uw = kInf;
  auto m = minimize({b, a});
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].gap[0][0].uw, kInf);
  EXPECT_EQ(minimize({b}).size(), 1u);
  Constraint c = one_gap(Gap::free(1));
  EXPECT_EQ(minimize({b, c}).size(), 2u);
}
