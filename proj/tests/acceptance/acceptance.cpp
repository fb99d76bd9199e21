// Acceptance runner: one PASS/FAIL line per criterion, details on stderr.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "oracle.hpp"
#include "phz/engine.hpp"
#include "phz/targets.hpp"

using namespace phz;

namespace {

struct Run {
  std::string program, property, mode;
  CheckResult::Verdict verdict = CheckResult::Unreachable;
  double seconds = 0;
  long freeness_violations = 0;
  long store_violations = 0;
  bool validated = true;
};

struct Line {
  bool pass = false;
  std::string detail;
};

struct Corpus {
  std::string name;
  ProgramPtr prog;
};

std::vector<Corpus> load_corpus() {
  std::vector<std::string> files;
  for (const auto& e : std::filesystem::directory_iterator(PHZ_CORPUS_DIR))
    if (e.path().extension() == ".phz") files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  std::vector<Corpus> out;
  for (const std::string& f : files) out.push_back({std::filesystem::path(f).stem().string(), parse_file(f)});
  return out;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Run run_check(const Corpus& c, const std::string& property, const std::vector<Constraint>& targets, const Strategy& s,
              CheckOptions opt) {
  Run r{c.name, property, s.kind == Strategy::Control ? "control" : s.kind == Strategy::Plain ? "plain" : "unrestricted"};
  auto t0 = std::chrono::steady_clock::now();
  CheckResult res = check(*c.prog, targets, s, opt);
  r.seconds = since(t0);
  r.verdict = res.verdict;
  r.freeness_violations = res.stats.freeness_violations;
  r.store_violations = res.stats.store_violations;
  if (opt.keep_store && !is_antichain(res.store)) ++r.store_violations;
  if (res.verdict == CheckResult::Reachable) r.validated = validate_trace(*c.prog, res.trace).ok;
  std::cerr << "  " << r.program << " " << r.property << " " << r.mode << ": " << verdict_name(r.verdict) << " ("
            << static_cast<int>(r.seconds * 10) / 10.0 << "s, " << res.stats.iterations << " iterations)"
            << (r.validated ? "" : " TRACE NOT VALIDATED") << "\n";
  return r;
}

// Oracle agreement on programs whose state space the explorer exhausts.
Line criterion1(const std::vector<Corpus>& corpus, double limit, std::vector<Run>& runs) {
  int programs = 0, instances = 0, disagreements = 0, timeouts = 0;
  std::ostringstream bad;
  for (const Corpus& c : corpus) {
    if (!c.prog->sig_wait_only()) continue;
    ExploreResult ex = explore(*c.prog, Bounds{});
    if (!ex.exhausted) continue;
    ++programs;
    int K = 1, tasks = 1, B = 1;
    for (const Config& cf : ex.configs) {
      K = std::max(K, cf.phasers);
      tasks = std::max(tasks, cf.tasks());
      for (const auto& row : cf.phase)
        for (const PhaseEntry& e : row)
          if (e.reg) B = std::max(B, e.s);
    }
    std::cerr << "  " << c.name << ": K=" << K << " B=" << B << " cycle<=" << tasks << "\n";
    CheckOptions opt;
    opt.time_limit = limit;
    struct Inst {
      std::string property;
      bool expect;
      std::vector<Constraint> targets;
      Strategy s;
    };
    std::vector<Inst> insts = {
        {"assert", ex.has(ErrorKind::Assertion), assertion_targets(*c.prog), Strategy::control(K)},
        {"regerror", ex.has(ErrorKind::Registration), registration_error_targets(*c.prog), Strategy::control(K)},
        {"cyclic-wait", ex.min_cycle() > 0, cyclic_wait_targets(*c.prog, tasks, B), Strategy::plain(K, B)},
    };
    for (const Inst& in : insts) {
      ++instances;
      Run r = run_check(c, in.property, in.targets, in.s, opt);
      runs.push_back(r);
      if (r.verdict == CheckResult::BudgetExhausted) {
        ++timeouts;
        bad << " " << c.name << "/" << in.property << "(timeout)";
      } else if ((r.verdict == CheckResult::Reachable) != in.expect) {
        ++disagreements;
        bad << " " << c.name << "/" << in.property << "(disagree)";
      }
    }
  }
  std::ostringstream d;
  d << programs << " exhausted programs, " << instances << " instances, " << disagreements << " disagreements, "
    << timeouts << " over " << limit << "s" << bad.str();
  return {programs >= 10 && disagreements == 0 && timeouts == 0, d.str()};
}

oracle::Universe small_universe(const Program& p, int tasks, int phasers, int phase) {
  oracle::Universe u;
  u.max_tasks = tasks;
  u.max_phasers = phasers;
  u.max_phase = phase;
  for (int s = 0; s < p.suffix_count(); ++s) u.seqs.push_back(s);
  u.vars = {-1};
  for (int v = 0; v < static_cast<int>(p.phaser_vars.size()); ++v) u.vars.push_back(v);
  return u;
}

oracle::GenParams gen_params(const oracle::Universe& u) {
  oracle::GenParams g;
  g.max_tasks = u.max_tasks;
  g.max_phasers = u.max_phasers;
  g.max_bound = 2;
  g.max_egap = 1;
  g.seqs = u.seqs;
  g.vars = u.vars;
  return g;
}

// Entailment soundness over sampled triples.
Line criterion2() {
  ProgramPtr prog = parse(oracle::kEveryStatement);
  const Program& p = *prog;
  oracle::Universe u = small_universe(p, 3, 2, 4);
  u.seqs = {p.task_entry(0), p.task_entry(1), p.tail(p.task_entry(1))};
  std::mt19937 rng(2024);
  std::vector<Config> pool;
  for (int i = 0; i < 6000; ++i) pool.push_back(normalize(oracle::random_config(p, u, rng)));
  oracle::GenParams g = gen_params(u);
  long pairs = 0, triples = 0, failures = 0, attempts = 0;
  while ((triples < 10000 || pairs < 1000) && attempts < 2000000) {
    ++attempts;
    Constraint b = oracle::random_constraint(p, g, rng);
    Constraint a = attempts % 4 == 0 ? oracle::random_constraint(p, g, rng) : oracle::weaken(b, rng);
    if (a == b || !entails(a, b)) continue;
    ++pairs;
    for (const Config& c : pool) {
      if (!models(c, b)) continue;
      ++triples;
      if (!models(c, a)) ++failures;
    }
  }
  std::ostringstream d;
  d << triples << " triples from " << pairs << " entailed pairs, " << failures << " failures";
  return {triples >= 10000 && failures == 0, d.str()};
}

// Pre sandwich per statement kind.
Line criterion3() {
  ProgramPtr prog = parse(oracle::kEveryStatement);
  const Program& p = *prog;
  const StmtKind kinds[] = {StmtKind::NewPhaser, StmtKind::Asynch, StmtKind::Signal, StmtKind::Wait,
                            StmtKind::Drop,      StmtKind::Assign, StmtKind::Assert, StmtKind::While,
                            StmtKind::If,        StmtKind::Exit};
  const char* names[] = {"newPhaser", "asynch", "signal", "wait", "drop", "assign", "assert", "while", "if", "exit"};
  long sound = 0, complete = 0, one_step = 0, covered = 0;
  std::ostringstream per;
  for (size_t k = 0; k < std::size(kinds); ++k) {
    std::vector<std::pair<int, Unfold>> occ;
    for (int s = 1; s < p.suffix_count(); ++s)
      if (p.head(s)->kind == kinds[k])
        for (const Unfold& uf : p.head_successors(s)) occ.push_back({s, uf});
    bool phaser_kind = is_phaser_stmt(kinds[k]);
    int per_occ = static_cast<int>((1000 + occ.size() - 1) / occ.size());
    oracle::SandwichStats st;
    long samples = 0;
    for (auto [s, uf] : occ) {
      std::set<int> seqs{s, uf.next, p.task_entry(p.task_index("T"))};
      oracle::Universe u;
      u.max_tasks = 2;
      u.max_phasers = phaser_kind ? 2 : 1;
      u.max_phase = phaser_kind ? 1 : 2;
      u.seqs.assign(seqs.begin(), seqs.end());
      u.vars = {-1, 0, 1};
      oracle::SandwichOracle orc(p, s, uf, u);
      oracle::GenParams g = gen_params(u);
      g.max_tasks = 2;
      std::mt19937 rng(77 + s);
      PreOptions opt;
      opt.shift_cap = 2 * u.max_phase + 2;
      for (int i = 0; i < per_occ; ++i, ++samples) orc.check(oracle::random_constraint(p, g, rng), opt, u.max_tasks, st);
    }
    sound += st.sound_failures;
    complete += st.complete_failures;
    one_step += st.one_step_gaps;
    covered += st.complete_checked;
    per << " " << names[k] << ":" << samples;
    std::cerr << "  " << names[k] << ": " << samples << " constraints, " << st.sound_checked << " reaching configs, "
              << st.sound_failures << " uncovered, " << st.one_step_gaps << " one-step gaps, "
              << st.complete_failures << " spurious within 2 steps\n";
    if (st.failures) std::cerr << st.first_failure << "\n";
  }
  std::ostringstream d;
  d << "soundness " << sound << " counterexamples; completeness k=1: " << one_step << " of " << covered
    << " covered configurations need more steps; k=2: " << complete << " spurious; samples" << per.str();
  return {sound == 0 && one_step == 0 && complete == 0, d.str()};
}

// Termination of control and plain runs on the whole corpus; unrestricted runs keep the antichain.
Line criterion4(const std::vector<Corpus>& corpus, double limit, long unrestricted_budget, std::vector<Run>& runs) {
  int slow = 0, eligible = 0, store_bad = 0;
  double worst = 0;
  std::ostringstream bad, skipped;
  for (const Corpus& c : corpus) {
    if (!c.prog->sig_wait_only()) {
      skipped << " " << c.name;
      continue;
    }
    ++eligible;
    int K = default_K(*c.prog);
    CheckOptions opt;
    opt.time_limit = limit;
    std::vector<Run> mine = {
        run_check(c, "assert", assertion_targets(*c.prog), Strategy::control(K), opt),
        run_check(c, "regerror", registration_error_targets(*c.prog), Strategy::control(K), opt),
        run_check(c, "cyclic-wait", cyclic_wait_targets(*c.prog, 2, 1), Strategy::plain(K, 1), opt),
    };
    CheckOptions uopt;
    uopt.verify_store = true;
    uopt.keep_store = true;
    mine.push_back(run_check(c, "cyclic-wait", cyclic_wait_targets(*c.prog, 2), Strategy::unrestricted(unrestricted_budget), uopt));
    for (const Run& r : mine) {
      if (r.mode != "unrestricted") {
        worst = std::max(worst, r.seconds);
        if (r.verdict == CheckResult::BudgetExhausted) {
          ++slow;
          bad << " " << r.program << "/" << r.property;
        }
      }
      if (r.store_violations) ++store_bad;
      runs.push_back(r);
    }
  }
  std::ostringstream d;
  d << eligible << " programs, " << slow << " control/plain runs over " << limit << "s";
  if (slow) d << " (" << bad.str().substr(1) << ")";
  d << ", slowest finished run " << static_cast<int>(worst) << "s, " << store_bad << " unrestricted store violations";
  if (!skipped.str().empty()) d << "; not SIG_WAIT-only:" << skipped.str();
  return {slow == 0 && store_bad == 0 && skipped.str().empty(), d.str()};
}

Line criterion5(const std::vector<Run>& runs) {
  long v = 0, n = 0;
  for (const Run& r : runs)
    if (r.mode == "control") {
      ++n;
      v += r.freeness_violations;
    }
  return {v == 0, std::to_string(n) + " control runs, " + std::to_string(v) + " freeness violations"};
}

// Encoding entailment implies constraint entailment.
Line criterion6() {
  ProgramPtr prog = parse(oracle::kEveryStatement);
  const Program& p = *prog;
  oracle::Universe u = small_universe(p, 3, 2, 4);
  u.seqs = {p.task_entry(0), p.task_entry(1), p.tail(p.task_entry(1))};
  oracle::GenParams g = gen_params(u);
  std::mt19937 rng(99);
  auto perm = [&](int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    std::shuffle(v.begin(), v.end(), rng);
    return v;
  };
  long pairs = 0, failures = 0, attempts = 0;
  while (pairs < 10000 && attempts < 2000000) {
    ++attempts;
    Constraint b = oracle::random_constraint(p, g, rng);
    Constraint a = attempts % 4 == 0 ? oracle::random_constraint(p, g, rng) : oracle::weaken(b, rng);
    std::vector<int> pa = a.phasers == b.phasers && rng() % 2 ? perm(b.phasers) : perm(a.phasers);
    std::vector<int> pb = a.phasers == b.phasers ? pa : perm(b.phasers);
    if (!encoding_entails(encode(a, perm(a.tasks), pa), encode(b, perm(b.tasks), pb))) continue;
    ++pairs;
    if (!entails(a, b)) ++failures;
  }
  return {pairs >= 10000 && failures == 0,
          std::to_string(pairs) + " encoding pairs, " + std::to_string(failures) + " without entailment"};
}

// Shifted configurations take corresponding steps to equivalent successors.
Line criterion7(const std::vector<Corpus>& corpus) {
  std::vector<ProgramPtr> progs{parse(oracle::kEveryStatement)};
  for (const Corpus& c : corpus)
    if (c.prog->sig_wait_only()) progs.push_back(c.prog);
  std::mt19937 rng(7);
  long pairs = 0, steps = 0, failures = 0;
  for (int i = 0; pairs < 2000; ++i) {
    const Program& p = *progs[i % progs.size()];
    oracle::Universe u = small_universe(p, 3, 2, 3);
    Config c1 = oracle::random_config(p, u, rng);
    std::vector<int> k(c1.phasers);
    for (int& x : k) x = static_cast<int>(rng() % 6);
    Config c2 = oracle::shift(c1, k);
    ++pairs;
    bool ok = equivalent(c1, c2);
    auto e1 = enabled_steps(p, c1), e2 = enabled_steps(p, c2);
    ok = ok && e1.size() == e2.size();
    for (size_t j = 0; ok && j < e1.size(); ++j) ok = e1[j].task == e2[j].task && e1[j].stmt == e2[j].stmt;
    auto s1 = all_steps(p, c1), s2 = all_steps(p, c2);
    ok = ok && s1.size() == s2.size();
    for (size_t j = 0; ok && j < s1.size(); ++j) {
      ++steps;
      ok = s1[j].task == s2[j].task && s1[j].stmt == s2[j].stmt && s1[j].branch == s2[j].branch &&
           s1[j].error.has_value() == s2[j].error.has_value();
      if (ok && s1[j].error) ok = s1[j].error->kind == s2[j].error->kind;
      if (ok && s1[j].next) ok = equivalent(*s1[j].next, *s2[j].next);
    }
    if (!ok) {
      if (failures == 0) std::cerr << "  counterexample: " << print_config(p, c1) << "\n";
      ++failures;
    }
  }
  return {pairs >= 1000 && failures == 0, std::to_string(pairs) + " shifted pairs, " + std::to_string(steps) +
                                              " step pairs, " + std::to_string(failures) + " mismatches"};
}

Line criterion8(const std::vector<Run>& runs) {
  long reach = 0, bad = 0;
  for (const Run& r : runs)
    if (r.verdict == CheckResult::Reachable) {
      ++reach;
      bad += !r.validated;
    }
  return {bad == 0, std::to_string(reach) + " reachable verdicts, " + std::to_string(bad) + " traces rejected"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  double c1_limit = 60, c4_limit = 300;
  long unrestricted_budget = 40;
  std::vector<int> only;
  app.add_option("--c1-limit", c1_limit, "Seconds per oracle-agreement instance");
  app.add_option("--c4-limit", c4_limit, "Seconds per termination run");
  app.add_option("--unrestricted-budget", unrestricted_budget, "Iterations for unrestricted runs");
  app.add_option("--only", only, "Criteria to run");
  CLI11_PARSE(app, argc, argv);
  auto want = [&](int n) { return only.empty() || std::find(only.begin(), only.end(), n) != only.end(); };

  std::vector<Corpus> corpus = load_corpus();
  std::vector<Run> runs;
  std::map<int, Line> lines;
  auto timed = [&](int n, auto&& f) {
    if (!want(n)) return;
    std::cerr << "criterion " << n << "\n";
    auto t0 = std::chrono::steady_clock::now();
    lines[n] = f();
    lines[n].detail += " [" + std::to_string(static_cast<int>(since(t0))) + "s]";
  };
  timed(1, [&] { return criterion1(corpus, c1_limit, runs); });
  timed(2, [&] { return criterion2(); });
  timed(3, [&] { return criterion3(); });
  timed(4, [&] { return criterion4(corpus, c4_limit, unrestricted_budget, runs); });
  if (want(5) && want(4)) timed(5, [&] { return criterion5(runs); });
  timed(6, [&] { return criterion6(); });
  timed(7, [&] { return criterion7(corpus); });
  if (want(8) && (want(1) || want(4))) timed(8, [&] { return criterion8(runs); });

  bool all = true;
  for (auto& [n, l] : lines) {
    std::cout << "criterion " << n << ": " << (l.pass ? "PASS" : "FAIL") << "  " << l.detail << "\n";
    all = all && l.pass;
  }
  return all ? 0 : 1;
}
