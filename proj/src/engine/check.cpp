#include <algorithm>
#include <chrono>
#include <cstdint>
#include <deque>
#include <thread>

#include "phz/engine.hpp"

namespace phz {

const char* verdict_name(CheckResult::Verdict v) {
  switch (v) {
    case CheckResult::Reachable: return "reachable";
    case CheckResult::Unreachable: return "unreachable";
    case CheckResult::BudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

int default_K(const Program& p, int task_bound) {
  int best = 1;
  for (const TaskDef& t : p.tasks) {
    int n = 0;
    std::vector<int> work = t.body;
    while (!work.empty()) {
      const Stmt& s = p.stmts[work.back()];
      work.pop_back();
      if (s.kind == StmtKind::NewPhaser) ++n;
      work.insert(work.end(), s.body.begin(), s.body.end());
    }
    best = std::max(best, n);
  }
  return best * task_bound;
}

bool is_antichain(const std::vector<Constraint>& store) {
  for (size_t i = 0; i < store.size(); ++i)
    for (size_t j = 0; j < store.size(); ++j)
      if (i != j && entails(store[i], store[j])) return false;
  return true;
}

namespace {

struct Node {
  Constraint phi;
  int parent = -1;
  int stmt = -1;
  int suffix = -1;
  int next = -1;
  bool alive = true;
  std::uint64_t seqs = 0;  // bit per fixed control suffix, modulo 64
};

std::uint64_t seq_signature(const Constraint& c) {
  std::uint64_t m = 0;
  for (int s : c.seq)
    if (s != kSeqAny) m |= std::uint64_t{1} << (s % 64);
  return m;
}

// Necessary conditions for entails(a, b).
bool may_entail(const Node& a, const Node& b) {
  return a.phi.tasks <= b.phi.tasks && a.phi.phasers <= b.phi.phasers && (a.seqs & ~b.seqs) == 0;
}

struct Candidate {
  Constraint phi;
  int stmt, suffix, next;
};

bool admitted(const Constraint& c, const Strategy& s) {
  switch (s.kind) {
    case Strategy::Control: return c.phasers <= s.K;
    case Strategy::Plain: return c.phasers <= s.K && c.is_b_good(s.B);
    case Strategy::Unrestricted: return true;
  }
  return true;
}

// Predecessors for every suffix in [lo, hi), in suffix order.
void expand_range(const Program& p, const Constraint& phi, const PreOptions& opt, int lo, int hi,
                  std::vector<Candidate>& out) {
  for (int s = lo; s < hi; ++s) {
    const Stmt* h = p.head(s);
    for (const Unfold& u : p.head_successors(s)) {
      for (int r = -1; r < phi.tasks; ++r) {
        if (r >= 0 && phi.seq[r] != kSeqAny && phi.seq[r] != u.next) continue;
        for (Constraint& c : pre_stmt(p, phi, s, u, TaskRole{r}, opt)) out.push_back({std::move(c), h->id, s, u.next});
      }
    }
  }
}

std::vector<Candidate> expand(const Program& p, const Constraint& phi, const PreOptions& opt, int jobs) {
  int n = p.suffix_count();
  std::vector<Candidate> out;
  if (jobs <= 1) {
    expand_range(p, phi, opt, 1, n, out);
    return out;
  }
  std::vector<std::vector<Candidate>> parts(jobs);
  std::vector<std::thread> pool;
  int chunk = (n - 1 + jobs - 1) / jobs;
  for (int j = 0; j < jobs; ++j) {
    int lo = 1 + j * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, j, lo, hi] { expand_range(p, phi, opt, lo, hi, parts[j]); });
  }
  for (auto& t : pool) t.join();
  for (auto& part : parts)
    for (auto& c : part) out.push_back(std::move(c));
  return out;
}

Trace build_trace(const std::vector<Node>& nodes, int id) {
  Trace tr;
  for (int i = id; i >= 0; i = nodes[i].parent) {
    const Node& n = nodes[i];
    tr.steps.push_back({n.phi, n.stmt, n.suffix, n.next});
  }
  return tr;
}

}  // namespace

CheckResult check(const Program& p, const std::vector<Constraint>& targets, const Strategy& s, const CheckOptions& opt) {
  if (p.has_atomic()) throw AtomicUnsupported();
  if (!p.sig_wait_only()) throw ModeUnsupported();
  for (const Constraint& t : targets) {
    if (s.kind == Strategy::Control && !t.is_free()) throw TargetNotFree();
    if (s.kind == Strategy::Plain && !t.is_b_good(s.B)) throw TargetNotBGood(s.B);
  }
  PreOptions popt;
  popt.shift_cap = s.kind == Strategy::Plain ? s.B : PreOptions{}.shift_cap;
  popt.drop_entailed = true;

  auto start = std::chrono::steady_clock::now();
  CheckResult res;
  CheckStats& st = res.stats;
  Config init = initial_config(p);
  std::vector<Node> nodes;
  std::deque<int> working;
  for (Constraint& t : minimize(targets)) {
    if (!admitted(t, s)) {
      ++st.pruned;
      continue;
    }
    st.max_dimension = std::max(st.max_dimension, t.phasers);
    nodes.push_back({std::move(t)});
    nodes.back().seqs = seq_signature(nodes.back().phi);
    working.push_back(static_cast<int>(nodes.size()) - 1);
  }
  auto finish = [&] {
    st.visited = static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.alive; }));
    if (opt.keep_store)
      for (const Node& n : nodes)
        if (n.alive) res.store.push_back(n.phi);
  };
  auto report = [&] {
    if (!opt.on_progress) return;
    Progress pr;
    pr.iteration = st.iterations;
    pr.working = working.size();
    for (const Node& n : nodes) {
      if (!n.alive) continue;
      ++pr.visited;
      if (static_cast<int>(pr.dimensions.size()) <= n.phi.phasers) pr.dimensions.resize(n.phi.phasers + 1);
      ++pr.dimensions[n.phi.phasers];
    }
    opt.on_progress(pr);
  };

  while (!working.empty()) {
    int id = working.front();
    working.pop_front();
    if (!nodes[id].alive) continue;
    if (models(init, nodes[id].phi)) {
      res.verdict = CheckResult::Reachable;
      res.trace = build_trace(nodes, id);
      finish();
      return res;
    }
    bool out_of_time =
        opt.time_limit > 0 && std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > opt.time_limit;
    if ((s.budget > 0 && st.iterations >= s.budget) || out_of_time) {
      res.verdict = CheckResult::BudgetExhausted;
      finish();
      return res;
    }
    ++st.iterations;
    Constraint phi = nodes[id].phi;
    for (Candidate& c : expand(p, phi, popt, opt.jobs)) {
      ++st.generated;
      if (!admitted(c.phi, s)) {
        ++st.pruned;
        continue;
      }
      if (s.kind == Strategy::Control && !preserves_freeness_check(c.phi, phi, p.stmts[c.stmt])) ++st.freeness_violations;
      Node cand{std::move(c.phi), id, c.stmt, c.suffix, c.next};
      cand.seqs = seq_signature(cand.phi);
      bool covered = false;
      for (const Node& n : nodes)
        if (n.alive && may_entail(n, cand) && entails(n.phi, cand.phi)) {
          covered = true;
          break;
        }
      if (covered) {
        ++st.subsumed;
        continue;
      }
      for (Node& n : nodes)
        if (n.alive && may_entail(cand, n) && entails(cand.phi, n.phi)) {
          n.alive = false;
          ++st.evicted;
        }
      st.max_dimension = std::max(st.max_dimension, cand.phi.phasers);
      nodes.push_back(std::move(cand));
      working.push_back(static_cast<int>(nodes.size()) - 1);
    }
    if (opt.progress_every > 0 && st.iterations % opt.progress_every == 0) report();
    if (opt.verify_store) {
      std::vector<Constraint> store;
      for (const Node& n : nodes)
        if (n.alive) store.push_back(n.phi);
      if (!is_antichain(store)) ++st.store_violations;
    }
  }
  if (opt.progress_every > 0) report();
  res.verdict = CheckResult::Unreachable;
  finish();
  return res;
}

}  // namespace phz
