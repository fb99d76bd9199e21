#include <algorithm>
#include <deque>
#include <unordered_set>

#include "phz/concrete.hpp"

namespace phz {

std::size_t Config::hash() const {
  std::size_t h = 1469598103934665603ull;
  auto mix = [&](std::size_t x) { h = (h ^ x) * 1099511628211ull; };
  for (bool b : bv) mix(b);
  for (int s : seq) mix(static_cast<std::size_t>(s) + 7);
  mix(static_cast<std::size_t>(phasers));
  for (const auto& row : phase) {
    for (const auto& e : row) {
      mix(static_cast<std::size_t>(e.var + 2));
      mix(e.reg);
      if (e.reg) {
        mix(static_cast<std::size_t>(e.mode));
        mix(static_cast<std::size_t>(e.w));
        mix(static_cast<std::size_t>(e.s));
      }
    }
  }
  return h;
}

int Config::bound(int t, int v) const {
  for (int q = 0; q < phasers; ++q)
    if (phase[t][q].var == v) return q;
  return -1;
}

bool Config::well_formed() const {
  for (int t = 0; t < tasks(); ++t) {
    std::vector<int> seen;
    for (int q = 0; q < phasers; ++q) {
      const PhaseEntry& e = phase[t][q];
      if (e.var >= 0) {
        if (std::find(seen.begin(), seen.end(), e.var) != seen.end()) return false;
        seen.push_back(e.var);
      }
      if (e.reg && (e.w < 0 || e.w > e.s)) return false;
    }
  }
  for (int q = 0; q < phasers; ++q) {
    for (int x = 0; x < tasks(); ++x) {
      const PhaseEntry& ex = phase[x][q];
      if (!ex.reg || ex.mode == Mode::Sig) continue;
      for (int y = 0; y < tasks(); ++y) {
        const PhaseEntry& ey = phase[y][q];
        if (ey.reg && ey.mode != Mode::Wait && ex.w > ey.s) return false;
      }
    }
  }
  return true;
}

Config initial_config(const Program& p) {
  Config c;
  c.bv.assign(p.bool_vars.size(), false);
  c.seq.push_back(p.task_entry(p.main_task));
  c.phase.emplace_back();
  return c;
}

namespace {

bool guard_holds(const Config& c, int t, int q) {
  int w = c.phase[t][q].w;
  for (int u = 0; u < c.tasks(); ++u) {
    const PhaseEntry& e = c.phase[u][q];
    if (e.reg && e.mode != Mode::Wait && e.s <= w) return false;
  }
  return true;
}

Succ error_succ(int t, const Stmt& h, ErrorKind::Kind k, int value = -1) {
  Succ s{t, h.id, Branch::Pop, value, std::nullopt, ErrorKind{k, t, h.id, h.pvar, {}}};
  return s;
}

void run_atomic(const Program& p, const Config& start, int t, int target, std::vector<Succ>& out, int nb_stmt) {
  std::deque<Config> work{start};
  std::unordered_set<Config, ConfigHash> seen{start};
  std::unordered_set<Config, ConfigHash> done;
  while (!work.empty() && seen.size() < 10000) {
    Config c = std::move(work.front());
    work.pop_front();
    if (c.seq[t] == target || c.seq[t] == 0) {
      if (done.insert(c).second) out.push_back({t, nb_stmt, Branch::Executor, t, c, std::nullopt});
      continue;
    }
    for (Succ& s : task_steps(p, c, t)) {
      if (s.error) {
        s.stmt = nb_stmt;
        out.push_back(std::move(s));
      } else if (seen.insert(*s.next).second) {
        work.push_back(std::move(*s.next));
      }
    }
  }
}

}  // namespace

bool blocked_at_wait(const Program& p, const Config& c, int t) {
  const Stmt* h = p.head(c.seq[t]);
  if (!h || h->kind != StmtKind::Wait) return false;
  int q = c.bound(t, h->pvar);
  if (q < 0 || !c.phase[t][q].reg || c.phase[t][q].mode == Mode::Sig) return false;
  return !guard_holds(c, t, q);
}

std::vector<Succ> task_steps(const Program& p, const Config& c, int t) {
  std::vector<Succ> out;
  int s = c.seq[t];
  const Stmt* hp = p.head(s);
  if (!hp) return out;
  const Stmt& h = *hp;
  auto with = [&](Branch br, int value, Config n) { out.push_back({t, h.id, br, value, std::move(n), std::nullopt}); };
  auto popped = [&]() {
    Config n = c;
    n.seq[t] = p.tail(s);
    return n;
  };
  switch (h.kind) {
    case StmtKind::NewPhaser: {
      Config n = popped();
      for (auto& e : n.phase[t])
        if (e.var == h.pvar) e.var = -1;
      for (auto& row : n.phase) row.push_back(PhaseEntry{});
      n.phase[t][n.phasers] = PhaseEntry{h.pvar, true, h.mode, 0, 0};
      ++n.phasers;
      with(Branch::Pop, -1, std::move(n));
      break;
    }
    case StmtKind::Asynch: {
      const TaskDef& callee = p.tasks[h.task];
      std::vector<PhaseEntry> row(c.phasers);
      for (size_t i = 0; i < h.args.size(); ++i) {
        int q = c.bound(t, h.args[i]);
        if (q < 0) {
          Succ e = error_succ(t, h, ErrorKind::Registration);
          e.error->var = h.args[i];
          out.push_back(e);
          return out;
        }
        const PhaseEntry& src = c.phase[t][q];
        PhaseEntry ne;
        ne.var = callee.params[i];
        ne.reg = src.reg;
        if (src.reg) {
          ne.mode = h.arg_mode_given[i] ? h.arg_modes[i] : callee.modes[i];
          ne.w = src.w;
          ne.s = ne.mode == Mode::Wait ? src.w : src.s;
        }
        row[q] = ne;
      }
      Config n = popped();
      n.seq.push_back(p.task_entry(h.task));
      n.phase.push_back(std::move(row));
      with(Branch::Pop, -1, std::move(n));
      break;
    }
    case StmtKind::Drop:
    case StmtKind::Signal:
    case StmtKind::Wait: {
      int q = c.bound(t, h.pvar);
      if (q < 0 || !c.phase[t][q].reg) {
        out.push_back(error_succ(t, h, ErrorKind::Registration));
        break;
      }
      const PhaseEntry& e = c.phase[t][q];
      if ((h.kind == StmtKind::Signal && e.mode == Mode::Wait) || (h.kind == StmtKind::Wait && e.mode == Mode::Sig)) {
        out.push_back(error_succ(t, h, ErrorKind::Registration));
        break;
      }
      if (h.kind == StmtKind::Wait && !guard_holds(c, t, q)) break;
      Config n = popped();
      PhaseEntry& ne = n.phase[t][q];
      if (h.kind == StmtKind::Drop) {
        ne = PhaseEntry{ne.var, false, Mode::SigWait, 0, 0};
      } else if (h.kind == StmtKind::Signal) {
        ++ne.s;
      } else {
        ++ne.w;
        if (ne.mode == Mode::Wait) ne.s = ne.w;
      }
      with(Branch::Pop, -1, std::move(n));
      break;
    }
    case StmtKind::Assign: {
      Outcomes o = eval_cond(*h.cond, c.bv);
      for (int v = 0; v < 2; ++v) {
        if (!(o & (v ? kMayTrue : kMayFalse))) continue;
        Config n = popped();
        n.bv[h.bvar] = v != 0;
        with(Branch::Pop, v, std::move(n));
      }
      break;
    }
    case StmtKind::Assert: {
      Outcomes o = eval_cond(*h.cond, c.bv);
      if (o & kMayFalse) out.push_back(error_succ(t, h, ErrorKind::Assertion, 0));
      if (o & kMayTrue) with(Branch::Pop, 1, popped());
      break;
    }
    case StmtKind::While:
    case StmtKind::If: {
      Outcomes o = eval_cond(*h.cond, c.bv);
      for (const Unfold& u : p.head_successors(s)) {
        if (!(o & (u.branch == Branch::True ? kMayTrue : kMayFalse))) continue;
        Config n = c;
        n.seq[t] = u.next;
        with(u.branch, u.branch == Branch::True ? 1 : 0, std::move(n));
      }
      break;
    }
    case StmtKind::Exit: {
      Config n = c;
      n.seq[t] = 0;
      with(Branch::Pop, -1, std::move(n));
      break;
    }
    case StmtKind::NextBlock: {
      if (h.body.empty()) {
        Config n = c;
        n.seq[t] = p.expand_barrier(s);
        with(Branch::Pop, -1, std::move(n));
        break;
      }
      int q = c.bound(t, h.pvar);
      if (q < 0 || !c.phase[t][q].reg) {
        out.push_back(error_succ(t, h, ErrorKind::Registration));
        break;
      }
      for (int u = 0; u < c.tasks(); ++u) {
        if (!c.phase[u][q].reg) continue;
        const Stmt* hu = p.head(c.seq[u]);
        if (!hu || hu->id != h.id) return out;
      }
      Config n = c;
      for (int u = 0; u < c.tasks(); ++u)
        if (u != t && c.phase[u][q].reg) n.seq[u] = p.barrier_suffix(c.seq[u]);
      int target = p.barrier_suffix(s);
      for (const Unfold& uf : p.head_successors(s))
        if (uf.branch == Branch::Executor) n.seq[t] = uf.next;
      run_atomic(p, n, t, target, out, h.id);
      break;
    }
  }
  return out;
}

std::vector<Succ> all_steps(const Program& p, const Config& c) {
  std::vector<Succ> out;
  for (int t = 0; t < c.tasks(); ++t) {
    auto st = task_steps(p, c, t);
    for (auto& s : st) out.push_back(std::move(s));
  }
  return out;
}

std::vector<Step> enabled_steps(const Program& p, const Config& c) {
  std::vector<Step> out;
  for (int t = 0; t < c.tasks(); ++t) {
    auto st = task_steps(p, c, t);
    if (!st.empty()) out.push_back({t, st.front().stmt});
  }
  return out;
}

Succ apply_step(const Program& p, const Config& c, int t, int choice) {
  auto st = task_steps(p, c, t);
  return st.at(static_cast<size_t>(choice));
}

std::vector<int> cyclic_wait(const Program& p, const Config& c) {
  int n = c.tasks();
  std::vector<int> wq(n, -1);
  for (int t = 0; t < n; ++t)
    if (blocked_at_wait(p, c, t)) wq[t] = c.bound(t, p.head(c.seq[t])->pvar);
  std::vector<std::vector<int>> adj(n);
  for (int t = 0; t < n; ++t) {
    if (wq[t] < 0) continue;
    int q = wq[t];
    for (int u = 0; u < n; ++u) {
      const PhaseEntry& e = c.phase[u][q];
      if (wq[u] >= 0 && e.reg && e.mode != Mode::Wait && e.s <= c.phase[t][q].w) adj[t].push_back(u);
    }
  }
  std::vector<int> best;
  for (int start = 0; start < n; ++start) {
    if (wq[start] < 0) continue;
    std::vector<int> par(n, -2);
    std::deque<int> dq{start};
    par[start] = -1;
    bool found = false;
    while (!dq.empty() && !found) {
      int x = dq.front();
      dq.pop_front();
      for (int y : adj[x]) {
        if (y == start) {
          std::vector<int> cyc;
          for (int z = x; z != -1; z = par[z]) cyc.push_back(z);
          std::reverse(cyc.begin(), cyc.end());
          if (best.empty() || cyc.size() < best.size()) best = cyc;
          found = true;
          break;
        }
        if (par[y] == -2) {
          par[y] = x;
          dq.push_back(y);
        }
      }
    }
  }
  return best;
}

Config normalize(const Config& c) {
  Config n = c;
  for (int q = 0; q < c.phasers; ++q) {
    int m = -1;
    for (int t = 0; t < c.tasks(); ++t) {
      const PhaseEntry& e = c.phase[t][q];
      if (e.reg && (m < 0 || e.w < m)) m = e.w;
    }
    if (m <= 0) continue;
    for (int t = 0; t < c.tasks(); ++t) {
      PhaseEntry& e = n.phase[t][q];
      if (e.reg) {
        e.w -= m;
        e.s -= m;
      }
    }
  }
  return n;
}

}  // namespace phz
