#include <algorithm>

#include "common.hpp"

namespace phz {

using namespace pre_detail;

namespace {

int max_finite(const Constraint& c, int p) {
  int m = 0;
  for (int t = 0; t < c.tasks; ++t) {
    const Gap& g = c.gap[t][p];
    if (g.nreg) continue;
    if (g.uw < kInf) m = std::max(m, g.uw);
    if (g.us < kInf) m = std::max(m, g.us);
  }
  return m;
}

bool has_finite(const Constraint& c, int p, int skip) {
  for (int t = 0; t < c.tasks; ++t) {
    const Gap& g = c.gap[t][p];
    if (t != skip && !g.nreg && (g.uw < kInf || g.us < kInf)) return true;
  }
  return false;
}

// Every lower bound on the side the shift eats into is already 0.
bool saturated(const Constraint& c, int p, int skip, int d) {
  for (int t = 0; t < c.tasks; ++t) {
    const Gap& g = c.gap[t][p];
    if (t == skip || g.nreg) continue;
    if ((d > 0 ? g.ls : g.lw) > 0) return false;
  }
  return (d > 0 ? c.egap[p].es : c.egap[p].ew) == 0;
}

void signal_wait(const Program&, const Stmt& h, const Base& b, std::vector<Constraint>& out) {
  const Constraint& c = b.c;
  int x = b.x, v = h.pvar;
  bool sig = h.kind == StmtKind::Signal;
  bool named = false;
  for (int p = 0; p < c.phasers; ++p) {
    const Gap& g = c.gap[x][p];
    if (g.var == v) named = true;
    if (g.nreg || (g.var != v && g.var != kVarAny)) continue;
    Gap raw = g;
    raw.var = v;
    if (sig) {
      raw.ls -= 1;
      raw.us = inf_add(raw.us, -1);
    } else {
      raw.lw += 1;
      raw.uw = inf_add(raw.uw, 1);
    }
    for (int d = 0; d >= (raw.ls < 0 ? -1 : 0); --d) {
      Constraint n = c;
      Gap xg = raw;
      if (!shift_gap(xg, d) || !shift_column(n, p, d, x)) continue;
      n.gap[x][p] = xg;
      out.push_back(std::move(n));
    }
  }
  if (!named) materialize(c, x, Gap{v, false, sig ? 0 : 1, 0, kInf, kInf}, out);
}

void drop(const Stmt& h, const Base& b, const PreOptions& opt, std::vector<Constraint>& out) {
  const Constraint& c = b.c;
  int x = b.x, v = h.pvar;
  bool named = false;
  for (int p = 0; p < c.phasers; ++p) {
    const Gap& g = c.gap[x][p];
    if (g.var == v) named = true;
    if (!g.nreg || (g.var != v && g.var != kVarAny)) continue;
    int cap = std::max(opt.shift_cap, max_finite(c, p));
    bool finite = has_finite(c, p, x);
    Constraint base = c;
    base.gap[x][p] = Gap::free(v);
    out.push_back(base);
    for (int dir : {1, -1}) {
      if (!finite && saturated(base, p, x, dir)) continue;
      for (int k = 1;; ++k) {
        Constraint n = c;
        if (!shift_column(n, p, dir * k, x)) break;
        n.gap[x][p] = Gap::free(v);
        if (max_finite(n, p) > cap) break;
        out.push_back(n);
        if (!finite && saturated(n, p, x, dir)) break;
      }
    }
  }
  if (!named) materialize(c, x, Gap::free(v), out);
}

// Variants of the executing task's variables on mapped phasers where '-' may have been v before newPhaser.
void rebind(const Constraint& c, int x, int v, std::vector<Constraint>& out) {
  out.push_back(c);
  for (int p = 0; p < c.phasers; ++p) {
    if (c.gap[x][p].var != kVarNone) continue;
    Constraint n = c;
    n.gap[x][p].var = v;
    out.push_back(std::move(n));
  }
}

void new_phaser(const Stmt& h, const Base& b, std::vector<Constraint>& out) {
  const Constraint& c = b.c;
  int x = b.x, v = h.pvar;
  bool named = false;
  for (int p = 0; p < c.phasers; ++p) named = named || c.gap[x][p].var == v;
  if (!named) rebind(c, x, v, out);
  if (b.kind == BaseKind::Shared) return;
  for (int q = 0; q < c.phasers; ++q) {
    const Gap& g = c.gap[x][q];
    if (g.nreg || (g.var != v && g.var != kVarAny) || g.lw != 0 || g.ls != 0) continue;
    bool ok = true;
    for (int t = 0; t < c.tasks && ok; ++t) {
      if (t == x) continue;
      const Gap& o = c.gap[t][q];
      ok = o.nreg && (o.var == kVarNone || o.var == kVarAny);
    }
    for (int p = 0; p < c.phasers && ok; ++p) ok = p == q || c.gap[x][p].var != v;
    if (!ok) continue;
    Constraint n = c;
    n.remove_phaser(q);
    rebind(n, x, v, out);
  }
}

}  // namespace

void pre_asynch(const Program& p, const Constraint& phi, int suffix, int next, TaskRole role, std::vector<Constraint>& out);

std::vector<Constraint> pre_stmt(const Program& p, const Constraint& phi, int suffix, const Unfold& step, TaskRole role,
                                 const PreOptions& opt) {
  const Stmt* hp = p.head(suffix);
  if (!hp) return {};
  const Stmt& h = *hp;
  if (h.kind == StmtKind::NextBlock) throw AtomicUnsupported();
  std::vector<Constraint> out;
  if (h.kind == StmtKind::Asynch) {
    pre_asynch(p, phi, suffix, step.next, role, out);
  } else {
    std::vector<std::vector<std::int8_t>> bvs = bv_pre(p, h, step.branch, phi.bv);
    for (const Base& b : make_bases(phi, suffix, step.next, role)) {
      switch (h.kind) {
        case StmtKind::Signal:
        case StmtKind::Wait: signal_wait(p, h, b, out); break;
        case StmtKind::Drop: drop(h, b, opt, out); break;
        case StmtKind::NewPhaser: new_phaser(h, b, out); break;
        default:
          for (const auto& bv : bvs) {
            Constraint n = b.c;
            n.bv = bv;
            out.push_back(std::move(n));
          }
      }
    }
  }
  std::erase_if(out, [&](const Constraint& c) { return !c.valid() || (opt.drop_entailed && entails(phi, c)); });
  merge_vars(out, static_cast<int>(p.phaser_vars.size()));
  return minimize(out);
}

std::vector<PreResult> pre_all(const Program& p, const Constraint& phi, const PreOptions& opt) {
  std::vector<PreResult> out;
  for (int s = 1; s < p.suffix_count(); ++s) {
    const Stmt* h = p.head(s);
    for (const Unfold& u : p.head_successors(s)) {
      for (int r = -1; r < phi.tasks; ++r) {
        TaskRole role{r};
        if (!role.is_env() && phi.seq[r] != kSeqAny && phi.seq[r] != u.next) continue;
        for (Constraint& c : pre_stmt(p, phi, s, u, role, opt)) out.push_back({std::move(c), s, h->id, r});
      }
    }
  }
  return out;
}

bool preserves_freeness_check(const Constraint& phi_pre, const Constraint& phi, const Stmt&) {
  return !phi.is_free() || phi_pre.is_free();
}

}  // namespace phz
