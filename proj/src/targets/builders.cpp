#include <functional>
#include <set>

#include "phz/targets.hpp"

namespace phz {

namespace {

void cond_vars(const Cond& c, std::set<int>& out) {
  if (c.kind == Cond::Var) out.insert(c.var);
  if (c.lhs) cond_vars(*c.lhs, out);
  if (c.rhs) cond_vars(*c.rhs, out);
}

std::vector<int> suffixes_headed_by(const Program& p, std::initializer_list<StmtKind> kinds) {
  std::vector<int> out;
  for (int s = 1; s < p.suffix_count(); ++s) {
    const Stmt* h = p.head(s);
    if (!h) continue;
    for (StmtKind k : kinds)
      if (h->kind == k) out.push_back(s);
  }
  return out;
}

}  // namespace

std::vector<Constraint> assertion_targets(const Program& p) {
  std::vector<Constraint> out;
  int nb = static_cast<int>(p.bool_vars.size());
  for (int s : suffixes_headed_by(p, {StmtKind::Assert})) {
    const Stmt& h = *p.head(s);
    std::set<int> vs;
    cond_vars(*h.cond, vs);
    std::vector<int> vars(vs.begin(), vs.end());
    int k = static_cast<int>(vars.size());
    // Partial valuations over the condition's variables, each position 0, 1 or unknown.
    int total = 1;
    for (int i = 0; i < k; ++i) total *= 3;
    for (int code = 0; code < total; ++code) {
      std::vector<std::int8_t> part(k);
      int x = code;
      for (int i = 0; i < k; ++i, x /= 3) part[i] = static_cast<std::int8_t>(x % 3);
      bool all_fail = true;
      for (unsigned bits = 0; bits < (1u << k) && all_fail; ++bits) {
        std::vector<bool> bv(nb, false);
        bool consistent = true;
        for (int i = 0; i < k; ++i) {
          bool v = (bits >> i) & 1u;
          if (part[i] != kBvAny && part[i] != v) consistent = false;
          bv[vars[i]] = v;
        }
        if (consistent && !(eval_cond(*h.cond, bv) & kMayFalse)) all_fail = false;
      }
      if (!all_fail) continue;
      Constraint c = top_constraint(p);
      for (int i = 0; i < k; ++i) c.bv[vars[i]] = part[i];
      c.add_task(s, {});
      out.push_back(std::move(c));
    }
  }
  return minimize(out);
}

std::vector<Constraint> registration_error_targets(const Program& p) {
  std::vector<Constraint> out;
  for (int s : suffixes_headed_by(p, {StmtKind::Signal, StmtKind::Wait, StmtKind::Drop})) {
    Constraint c = top_constraint(p);
    c.add_phaser(EGap{}, {});
    c.add_task(s, {Gap::unreg(p.head(s)->pvar)});
    out.push_back(std::move(c));
  }
  return minimize(out);
}

std::vector<Constraint> cyclic_wait_targets(const Program& p, int n, int b) {
  if (n < 1) throw std::invalid_argument("cycle length bound must be at least 1");
  std::vector<int> waits = suffixes_headed_by(p, {StmtKind::Wait});
  std::vector<Constraint> out;
  // Values for an unpinned component: {-1} stands for unbounded.
  std::vector<int> free_vals;
  if (b < 0) {
    free_vals.push_back(-1);
  } else {
    for (int v = 0; v <= b; ++v) free_vals.push_back(v);
  }
  for (int m = 1; m <= n; ++m) {
    std::vector<int> at(m);
    std::function<void(int)> pick_suffix = [&](int i) {
      if (i < m) {
        for (int s : waits) {
          at[i] = s;
          pick_suffix(i + 1);
        }
        return;
      }
      // Cell (i, j) is slot i*m + j. Edge cells get a value index, others a registration bit.
      int cells = m * m;
      std::vector<int> choice(cells, 0);
      auto radix = [&](int i2, int j) -> int {
        if (m == 1) return 1;
        if (i2 == j || i2 == (j + 1) % m) return static_cast<int>(free_vals.size());
        return 2;
      };
      for (;;) {
        Constraint c = top_constraint(p);
        for (int j = 0; j < m; ++j) c.add_phaser(EGap{}, {});
        for (int i2 = 0; i2 < m; ++i2) {
          std::vector<Gap> row;
          for (int j = 0; j < m; ++j) {
            int ch = choice[i2 * m + j];
            Gap g;
            if (m == 1) {
              g = Gap::pinned(p.head(at[0])->pvar, 0, 0);
            } else if (i2 == j) {
              int v = free_vals[ch];
              g = Gap{p.head(at[i2])->pvar, false, 0, v < 0 ? 0 : v, 0, v < 0 ? kInf : v};
            } else if (i2 == (j + 1) % m) {
              int v = free_vals[ch];
              g = Gap{kVarAny, false, v < 0 ? 0 : v, 0, v < 0 ? kInf : v, 0};
            } else {
              g = ch == 0 ? Gap::unreg(kVarAny) : Gap::free(kVarAny);
            }
            row.push_back(g);
          }
          c.add_task(at[i2], row);
        }
        out.push_back(std::move(c));
        int k = 0;
        while (k < cells && ++choice[k] >= radix(k / m, k % m)) choice[k++] = 0;
        if (k == cells) break;
      }
    };
    pick_suffix(0);
  }
  return minimize(out);
}

std::vector<Constraint> from_partial_config(const Program& p, const PartialConfig& pc) {
  Constraint base = top_constraint(p);
  for (size_t i = 0; i < pc.bv.size() && i < base.bv.size(); ++i) base.bv[i] = pc.bv[i];
  std::vector<int> level(pc.phasers, 0);
  for (int j = 0; j < pc.phasers; ++j) {
    base.add_phaser(EGap{}, {});
    for (int t = 0; t < pc.tasks; ++t) {
      const auto& e = pc.phase[t][j];
      if (e && e->val == PartialEntry::Pair && e->w >= 0) level[j] = std::max(level[j], e->w);
    }
  }
  auto var_of = [](int v) { return v == -2 ? kVarAny : v; };
  // Undefined entries become a choice between registered and unregistered.
  std::vector<std::pair<int, int>> open;
  std::vector<std::vector<Gap>> rows(pc.tasks, std::vector<Gap>(pc.phasers));
  for (int t = 0; t < pc.tasks; ++t) {
    for (int j = 0; j < pc.phasers; ++j) {
      const auto& e = pc.phase[t][j];
      Gap& g = rows[t][j];
      if (!e) {
        open.emplace_back(t, j);
        continue;
      }
      g.var = var_of(e->var);
      if (e->val == PartialEntry::Nreg) {
        g.nreg = true;
        continue;
      }
      if (e->w >= 0) g.lw = g.uw = level[j] - e->w;
      if (e->s >= 0) {
        if (e->s < level[j]) return {};
        g.ls = g.us = e->s - level[j];
      }
    }
  }
  std::vector<Constraint> out;
  for (unsigned bits = 0; bits < (1u << open.size()); ++bits) {
    Constraint c = base;
    auto r = rows;
    for (size_t k = 0; k < open.size(); ++k) {
      auto [t, j] = open[k];
      r[t][j] = (bits >> k) & 1u ? Gap::unreg(kVarAny) : Gap::free(kVarAny);
    }
    for (int t = 0; t < pc.tasks; ++t) c.add_task(pc.seq[t] < 0 ? kSeqAny : pc.seq[t], r[t]);
    out.push_back(std::move(c));
  }
  return minimize(out);
}

}  // namespace phz
