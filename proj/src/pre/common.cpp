#include "common.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_set>

namespace phz::pre_detail {

std::vector<Base> make_bases(const Constraint& phi, int suffix, int next, TaskRole role) {
  std::vector<Base> out;
  if (!role.is_env()) {
    int t = role.task;
    if (phi.seq[t] != kSeqAny && phi.seq[t] != next) return out;
    Base a{phi, t, BaseKind::Sole};
    a.c.seq[t] = suffix;
    out.push_back(std::move(a));
    Base b{phi, 0, BaseKind::Shared};
    b.x = b.c.add_task(suffix, phi.gap[t]);
    out.push_back(std::move(b));
    return out;
  }
  int np = phi.phasers;
  for (unsigned mask = 0; mask < (1u << np); ++mask) {
    std::vector<Gap> row;
    for (int p = 0; p < np; ++p) {
      if (mask & (1u << p)) {
        row.push_back(Gap{kVarAny, false, phi.egap[p].ew, phi.egap[p].es, kInf, kInf});
      } else {
        row.push_back(Gap::unreg(kVarAny));
      }
    }
    Base e{phi, 0, BaseKind::Env};
    e.x = e.c.add_task(suffix, row);
    out.push_back(std::move(e));
  }
  return out;
}

bool shift_gap(Gap& g, int d) {
  if (g.nreg) return true;
  g.lw = std::max(0, g.lw + d);
  g.ls = std::max(0, g.ls - d);
  g.uw = inf_add(g.uw, d);
  g.us = inf_add(g.us, -d);
  return g.uw >= g.lw && g.us >= g.ls;
}

bool shift_column(Constraint& c, int p, int d, int skip) {
  if (d == 0) return true;
  for (int t = 0; t < c.tasks; ++t)
    if (t != skip && !shift_gap(c.gap[t][p], d)) return false;
  EGap& e = c.egap[p];
  e.ew = std::max(0, e.ew + d);
  e.es = std::max(0, e.es - d);
  return true;
}

void materialize(const Constraint& c, int x, const Gap& xg, std::vector<Constraint>& out) {
  int n = c.tasks;
  std::vector<int> choice(n, 0);
  std::function<void(int)> rec = [&](int r) {
    if (r == n) {
      Constraint m = c;
      std::vector<Gap> col(n);
      for (int t = 0; t < n; ++t) {
        if (t == x) {
          col[t] = xg;
        } else {
          col[t] = choice[t] == 0 ? Gap::unreg(kVarAny) : Gap::free(kVarAny);
        }
      }
      m.add_phaser(EGap{}, col);
      for (int t = 0; t < n; ++t) {
        if (t == x || choice[t] != 2) continue;
        std::vector<Gap> row = m.gap[t];
        row.back() = Gap::unreg(kVarAny);
        m.add_task(m.seq[t], row);
      }
      out.push_back(std::move(m));
      return;
    }
    int options = r == x ? 1 : 3;
    for (int o = 0; o < options; ++o) {
      choice[r] = o;
      rec(r + 1);
    }
  };
  rec(0);
}

void merge_vars(std::vector<Constraint>& set, int nvars) {
  std::unordered_set<Constraint, ConstraintHash> present(set.begin(), set.end());
  // Folds the first complete family of var variants around c; true when one was found.
  auto fold = [&](const Constraint& c) {
    for (int t = 0; t < c.tasks; ++t) {
      for (int p = 0; p < c.phasers; ++p) {
        if (c.gap[t][p].var == kVarAny) continue;
        std::vector<Constraint> members;
        for (int v = kVarNone; v < nvars; ++v) {
          Constraint k = c;
          k.gap[t][p].var = v;
          if (!present.count(k)) break;
          members.push_back(std::move(k));
        }
        if (static_cast<int>(members.size()) != nvars + 1) continue;
        for (const Constraint& m : members) present.erase(m);
        Constraint merged = c;
        merged.gap[t][p].var = kVarAny;
        if (present.insert(merged).second) set.push_back(std::move(merged));
        return true;
      }
    }
    return false;
  };
  // Merged constraints are appended and scanned in turn.
  for (size_t i = 0; i < set.size(); ++i)
    if (present.count(set[i])) fold(Constraint(set[i]));
  std::vector<Constraint> out;
  for (Constraint& c : set)
    if (present.erase(c)) out.push_back(std::move(c));
  set = std::move(out);
}

namespace {

void cond_vars(const Cond& c, std::set<int>& out) {
  if (c.kind == Cond::Var) out.insert(c.var);
  if (c.lhs) cond_vars(*c.lhs, out);
  if (c.rhs) cond_vars(*c.rhs, out);
}

void merge_bv(std::vector<std::vector<std::int8_t>>& set) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < set.size() && !changed; ++i) {
      for (size_t j = i + 1; j < set.size() && !changed; ++j) {
        int diff = -1, count = 0;
        for (size_t b = 0; b < set[i].size(); ++b) {
          if (set[i][b] != set[j][b]) {
            diff = static_cast<int>(b);
            ++count;
          }
        }
        if (count == 0) {
          set.erase(set.begin() + static_cast<long>(j));
          changed = true;
        } else if (count == 1 && set[i][diff] != kBvAny && set[j][diff] != kBvAny) {
          set[i][diff] = kBvAny;
          set.erase(set.begin() + static_cast<long>(j));
          changed = true;
        }
      }
    }
  }
}

}  // namespace

std::vector<std::vector<std::int8_t>> bv_pre(const Program& p, const Stmt& h, Branch br,
                                             const std::vector<std::int8_t>& post) {
  std::vector<std::vector<std::int8_t>> out;
  bool assign = h.kind == StmtKind::Assign;
  bool guarded = assign || h.kind == StmtKind::Assert || h.kind == StmtKind::While || h.kind == StmtKind::If;
  if (!guarded) return {post};
  std::set<int> vs;
  cond_vars(*h.cond, vs);
  std::vector<int> enumerated;
  for (int v : vs)
    if ((assign && v == h.bvar) || post[v] == kBvAny) enumerated.push_back(v);
  std::size_t n = enumerated.size();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::int8_t> pre = post;
    if (assign) pre[h.bvar] = kBvAny;
    for (std::size_t i = 0; i < n; ++i) pre[enumerated[i]] = (mask >> i) & 1u;
    std::vector<bool> val(p.bool_vars.size(), false);
    for (int v : vs) val[v] = pre[v] == 1;
    Outcomes o = eval_cond(*h.cond, val);
    bool ok;
    if (assign) {
      ok = post[h.bvar] == kBvAny || (o & (post[h.bvar] ? kMayTrue : kMayFalse));
    } else if (br == Branch::False) {
      ok = o & kMayFalse;
    } else {
      ok = o & kMayTrue;
    }
    if (ok) out.push_back(std::move(pre));
  }
  merge_bv(out);
  return out;
}

}  // namespace phz::pre_detail
