#include <algorithm>
#include <functional>

#include "common.hpp"

namespace phz {

using namespace pre_detail;

namespace {

Gap intersect(Gap a, const Gap& b) {
  a.lw = std::max(a.lw, b.lw);
  a.ls = std::max(a.ls, b.ls);
  a.uw = std::min(a.uw, b.uw);
  a.us = std::min(a.us, b.us);
  return a;
}

std::vector<std::vector<Gap>> env_rows(const Constraint& phi) {
  std::vector<std::vector<Gap>> rows;
  for (unsigned mask = 0; mask < (1u << phi.phasers); ++mask) {
    std::vector<Gap> row;
    for (int p = 0; p < phi.phasers; ++p)
      row.push_back(mask & (1u << p) ? Gap{kVarAny, false, phi.egap[p].ew, phi.egap[p].es, kInf, kInf}
                                     : Gap::unreg(kVarAny));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void pre_asynch(const Program& p, const Constraint& phi, int suffix, int next, TaskRole role, std::vector<Constraint>& out) {
  const Stmt& h = *p.head(suffix);
  const TaskDef& callee = p.tasks[h.task];
  int entry = p.task_entry(h.task);
  int nv = static_cast<int>(p.phaser_vars.size());
  int np = phi.phasers;
  int t = role.task;
  if (!role.is_env() && phi.seq[t] != kSeqAny && phi.seq[t] != next) return;
  std::vector<std::vector<Gap>> xrows = role.is_env() ? env_rows(phi) : std::vector<std::vector<Gap>>{phi.gap[t]};
  auto arg_index = [&](int var) {
    auto it = std::find(h.args.begin(), h.args.end(), var);
    return it == h.args.end() ? -1 : static_cast<int>(it - h.args.begin());
  };

  for (int yr = -1; yr < phi.tasks; ++yr) {
    if (yr >= 0 && phi.seq[yr] != kSeqAny && phi.seq[yr] != entry) continue;
    for (int kept_y = 0; kept_y < (yr < 0 ? 1 : 2); ++kept_y) {
      for (const auto& X : xrows) {
        for (int kept_x = 0; kept_x < (role.is_env() ? 1 : 2); ++kept_x) {
          if (!role.is_env() && t == yr && kept_x != kept_y) continue;
          std::vector<int> xv(np);
          std::function<void(int)> rec = [&](int q) {
            if (q < np) {
              if (X[q].var != kVarAny) {
                xv[q] = X[q].var;
                rec(q + 1);
                return;
              }
              for (int v = kVarNone; v < nv; ++v) {
                xv[q] = v;
                rec(q + 1);
              }
              return;
            }
            std::vector<Gap> row(np);
            for (int j = 0; j < np; ++j) {
              Gap g = X[j];
              g.var = xv[j];
              int i = xv[j] >= 0 ? arg_index(xv[j]) : -1;
              if (yr >= 0) {
                const Gap& yg = phi.gap[yr][j];
                if (i >= 0) {
                  if (yg.var != kVarAny && yg.var != callee.params[i]) return;
                  if (yg.nreg != g.nreg) return;
                  if (!g.nreg) g = intersect(g, yg);
                } else if (!yg.nreg || (yg.var != kVarAny && yg.var != kVarNone)) {
                  return;
                }
              } else if (i >= 0 && !g.nreg) {
                g = intersect(g, Gap{kVarAny, false, phi.egap[j].ew, phi.egap[j].es, kInf, kInf});
              }
              if (!g.valid()) return;
              row[j] = g;
            }
            Constraint n = phi;
            bool replace = !role.is_env() && !kept_x;
            if (replace) {
              n.seq[t] = suffix;
              n.gap[t] = row;
            } else {
              n.add_task(suffix, row);
            }
            if (yr >= 0 && !kept_y && !(replace && t == yr)) n.remove_task(yr);
            out.push_back(std::move(n));
          };
          rec(0);
        }
      }
    }
  }
}

}  // namespace phz
