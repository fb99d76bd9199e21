#include "oracle.hpp"

#include <algorithm>
#include <functional>

namespace phz::oracle {

namespace {

struct Row {
  int seq;
  std::vector<PhaseEntry> phase;
};

std::vector<std::vector<PhaseEntry>> phase_rows(const Universe& u, int phasers) {
  std::vector<PhaseEntry> entries;
  for (int v : u.vars) {
    entries.push_back(PhaseEntry{v, false, Mode::SigWait, 0, 0});
    for (int w = 0; w <= u.max_phase; ++w)
      for (int s = w; s <= u.max_phase; ++s) entries.push_back(PhaseEntry{v, true, Mode::SigWait, w, s});
  }
  std::vector<std::vector<PhaseEntry>> rows{{}};
  for (int q = 0; q < phasers; ++q) {
    std::vector<std::vector<PhaseEntry>> next;
    for (const auto& r : rows)
      for (const auto& e : entries) {
        auto n = r;
        n.push_back(e);
        next.push_back(std::move(n));
      }
    rows = std::move(next);
  }
  return rows;
}

bool normalized(const Config& c) {
  for (int q = 0; q < c.phasers; ++q) {
    int m = -1;
    for (int t = 0; t < c.tasks(); ++t) {
      const PhaseEntry& e = c.phase[t][q];
      if (e.reg && (m < 0 || e.w < m)) m = e.w;
    }
    if (m > 0) return false;
  }
  return true;
}

}  // namespace

bool binds_args(const Config& c, const Stmt& h, int suffix) {
  for (int t = 0; t < c.tasks(); ++t) {
    if (c.seq[t] != suffix) continue;
    for (int a : h.args)
      if (c.bound(t, a) < 0) return false;
  }
  return true;
}

std::vector<Config> enumerate(const Program& p, const Universe& u) {
  std::vector<Config> out;
  int nb = static_cast<int>(p.bool_vars.size());
  for (int np = 0; np <= u.max_phasers; ++np) {
    auto prow = phase_rows(u, np);
    std::vector<Row> rows;
    for (int s : u.seqs)
      for (const auto& r : prow) rows.push_back({s, r});
    for (unsigned bits = 0; bits < (1u << nb); ++bits) {
      Config base;
      base.phasers = np;
      for (int b = 0; b < nb; ++b) base.bv.push_back((bits >> b) & 1u);
      std::vector<int> pick;
      std::function<void(int)> rec = [&](int lo) {
        // pick[0] indexes the first task's row; later ones are nondecreasing.
        Config c = base;
        for (int i : pick) {
          c.seq.push_back(rows[i].seq);
          c.phase.push_back(rows[i].phase);
        }
        if (!pick.empty() && c.well_formed() && normalized(c)) out.push_back(c);
        if (static_cast<int>(pick.size()) == u.max_tasks) return;
        int start = pick.size() <= 1 ? 0 : lo;
        for (int i = start; i < static_cast<int>(rows.size()); ++i) {
          if (pick.empty() && u.first_seq >= 0 && rows[i].seq != u.first_seq) continue;
          pick.push_back(i);
          rec(i);
          pick.pop_back();
        }
      };
      rec(0);
    }
  }
  return out;
}

Constraint random_constraint(const Program& p, const GenParams& g, std::mt19937& rng) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  Constraint c;
  for (size_t b = 0; b < p.bool_vars.size(); ++b) c.bv.push_back(static_cast<std::int8_t>(pick(3)));
  int np = pick(g.max_phasers + 1), nt = pick(g.max_tasks + 1);
  for (int q = 0; q < np; ++q) c.add_phaser(EGap{pick(g.max_egap + 1), pick(g.max_egap + 1)}, {});
  for (int t = 0; t < nt; ++t) {
    std::vector<Gap> row;
    for (int q = 0; q < np; ++q) {
      Gap gp;
      gp.var = pick(2) ? kVarAny : g.vars[pick(static_cast<int>(g.vars.size()))];
      if (pick(4) == 0) {
        gp.nreg = true;
      } else {
        gp.lw = pick(g.max_bound + 1);
        gp.ls = pick(g.max_bound + 1);
        gp.uw = pick(2) ? kInf : gp.lw + pick(g.max_bound + 1);
        gp.us = pick(2) ? kInf : gp.ls + pick(g.max_bound + 1);
      }
      row.push_back(gp);
    }
    int seq = pick(3) == 0 ? kSeqAny : g.seqs[pick(static_cast<int>(g.seqs.size()))];
    c.add_task(seq, row);
  }
  return c;
}

Config random_config(const Program& p, const Universe& u, std::mt19937& rng) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  for (;;) {
    Config c;
    for (size_t b = 0; b < p.bool_vars.size(); ++b) c.bv.push_back(pick(2));
    c.phasers = pick(u.max_phasers + 1);
    int nt = 1 + pick(u.max_tasks);
    for (int t = 0; t < nt; ++t) {
      c.seq.push_back(u.seqs[pick(static_cast<int>(u.seqs.size()))]);
      std::vector<PhaseEntry> row;
      for (int q = 0; q < c.phasers; ++q) {
        PhaseEntry e;
        e.var = u.vars[pick(static_cast<int>(u.vars.size()))];
        e.reg = pick(3) != 0;
        if (e.reg) {
          e.w = pick(u.max_phase + 1);
          e.s = e.w + pick(u.max_phase - e.w + 1);
        }
        row.push_back(e);
      }
      c.phase.push_back(std::move(row));
    }
    if (c.well_formed()) return c;
  }
}

Constraint weaken(const Constraint& phi, std::mt19937& rng) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  Constraint c = phi;
  for (int n = 1 + pick(3); n > 0; --n) {
    switch (pick(6)) {
      case 0:
        if (!c.bv.empty()) c.bv[pick(static_cast<int>(c.bv.size()))] = kBvAny;
        break;
      case 1:
        if (c.tasks) c.seq[pick(c.tasks)] = kSeqAny;
        break;
      case 2:
        if (c.tasks) c.remove_task(pick(c.tasks));
        break;
      case 3:
        if (c.tasks && c.phasers) {
          Gap& g = c.gap[pick(c.tasks)][pick(c.phasers)];
          if (g.nreg) break;
          if (pick(2)) g.var = kVarAny;
          g.lw = std::max(0, g.lw - pick(2));
          g.ls = std::max(0, g.ls - pick(2));
          if (pick(2)) g.uw = pick(2) ? kInf : inf_add(g.uw, 1);
          if (pick(2)) g.us = pick(2) ? kInf : inf_add(g.us, 1);
        }
        break;
      case 4:
        if (c.phasers) {
          EGap& e = c.egap[pick(c.phasers)];
          e.ew = std::max(0, e.ew - 1);
          e.es = std::max(0, e.es - 1);
        }
        break;
      case 5:
        if (c.phasers) c.remove_phaser(pick(c.phasers));
        break;
    }
  }
  return c;
}

Config shift(const Config& c, const std::vector<int>& k) {
  Config d = c;
  for (auto& row : d.phase)
    for (int q = 0; q < d.phasers; ++q)
      if (row[q].reg) {
        row[q].w += k[q];
        row[q].s += k[q];
      }
  return d;
}

SandwichOracle::SandwichOracle(const Program& p, int suffix, Unfold step, const Universe& u)
    : p_(p), suffix_(suffix), step_(step) {
  Universe cu = u;
  cu.first_seq = suffix;
  const Stmt& h = *p.head(suffix);
  for (Config& c : enumerate(p, cu)) {
    if (h.kind == StmtKind::Asynch && !binds_args(c, h, suffix)) continue;
    post_.push_back(steps(c));
    pre_.push_back(std::move(c));
  }
}

std::vector<Config> SandwichOracle::steps(const Config& c) const {
  std::vector<Config> succ;
  for (int t = 0; t < c.tasks(); ++t) {
    if (c.seq[t] != suffix_) continue;
    for (Succ& s : task_steps(p_, c, t))
      if (!s.error && s.branch == step_.branch && s.next->seq[t] == step_.next) succ.push_back(std::move(*s.next));
  }
  return succ;
}

void SandwichOracle::check(const Constraint& phi, const PreOptions& opt, int k, SandwichStats& st) const {
  std::vector<Constraint> pres;
  for (int r = -1; r < phi.tasks; ++r)
    for (Constraint& c : pre_stmt(p_, phi, suffix_, step_, TaskRole{r}, opt)) pres.push_back(std::move(c));
  auto fail = [&](const std::string& what, const Config& c) {
    if (st.failures++ == 0) {
      st.first_failure = what + "\n  phi  " + print_constraint_line(p_, phi) + "\n  c'   " + print_config(p_, c);
      for (const Constraint& f : pres) st.first_failure += "\n  pre  " + print_constraint_line(p_, f);
    }
  };
  for (size_t i = 0; i < pre_.size(); ++i) {
    const Config& cp = pre_[i];
    bool in_pre = false;
    for (const Constraint& f : pres)
      if (models(cp, f)) {
        in_pre = true;
        break;
      }
    bool reaches = false;
    for (const Config& c : post_[i]) {
      ++st.pairs;
      if (models(c, phi)) {
        reaches = true;
        break;
      }
    }
    if (reaches) {
      ++st.sound_checked;
      if (!in_pre) {
        ++st.sound_failures;
        fail("uncovered predecessor", cp);
      }
    }
    if (!in_pre) continue;
    ++st.complete_checked;
    if (!reaches) ++st.one_step_gaps;
    std::vector<Config> frontier = post_[i];
    for (int round = 1; !reaches && round < k && !frontier.empty(); ++round) {
      std::vector<Config> next;
      for (const Config& c : frontier)
        for (Config& n : steps(c)) {
          if (models(n, phi)) reaches = true;
          next.push_back(std::move(n));
        }
      frontier = std::move(next);
    }
    if (!reaches) {
      ++st.complete_failures;
      fail("spurious predecessor", cp);
    }
  }
}

}  // namespace phz::oracle
