#include <algorithm>
#include <climits>
#include <functional>

#include "phz/concrete.hpp"

namespace phz {

bool PartialConfig::is_control() const {
  for (const auto& row : phase)
    for (const auto& e : row)
      if (e && e->val == PartialEntry::Pair && (e->w >= 0 || e->s >= 0)) return false;
  return true;
}

namespace {

bool bv_match(const Config& c, const PartialConfig& pc) {
  for (size_t b = 0; b < pc.bv.size(); ++b)
    if (pc.bv[b] != 2 && (pc.bv[b] == 1) != c.bv[b]) return false;
  return true;
}

bool var_match(int pv, int cv) { return pv == -2 || pv == cv; }

// Search for injections; shifts, when enabled, are per mapped phaser.
class IncludeSearch {
 public:
  IncludeSearch(const Config& c, const PartialConfig& pc, bool shifts) : c_(c), pc_(pc), shifts_(shifts) {}

  bool run() {
    if (!bv_match(c_, pc_)) return false;
    if (pc_.tasks > c_.tasks() || pc_.phasers > c_.phasers) return false;
    pi_.assign(pc_.phasers, -1);
    used_q_.assign(c_.phasers, false);
    return phasers(0);
  }

 private:
  const Config& c_;
  const PartialConfig& pc_;
  bool shifts_;
  std::vector<int> pi_, tau_;
  std::vector<bool> used_q_, used_t_;
  std::vector<long> shift_;
  std::vector<bool> shift_set_;
  std::vector<long> min_shift_;

  bool phasers(int i) {
    if (i == pc_.phasers) {
      tau_.assign(pc_.tasks, -1);
      used_t_.assign(c_.tasks(), false);
      shift_.assign(pc_.phasers, 0);
      shift_set_.assign(pc_.phasers, false);
      min_shift_.assign(pc_.phasers, 0);
      for (int j = 0; j < pc_.phasers; ++j) {
        long m = LONG_MAX;
        for (int u = 0; u < c_.tasks(); ++u) {
          const PhaseEntry& e = c_.phase[u][pi_[j]];
          if (e.reg) m = std::min<long>(m, e.w);
        }
        min_shift_[j] = m == LONG_MAX ? LONG_MIN / 4 : -m;
      }
      return tasks(0);
    }
    for (int q = 0; q < c_.phasers; ++q) {
      if (used_q_[q]) continue;
      used_q_[q] = true;
      pi_[i] = q;
      if (phasers(i + 1)) return true;
      used_q_[q] = false;
    }
    pi_[i] = -1;
    return false;
  }

  bool tasks(int i) {
    if (i == pc_.tasks) return true;
    for (int u = 0; u < c_.tasks(); ++u) {
      if (used_t_[u]) continue;
      if (pc_.seq[i] >= 0 && pc_.seq[i] != c_.seq[u]) continue;
      std::vector<std::pair<int, bool>> saved;
      bool ok = true;
      for (int j = 0; j < pc_.phasers && ok; ++j) {
        const auto& pe = pc_.phase[i][j];
        if (!pe) continue;
        const PhaseEntry& e = c_.phase[u][pi_[j]];
        if (!var_match(pe->var, e.var)) {
          ok = false;
          break;
        }
        if (pe->val == PartialEntry::Nreg) {
          ok = !e.reg;
          continue;
        }
        if (!e.reg) {
          ok = false;
          break;
        }
        if (!shifts_) {
          if ((pe->w >= 0 && pe->w != e.w) || (pe->s >= 0 && pe->s != e.s)) ok = false;
          continue;
        }
        // Each pinned component fixes the shift of this phaser.
        for (int comp = 0; comp < 2 && ok; ++comp) {
          int want = comp == 0 ? pe->w : pe->s;
          if (want < 0) continue;
          long k = static_cast<long>(want) - (comp == 0 ? e.w : e.s);
          if (shift_set_[j]) {
            ok = shift_[j] == k;
          } else if (k < min_shift_[j]) {
            ok = false;
          } else {
            saved.emplace_back(j, true);
            shift_set_[j] = true;
            shift_[j] = k;
          }
        }
      }
      if (ok) {
        used_t_[u] = true;
        tau_[i] = u;
        if (tasks(i + 1)) return true;
        used_t_[u] = false;
      }
      for (auto& [j, _] : saved) shift_set_[j] = false;
    }
    return false;
  }
};

}  // namespace

bool includes(const Config& c, const PartialConfig& pc) { return IncludeSearch(c, pc, false).run(); }

bool includes_upto_equiv(const Config& c, const PartialConfig& pc) { return IncludeSearch(c, pc, true).run(); }

bool equivalent(const Config& a, const Config& b) {
  if (a.bv != b.bv || a.tasks() != b.tasks() || a.phasers != b.phasers) return false;
  int n = a.tasks(), m = a.phasers;
  std::vector<int> tau(n, -1), pi(m, -1);
  std::vector<bool> used_t(n, false), used_q(m, false);
  auto phaser_ok = [&](int qa, int qb) {
    bool set = false;
    long k = 0;
    for (int t = 0; t < n; ++t) {
      const PhaseEntry& ea = a.phase[t][qa];
      const PhaseEntry& eb = b.phase[tau[t]][qb];
      if (ea.var != eb.var || ea.reg != eb.reg) return false;
      if (!ea.reg) continue;
      if (ea.mode != eb.mode) return false;
      long dw = static_cast<long>(eb.w) - ea.w, ds = static_cast<long>(eb.s) - ea.s;
      if (dw != ds) return false;
      if (set && dw != k) return false;
      set = true;
      k = dw;
    }
    return true;
  };
  std::function<bool(int)> match_q = [&](int i) -> bool {
    if (i == m) return true;
    for (int q = 0; q < m; ++q) {
      if (used_q[q] || !phaser_ok(i, q)) continue;
      used_q[q] = true;
      pi[i] = q;
      if (match_q(i + 1)) return true;
      used_q[q] = false;
    }
    return false;
  };
  std::function<bool(int)> match_t = [&](int i) -> bool {
    if (i == n) {
      std::fill(used_q.begin(), used_q.end(), false);
      return match_q(0);
    }
    for (int u = 0; u < n; ++u) {
      if (used_t[u] || a.seq[i] != b.seq[u]) continue;
      used_t[u] = true;
      tau[i] = u;
      if (match_t(i + 1)) return true;
      used_t[u] = false;
    }
    return false;
  };
  return match_t(0);
}

}  // namespace phz
