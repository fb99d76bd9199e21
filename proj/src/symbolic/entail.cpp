#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <functional>

#include "phz/symbolic.hpp"

namespace phz {

namespace {

bool bv_leq(const std::vector<std::int8_t>& a, const std::vector<std::int8_t>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != kBvAny && a[i] != b[i]) return false;
  return true;
}

bool seq_leq(int a, int b) { return a == kSeqAny || a == b; }

// Kuhn matching: does every left vertex get a distinct right partner?
bool saturates(int left, int right, const std::vector<std::vector<int>>& adj) {
  std::vector<int> owner(right, -1);
  std::function<bool(int, std::vector<bool>&)> augment = [&](int l, std::vector<bool>& seen) {
    for (int r : adj[l]) {
      if (seen[r]) continue;
      seen[r] = true;
      if (owner[r] < 0 || augment(owner[r], seen)) {
        owner[r] = l;
        return true;
      }
    }
    return false;
  };
  for (int l = 0; l < left; ++l) {
    std::vector<bool> seen(right, false);
    if (!augment(l, seen)) return false;
  }
  return true;
}

// Surjection from rows of b onto rows of a: every b row needs an option, every a row a preimage.
bool surjects(int na, int nb, const std::vector<std::vector<int>>& compat_b, const std::vector<bool>& env_ok) {
  if (na > nb && na > 0) {
    // Some b rows must cover a rows; impossible when b has fewer rows.
    return false;
  }
  std::vector<std::vector<int>> adj_a(na);
  for (int t = 0; t < nb; ++t) {
    if (compat_b[t].empty() && !env_ok[t]) return false;
    for (int s : compat_b[t]) adj_a[s].push_back(t);
  }
  return saturates(na, nb, adj_a);
}

struct Interval {
  long lo = 0, hi = kInf;
  bool add(long a, long b) {
    lo = std::max(lo, a);
    hi = std::min(hi, b);
    return lo <= hi;
  }
};

long up(int bound, long base, int sign) {
  if (bound >= kInf) return sign > 0 ? kInf : -static_cast<long>(kInf);
  return base + sign * static_cast<long>(bound);
}

class ModelSearch {
 public:
  ModelSearch(const Config& c, const Constraint& phi) : c_(c), phi_(phi) {}

  bool run() {
    if (phi_.phasers > c_.phasers || phi_.tasks > c_.tasks()) return false;
    for (size_t b = 0; b < phi_.bv.size(); ++b)
      if (phi_.bv[b] != kBvAny && (phi_.bv[b] == 1) != c_.bv[b]) return false;
    for (int t = 0; t < phi_.tasks; ++t) {
      if (phi_.seq[t] == kSeqAny) continue;
      if (std::find(c_.seq.begin(), c_.seq.end(), phi_.seq[t]) == c_.seq.end()) return false;
    }
    pi_.assign(phi_.phasers, -1);
    used_.assign(c_.phasers, false);
    return phasers(0);
  }

 private:
  const Config& c_;
  const Constraint& phi_;
  std::vector<int> pi_;
  std::vector<bool> used_;
  std::vector<int> cover_;
  std::vector<std::vector<Interval>> stack_;  // per-depth level intervals

  bool phasers(int j) {
    if (j == phi_.phasers) {
      stack_.assign(c_.tasks() + 1, std::vector<Interval>(phi_.phasers));
      cover_.assign(phi_.tasks, 0);
      return tasks(0, 0);
    }
    for (int q = 0; q < c_.phasers; ++q) {
      if (used_[q]) continue;
      used_[q] = true;
      pi_[j] = q;
      if (phasers(j + 1)) return true;
      used_[q] = false;
    }
    return false;
  }

  // Restrict levels for concrete task u assigned to row t (or env when t < 0).
  bool fits(int u, int t, std::vector<Interval>& iv) const {
    for (int j = 0; j < phi_.phasers; ++j) {
      const PhaseEntry& e = c_.phase[u][pi_[j]];
      if (t < 0) {
        if (e.reg && !iv[j].add(static_cast<long>(e.w) + phi_.egap[j].ew, static_cast<long>(e.s) - phi_.egap[j].es))
          return false;
        continue;
      }
      const Gap& g = phi_.gap[t][j];
      if (g.var != kVarAny && g.var != e.var) return false;
      if (g.nreg != !e.reg) return false;
      if (g.nreg) continue;
      if (!iv[j].add(static_cast<long>(e.w) + g.lw, up(g.uw, e.w, 1))) return false;
      if (!iv[j].add(up(g.us, e.s, -1), static_cast<long>(e.s) - g.ls)) return false;
    }
    return true;
  }

  bool tasks(int u, int covered) {
    int remaining = c_.tasks() - u;
    if (phi_.tasks - covered > remaining) return false;
    if (u == c_.tasks()) return covered == phi_.tasks;
    std::vector<Interval>& next = stack_[u + 1];
    for (int t = 0; t < phi_.tasks; ++t) {
      if (!seq_leq(phi_.seq[t], c_.seq[u])) continue;
      next = stack_[u];
      if (!fits(u, t, next)) continue;
      bool fresh = cover_[t]++ == 0;
      if (tasks(u + 1, covered + (fresh ? 1 : 0))) return true;
      --cover_[t];
    }
    next = stack_[u];
    return fits(u, -1, next) && tasks(u + 1, covered);
  }
};

}  // namespace

bool models(const Config& c, const Constraint& phi) { return ModelSearch(c, phi).run(); }

namespace {

using Mask = std::uint64_t;

bool saturates_masks(const std::vector<Mask>& adj, int right) {
  std::vector<int> owner(right, -1);
  std::function<bool(int, Mask&)> augment = [&](int l, Mask& seen) {
    for (Mask m = adj[l] & ~seen; m; m &= m - 1) {
      int r = std::countr_zero(m);
      seen |= Mask{1} << r;
      if (owner[r] < 0 || augment(owner[r], seen)) {
        owner[r] = l;
        return true;
      }
    }
    return false;
  };
  for (size_t l = 0; l < adj.size(); ++l) {
    Mask seen = 0;
    if (!augment(static_cast<int>(l), seen)) return false;
  }
  return true;
}

// Phaser injection search; compat[s] holds the b rows row s of a may cover.
class EntailSearch {
 public:
  EntailSearch(const Constraint& a, const Constraint& b) : a_(a), b_(b) {}

  bool run() {
    if (b_.tasks > 64) throw std::length_error("entailment supports at most 64 tasks");
    all_ = b_.tasks == 64 ? ~Mask{0} : (Mask{1} << b_.tasks) - 1;
    std::vector<Mask> compat(a_.tasks, 0);
    for (int s = 0; s < a_.tasks; ++s) {
      for (int t = 0; t < b_.tasks; ++t)
        if (seq_leq(a_.seq[s], b_.seq[t])) compat[s] |= Mask{1} << t;
      if (!compat[s]) return false;
    }
    used_.assign(b_.phasers, false);
    return rec(0, compat, all_);
  }

 private:
  const Constraint& a_;
  const Constraint& b_;
  Mask all_ = 0;
  std::vector<bool> used_;

  bool covered(const std::vector<Mask>& compat, Mask env) const {
    Mask m = env;
    for (Mask c : compat) m |= c;
    return m == all_;
  }

  bool rec(int j, const std::vector<Mask>& compat, Mask env) {
    if (j == a_.phasers) return saturates_masks(compat, b_.tasks);
    const EGap& ea = a_.egap[j];
    std::vector<Mask> next(compat.size());
    for (int q = 0; q < b_.phasers; ++q) {
      if (used_[q]) continue;
      const EGap& eb = b_.egap[q];
      if (ea.ew > eb.ew || ea.es > eb.es) continue;
      Mask env2 = env;
      for (int t = 0; t < b_.tasks; ++t) {
        const Gap& g = b_.gap[t][q];
        if (!g.nreg && (ea.ew > g.lw || ea.es > g.ls)) env2 &= ~(Mask{1} << t);
      }
      bool ok = true;
      for (int s = 0; s < a_.tasks && ok; ++s) {
        Mask m = 0;
        for (Mask c = compat[s]; c; c &= c - 1) {
          int t = std::countr_zero(c);
          if (gap_leq(a_.gap[s][j], b_.gap[t][q])) m |= Mask{1} << t;
        }
        next[s] = m;
        ok = m != 0;
      }
      if (!ok || !covered(next, env2)) continue;
      used_[q] = true;
      bool found = rec(j + 1, next, env2);
      used_[q] = false;
      if (found) return true;
    }
    return false;
  }
};

}  // namespace

bool entails(const Constraint& a, const Constraint& b) {
  if (a.phasers > b.phasers || a.tasks > b.tasks) return false;
  if (!bv_leq(a.bv, b.bv)) return false;
  return EntailSearch(a, b).run();
}

Encoding encode(const Constraint& phi, const std::vector<int>& order_t, const std::vector<int>& order_p) {
  Encoding e;
  e.bv = phi.bv;
  for (int t : order_t) {
    e.seq.push_back(phi.seq[t]);
    std::vector<Gap> row;
    for (int p : order_p) row.push_back(phi.gap[t][p]);
    e.acc.push_back(std::move(row));
  }
  for (int p : order_p) e.env.push_back(phi.egap[p]);
  return e;
}

Encoding encode(const Constraint& phi) {
  std::vector<int> ot(phi.tasks), op(phi.phasers);
  for (int i = 0; i < phi.tasks; ++i) ot[i] = i;
  for (int i = 0; i < phi.phasers; ++i) op[i] = i;
  return encode(phi, ot, op);
}

bool encoding_entails(const Encoding& e1, const Encoding& e2) {
  if (!bv_leq(e1.bv, e2.bv)) return false;
  if (e1.env.size() != e2.env.size()) return false;
  for (size_t j = 0; j < e1.env.size(); ++j)
    if (e1.env[j].ew > e2.env[j].ew || e1.env[j].es > e2.env[j].es) return false;
  int na = static_cast<int>(e1.acc.size()), nb = static_cast<int>(e2.acc.size());
  std::vector<std::vector<int>> compat(nb);
  for (int i = 0; i < nb; ++i) {
    for (int h = 0; h < na; ++h) {
      if (!seq_leq(e1.seq[h], e2.seq[i])) continue;
      bool ok = true;
      for (size_t j = 0; j < e1.env.size() && ok; ++j) ok = gap_leq(e1.acc[h][j], e2.acc[i][j]);
      if (ok) compat[i].push_back(h);
    }
  }
  return surjects(na, nb, compat, std::vector<bool>(nb, false));
}

std::vector<Constraint> minimize(const std::vector<Constraint>& set) {
  struct Item {
    Constraint c;
    std::uint64_t seqs = 0;
  };
  std::vector<Item> sorted;
  std::unordered_set<Constraint, ConstraintHash> seen;
  for (const Constraint& c : set) {
    Constraint k = c.canonical();
    if (!seen.insert(k).second) continue;
    Item it{std::move(k)};
    for (int s : it.c.seq)
      if (s != kSeqAny) it.seqs |= std::uint64_t{1} << (s % 64);
    sorted.push_back(std::move(it));
  }
  std::stable_sort(sorted.begin(), sorted.end(), [](const Item& x, const Item& y) {
    return std::tie(x.c.phasers, x.c.tasks) < std::tie(y.c.phasers, y.c.tasks);
  });
  // Cheap necessary condition for entails(a, b).
  auto may = [](const Item& a, const Item& b) {
    return a.c.tasks <= b.c.tasks && a.c.phasers <= b.c.phasers && (a.seqs & ~b.seqs) == 0;
  };
  std::vector<Item> kept;
  for (Item& it : sorted) {
    bool dominated = false;
    for (const Item& k : kept)
      if (may(k, it) && entails(k.c, it.c)) {
        dominated = true;
        break;
      }
    if (dominated) continue;
    std::erase_if(kept, [&](const Item& k) { return may(it, k) && entails(it.c, k.c); });
    kept.push_back(std::move(it));
  }
  std::vector<Constraint> out;
  for (Item& k : kept) out.push_back(std::move(k.c));
  return out;
}

}  // namespace phz
