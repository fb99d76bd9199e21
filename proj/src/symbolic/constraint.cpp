#include <algorithm>
#include <numeric>
#include <sstream>
#include <tuple>

#include "phz/symbolic.hpp"

namespace phz {

bool Gap::operator<(const Gap& o) const {
  auto key = [](const Gap& g) {
    return g.nreg ? std::make_tuple(g.var, 1, 0, 0, 0, 0) : std::make_tuple(g.var, 0, g.lw, g.ls, g.uw, g.us);
  };
  return key(*this) < key(o);
}

bool gap_leq(const Gap& g1, const Gap& g2) {
  if (g1.var != g2.var && g1.var != kVarAny) return false;
  if (g1.nreg != g2.nreg) return false;
  if (g1.nreg) return true;
  return g1.lw <= g2.lw && g1.ls <= g2.ls && g2.uw <= g1.uw && g2.us <= g1.us;
}

bool Constraint::is_free() const {
  for (const auto& row : gap)
    for (const Gap& g : row)
      if (!g.is_free()) return false;
  return true;
}

bool Constraint::is_b_good(int b) const {
  for (const auto& row : gap)
    for (const Gap& g : row)
      if (!g.is_free() && !g.bounded_by(b)) return false;
  return true;
}

bool Constraint::valid() const {
  for (const auto& row : gap)
    for (const Gap& g : row)
      if (!g.valid()) return false;
  for (const EGap& e : egap)
    if (e.ew < 0 || e.es < 0) return false;
  return true;
}

int Constraint::add_task(int seq_id, const std::vector<Gap>& row) {
  seq.push_back(seq_id);
  gap.push_back(row);
  return tasks++;
}

void Constraint::remove_task(int t) {
  seq.erase(seq.begin() + t);
  gap.erase(gap.begin() + t);
  --tasks;
}

int Constraint::add_phaser(const EGap& e, const std::vector<Gap>& column) {
  egap.push_back(e);
  for (int t = 0; t < tasks; ++t) gap[t].push_back(column[t]);
  return phasers++;
}

void Constraint::remove_phaser(int p) {
  egap.erase(egap.begin() + p);
  for (auto& row : gap) row.erase(row.begin() + p);
  --phasers;
}

Constraint Constraint::canonical() const {
  // Phasers ordered by egap and sorted column multiset, then tasks by row.
  std::vector<int> po(phasers);
  std::iota(po.begin(), po.end(), 0);
  auto col_key = [&](int p) {
    std::vector<Gap> col;
    for (int t = 0; t < tasks; ++t) col.push_back(gap[t][p]);
    std::sort(col.begin(), col.end());
    return std::make_pair(std::make_pair(egap[p].ew, egap[p].es), col);
  };
  std::stable_sort(po.begin(), po.end(), [&](int a, int b) { return col_key(a) < col_key(b); });
  std::vector<int> to(tasks);
  std::iota(to.begin(), to.end(), 0);
  auto row_key = [&](int t) {
    std::vector<Gap> r;
    for (int p : po) r.push_back(gap[t][p]);
    return std::make_pair(seq[t], r);
  };
  std::stable_sort(to.begin(), to.end(), [&](int a, int b) { return row_key(a) < row_key(b); });
  Constraint c;
  c.tasks = tasks;
  c.phasers = phasers;
  c.bv = bv;
  for (int p : po) c.egap.push_back(egap[p]);
  for (int t : to) {
    c.seq.push_back(seq[t]);
    std::vector<Gap> r;
    for (int p : po) r.push_back(gap[t][p]);
    c.gap.push_back(std::move(r));
  }
  return c;
}

std::size_t Constraint::hash() const {
  std::size_t h = 1469598103934665603ull;
  auto mix = [&](long x) { h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull; };
  mix(tasks);
  mix(phasers);
  for (auto b : bv) mix(b);
  for (int s : seq) mix(s);
  for (const auto& row : gap) {
    for (const Gap& g : row) {
      mix(g.var);
      mix(g.nreg);
      if (!g.nreg) {
        mix(g.lw);
        mix(g.ls);
        mix(g.uw);
        mix(g.us);
      }
    }
  }
  for (const EGap& e : egap) {
    mix(e.ew);
    mix(e.es);
  }
  return h;
}

Constraint top_constraint(const Program& p) {
  Constraint c;
  c.bv.assign(p.bool_vars.size(), kBvAny);
  return c;
}

Classification classify(const Constraint& phi) {
  Classification r;
  r.dimension = phi.phasers;
  r.free = phi.is_free();
  int bounded = 0, good = 0;
  bool all_bounded = true, all_good = true;
  for (const auto& row : phi.gap) {
    for (const Gap& g : row) {
      if (g.nreg) continue;
      bool f = g.uw >= kInf && g.us >= kInf;
      bool fin = g.uw < kInf && g.us < kInf;
      if (fin) {
        bounded = std::max({bounded, g.uw, g.us});
        good = std::max({good, g.uw, g.us});
      } else {
        all_bounded = false;
        if (!f) all_good = false;
      }
    }
  }
  r.bounded_for = all_bounded ? bounded : kInf;
  r.good_for = all_good ? good : -1;
  return r;
}

namespace {

std::string bound(int x) { return x >= kInf ? "inf" : std::to_string(x); }

std::string var_name(const Program& p, int v) {
  if (v == kVarAny) return "*";
  if (v == kVarNone) return "-";
  return p.phaser_vars[v];
}

}  // namespace

std::string print_gap(const Program& p, const Gap& g) {
  std::string r = var_name(p, g.var);
  if (g.nreg) return r + " nreg";
  return r + " (" + bound(g.lw) + "," + bound(g.ls) + "," + bound(g.uw) + "," + bound(g.us) + ")";
}

std::string print_constraint(const Program& p, const Constraint& phi) {
  std::ostringstream os;
  os << "constraint {\n  bv:";
  for (size_t b = 0; b < phi.bv.size(); ++b)
    os << " " << p.bool_vars[b] << "=" << (phi.bv[b] == kBvAny ? "*" : phi.bv[b] ? "true" : "false");
  os << "\n";
  for (int q = 0; q < phi.phasers; ++q) os << "  phaser P" << q << " egap (" << phi.egap[q].ew << "," << phi.egap[q].es << ")\n";
  for (int t = 0; t < phi.tasks; ++t) {
    os << "  task T" << t << " @ ";
    if (phi.seq[t] == kSeqAny) {
      os << "*";
    } else {
      os << "[" << p.print_suffix(phi.seq[t]) << "]";
    }
    os << "\n";
    for (int q = 0; q < phi.phasers; ++q) os << "    P" << q << ": " << print_gap(p, phi.gap[t][q]) << "\n";
  }
  os << "}";
  return os.str();
}

std::string print_constraint_line(const Program& p, const Constraint& phi) {
  std::ostringstream os;
  os << "<";
  bool any = false;
  for (size_t b = 0; b < phi.bv.size(); ++b) {
    if (phi.bv[b] == kBvAny) continue;
    os << (any ? " " : "") << p.bool_vars[b] << "=" << (phi.bv[b] ? "t" : "f");
    any = true;
  }
  os << " |";
  for (int q = 0; q < phi.phasers; ++q) os << " P" << q << "(" << phi.egap[q].ew << "," << phi.egap[q].es << ")";
  for (int t = 0; t < phi.tasks; ++t) {
    os << " | T" << t << "@";
    if (phi.seq[t] == kSeqAny) {
      os << "*";
    } else {
      std::string s = p.print_suffix(phi.seq[t]);
      if (s.size() > 40) s = s.substr(0, 37) + "...";
      os << "[" << s << "]";
    }
    for (int q = 0; q < phi.phasers; ++q) os << " P" << q << ":" << print_gap(p, phi.gap[t][q]);
  }
  os << ">";
  return os.str();
}

}  // namespace phz
