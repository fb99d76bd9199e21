#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>

#include "phz/concrete.hpp"

namespace phz {

bool ExploreResult::has(ErrorKind::Kind k) const {
  for (const auto& e : errors)
    if (e.error.kind == k) return true;
  return false;
}

int ExploreResult::min_cycle() const {
  int best = 0;
  for (const auto& e : errors) {
    if (e.error.kind != ErrorKind::Deadlock) continue;
    int len = static_cast<int>(e.error.cycle.size());
    if (best == 0 || len < best) best = len;
  }
  return best;
}

bool ExploreResult::reaches(const PartialConfig& pc) const {
  for (const auto& c : configs)
    if (includes_upto_equiv(c, pc)) return true;
  return false;
}

namespace {
bool within(const Config& c, const Bounds& b) {
  if (c.tasks() > b.max_tasks || c.phasers > b.max_phasers) return false;
  for (const auto& row : c.phase)
    for (const auto& e : row)
      if (e.reg && (e.w > b.max_phase || e.s > b.max_phase)) return false;
  return true;
}
}  // namespace

ExploreResult explore(const Program& p, const Bounds& b) {
  ExploreResult r;
  std::unordered_map<Config, int, ConfigHash> index;
  std::set<std::pair<int, int>> seen_errors;  // (kind, stmt) or (Deadlock, length)
  Config init = normalize(initial_config(p));
  index.emplace(init, 0);
  r.configs.push_back(init);
  r.edges.emplace_back();
  for (size_t i = 0; i < r.configs.size(); ++i) {
    Config c = r.configs[i];
    std::vector<int> cyc = cyclic_wait(p, c);
    if (!cyc.empty() && seen_errors.insert({ErrorKind::Deadlock, static_cast<int>(cyc.size())}).second) {
      ErrorKind e{ErrorKind::Deadlock, cyc.front(), p.head(c.seq[cyc.front()])->id, -1, cyc};
      r.errors.push_back({e, static_cast<int>(i)});
    }
    std::vector<Succ> steps = all_steps(p, c);
    bool live = false;
    for (int t = 0; t < c.tasks(); ++t)
      if (c.seq[t] != 0) live = true;
    if (steps.empty() && live) ++r.global_deadlocks;
    for (Succ& s : steps) {
      if (s.error) {
        if (seen_errors.insert({s.error->kind, s.error->stmt}).second) r.errors.push_back({*s.error, static_cast<int>(i)});
        continue;
      }
      Config n = normalize(*s.next);
      if (!within(n, b)) {
        r.exhausted = false;
        continue;
      }
      auto it = index.find(n);
      int target;
      if (it == index.end()) {
        if (static_cast<long>(r.configs.size()) >= b.max_steps) {
          r.exhausted = false;
          continue;
        }
        target = static_cast<int>(r.configs.size());
        index.emplace(n, target);
        r.configs.push_back(std::move(n));
        r.edges.emplace_back();
      } else {
        target = it->second;
      }
      r.edges[i].push_back({s.stmt, target});
    }
  }
  return r;
}

std::string print_config(const Program& p, const Config& c) {
  std::ostringstream os;
  os << "bv{";
  for (size_t b = 0; b < c.bv.size(); ++b) os << (b ? "," : "") << p.bool_vars[b] << "=" << (c.bv[b] ? 1 : 0);
  os << "}";
  for (int t = 0; t < c.tasks(); ++t) {
    os << " t" << t << "[" << p.print_suffix(c.seq[t]) << "]{";
    bool first = true;
    for (int q = 0; q < c.phasers; ++q) {
      const PhaseEntry& e = c.phase[t][q];
      if (e.var < 0 && !e.reg) continue;
      os << (first ? "" : ",") << "p" << q << ":" << (e.var >= 0 ? p.phaser_vars[e.var] : "-") << ":";
      if (e.reg) {
        os << "(" << e.w << "," << e.s << ")";
        if (e.mode != Mode::SigWait) os << mode_name(e.mode);
      } else {
        os << "nreg";
      }
      first = false;
    }
    os << "}";
  }
  return os.str();
}

std::string print_error(const Program& p, const ErrorKind& e) {
  std::ostringstream os;
  switch (e.kind) {
    case ErrorKind::Assertion: os << "assertion violation"; break;
    case ErrorKind::Registration: os << "registration error"; break;
    case ErrorKind::Deadlock: os << "cyclic wait"; break;
  }
  if (e.stmt >= 0) os << " at '" << p.print_stmt(e.stmt) << "' (line " << p.stmts[e.stmt].line << ")";
  if (e.kind == ErrorKind::Deadlock) {
    os << " tasks";
    for (int t : e.cycle) os << " t" << t;
  } else {
    os << " by t" << e.task;
  }
  return os.str();
}

}  // namespace phz
