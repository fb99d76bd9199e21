#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "phz/engine.hpp"

namespace phz {

namespace {

// Configurations reached from `from` by executing the labelled step 1..max_repeat times.
std::vector<Config> replay_step(const Program& p, const std::vector<Config>& from, const TraceStep& st,
                                const Constraint& goal, const ReplayBounds& b) {
  std::vector<Config> hits;
  std::unordered_set<Config, ConfigHash> seen_hit;
  std::vector<Config> frontier = from;
  for (int round = 0; round < b.max_repeat && !frontier.empty(); ++round) {
    std::vector<Config> next;
    std::unordered_set<Config, ConfigHash> seen;
    for (const Config& c : frontier) {
      for (int t = 0; t < c.tasks(); ++t) {
        if (c.seq[t] != st.suffix) continue;
        for (Succ& s : task_steps(p, c, t)) {
          if (!s.next || s.next->seq[t] != st.next) continue;
          Config n = normalize(*s.next);
          if (!seen.insert(n).second) continue;
          if (models(n, goal) && seen_hit.insert(n).second) hits.push_back(n);
          if (next.size() < b.max_configs) next.push_back(std::move(n));
        }
      }
    }
    frontier = std::move(next);
  }
  if (hits.size() > b.max_configs) hits.resize(b.max_configs);
  return hits;
}

std::string stmt_text(const Program& p, int stmt) {
  std::string s = p.print_stmt(stmt);
  if (auto nl = s.find('\n'); nl != std::string::npos) s = s.substr(0, nl);
  return s;
}

}  // namespace

TraceCheck validate_trace(const Program& p, const Trace& tr, const ReplayBounds& b) {
  TraceCheck r;
  if (tr.steps.empty()) {
    r.message = "empty trace";
    return r;
  }
  std::vector<Config> cur{normalize(initial_config(p))};
  if (!models(cur[0], tr.steps[0].phi)) {
    r.failed_step = 0;
    r.message = "initial configuration does not satisfy the first constraint";
    return r;
  }
  for (size_t i = 0; i + 1 < tr.steps.size(); ++i) {
    cur = replay_step(p, cur, tr.steps[i], tr.steps[i + 1].phi, b);
    if (cur.empty()) {
      r.failed_step = static_cast<int>(i + 1);
      r.message = "no run executing '" + stmt_text(p, tr.steps[i].stmt) + "' reaches step " + std::to_string(i + 1);
      return r;
    }
  }
  r.ok = true;
  return r;
}

std::string print_trace(const Program& p, const Trace& tr) {
  std::ostringstream os;
  int n = static_cast<int>(tr.steps.size());
  for (int i = 0; i < n; ++i) {
    const TraceStep& st = tr.steps[i];
    os << "phi_" << (n - i) << " " << print_constraint_line(p, st.phi) << "\n";
    if (st.stmt >= 0)
      os << "  -- " << stmt_text(p, st.stmt) << "  [" << p.print_suffix(st.suffix) << "]\n";
  }
  return os.str();
}

std::string trace_json(const Program& p, const Trace& tr) {
  nlohmann::json steps = nlohmann::json::array();
  int n = static_cast<int>(tr.steps.size());
  for (int i = 0; i < n; ++i) {
    const TraceStep& st = tr.steps[i];
    nlohmann::json j;
    j["index"] = n - i;
    j["constraint"] = print_constraint_line(p, st.phi);
    j["dimension"] = st.phi.phasers;
    j["tasks"] = st.phi.tasks;
    if (st.stmt >= 0) {
      j["stmt"] = stmt_text(p, st.stmt);
      j["line"] = p.stmts[st.stmt].line;
      j["from"] = p.print_suffix(st.suffix);
      j["to"] = p.print_suffix(st.next);
    }
    steps.push_back(std::move(j));
  }
  nlohmann::json out;
  out["steps"] = std::move(steps);
  return out.dump(2);
}

}  // namespace phz
