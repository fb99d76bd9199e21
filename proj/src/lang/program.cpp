#include <algorithm>
#include <set>

#include "phz/lang.hpp"

namespace phz {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::SigWait: return "SIG_WAIT";
    case Mode::Sig: return "SIG";
    case Mode::Wait: return "WAIT";
  }
  return "?";
}

bool is_phaser_stmt(StmtKind k) {
  return k == StmtKind::NewPhaser || k == StmtKind::Asynch || k == StmtKind::Drop || k == StmtKind::Signal ||
         k == StmtKind::Wait || k == StmtKind::NextBlock;
}

Outcomes eval_cond(const Cond& c, const std::vector<bool>& bv) {
  switch (c.kind) {
    case Cond::Ndet: return kMayFalse | kMayTrue;
    case Cond::True: return kMayTrue;
    case Cond::False: return kMayFalse;
    case Cond::Var: return bv[c.var] ? kMayTrue : kMayFalse;
    case Cond::Not: {
      Outcomes o = eval_cond(*c.lhs, bv);
      return ((o & kMayTrue) ? kMayFalse : 0u) | ((o & kMayFalse) ? kMayTrue : 0u);
    }
    case Cond::Or: {
      Outcomes a = eval_cond(*c.lhs, bv), b = eval_cond(*c.rhs, bv);
      return (((a | b) & kMayTrue) ? kMayTrue : 0u) | (((a & b) & kMayFalse) ? kMayFalse : 0u);
    }
    case Cond::And: {
      Outcomes a = eval_cond(*c.lhs, bv), b = eval_cond(*c.rhs, bv);
      return (((a & b) & kMayTrue) ? kMayTrue : 0u) | (((a | b) & kMayFalse) ? kMayFalse : 0u);
    }
  }
  return 0;
}

Outcomes eval_cond3(const Cond& c, const std::vector<std::int8_t>& bv) {
  if (c.kind == Cond::Var) {
    if (bv[c.var] == 2) return kMayFalse | kMayTrue;
    return bv[c.var] ? kMayTrue : kMayFalse;
  }
  if (c.kind == Cond::Not) {
    Outcomes o = eval_cond3(*c.lhs, bv);
    return ((o & kMayTrue) ? kMayFalse : 0u) | ((o & kMayFalse) ? kMayTrue : 0u);
  }
  if (c.kind == Cond::Or || c.kind == Cond::And) {
    Outcomes a = eval_cond3(*c.lhs, bv), b = eval_cond3(*c.rhs, bv);
    if (c.kind == Cond::Or) return (((a | b) & kMayTrue) ? kMayTrue : 0u) | (((a & b) & kMayFalse) ? kMayFalse : 0u);
    return (((a & b) & kMayTrue) ? kMayTrue : 0u) | (((a | b) & kMayFalse) ? kMayFalse : 0u);
  }
  return eval_cond(c, {});
}

int Program::task_index(std::string_view name) const {
  for (size_t i = 0; i < tasks.size(); ++i)
    if (tasks[i].name == name) return static_cast<int>(i);
  return -1;
}

int Program::bool_index(std::string_view name) const {
  for (size_t i = 0; i < bool_vars.size(); ++i)
    if (bool_vars[i] == name) return static_cast<int>(i);
  return -1;
}

int Program::phaser_index(std::string_view name) const {
  for (size_t i = 0; i < phaser_vars.size(); ++i)
    if (phaser_vars[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {
std::string key_of(const std::vector<int>& seq) {
  std::string k;
  for (int id : seq) {
    k += std::to_string(id);
    k += ',';
  }
  return k;
}

std::vector<int> cat(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}
}  // namespace

int Program::find_suffix(const std::vector<int>& seq) const {
  auto it = suffix_index_.find(key_of(seq));
  return it == suffix_index_.end() ? -1 : it->second;
}

int Program::intern(const std::vector<int>& seq) {
  std::string k = key_of(seq);
  auto it = suffix_index_.find(k);
  if (it != suffix_index_.end()) return it->second;
  int tail = -1;
  if (!seq.empty()) tail = intern(std::vector<int>(seq.begin() + 1, seq.end()));
  int id = static_cast<int>(suffixes_.size());
  suffixes_.push_back(seq);
  tails_.push_back(tail);
  suffix_index_.emplace(std::move(k), id);
  return id;
}

int Program::empty_barrier_of(int nb) {
  if (stmts[nb].body.empty()) return nb;
  auto it = empty_barrier_.find(nb);
  if (it != empty_barrier_.end()) return it->second;
  Stmt s;
  s.kind = StmtKind::NextBlock;
  s.pvar = stmts[nb].pvar;
  s.line = stmts[nb].line;
  s.col = stmts[nb].col;
  int id = add_stmt(std::move(s));
  empty_barrier_[nb] = id;
  return id;
}

std::pair<int, int> Program::sig_wait_of(int nb) {
  auto it = sig_wait_.find(nb);
  if (it != sig_wait_.end()) return it->second;
  Stmt s;
  s.kind = StmtKind::Signal;
  s.pvar = stmts[nb].pvar;
  s.line = stmts[nb].line;
  s.col = stmts[nb].col;
  Stmt w = s;
  w.kind = StmtKind::Wait;
  int a = add_stmt(std::move(s));
  int b = add_stmt(std::move(w));
  sig_wait_[nb] = {a, b};
  return {a, b};
}

void Program::close() {
  suffixes_.clear();
  tails_.clear();
  suffix_index_.clear();
  entries_.clear();
  intern({});
  for (const auto& t : tasks) entries_.push_back(intern(t.body));
  for (size_t i = 0; i < suffixes_.size(); ++i) {
    std::vector<int> seq = suffixes_[i];
    if (seq.empty()) continue;
    const Stmt& h = stmts[seq[0]];
    std::vector<int> rest(seq.begin() + 1, seq.end());
    if (h.kind == StmtKind::While) {
      intern(cat(h.body, seq));
    } else if (h.kind == StmtKind::If) {
      intern(cat(h.body, rest));
    } else if (h.kind == StmtKind::NextBlock) {
      int hid = h.id;
      if (!h.body.empty()) {
        int eb = empty_barrier_of(hid);
        std::vector<int> barrier = cat({eb}, rest);
        std::vector<int> body = stmts[hid].body;
        intern(cat(body, barrier));
        barrier_of_suffix_[static_cast<int>(i)] = intern(barrier);
      } else {
        auto [a, b] = sig_wait_of(hid);
        expanded_[static_cast<int>(i)] = intern(cat({a, b}, rest));
      }
    }
  }
}

const Stmt* Program::head(int suffix) const {
  const auto& s = suffixes_[suffix];
  return s.empty() ? nullptr : &stmts[s[0]];
}

int Program::barrier_suffix(int suffix) const {
  auto it = barrier_of_suffix_.find(suffix);
  return it == barrier_of_suffix_.end() ? -1 : it->second;
}

int Program::expand_barrier(int suffix) const {
  auto it = expanded_.find(suffix);
  return it == expanded_.end() ? -1 : it->second;
}

std::vector<Unfold> Program::head_successors(int suffix) const {
  const Stmt* h = head(suffix);
  if (!h) return {};
  const auto& seq = suffixes_[suffix];
  std::vector<int> rest(seq.begin() + 1, seq.end());
  switch (h->kind) {
    case StmtKind::While:
      return {{Branch::True, find_suffix(cat(h->body, seq))}, {Branch::False, tails_[suffix]}};
    case StmtKind::If:
      return {{Branch::True, find_suffix(cat(h->body, rest))}, {Branch::False, tails_[suffix]}};
    case StmtKind::NextBlock:
      if (h->body.empty()) return {{Branch::Pop, expand_barrier(suffix)}};
      {
        int b = barrier_suffix(suffix);
        return {{Branch::Executor, find_suffix(cat(h->body, suffixes_[b]))}, {Branch::Participant, b}};
      }
    case StmtKind::Exit:
      return {{Branch::Pop, 0}};
    default:
      return {{Branch::Pop, tails_[suffix]}};
  }
}

bool Program::has_atomic() const {
  for (const auto& s : stmts)
    if (s.kind == StmtKind::NextBlock) return true;
  return false;
}

bool Program::sig_wait_only() const {
  for (const auto& t : tasks)
    for (Mode m : t.modes)
      if (m != Mode::SigWait) return false;
  for (const auto& s : stmts) {
    if (s.kind == StmtKind::NewPhaser && s.mode != Mode::SigWait) return false;
    for (Mode m : s.arg_modes)
      if (m != Mode::SigWait) return false;
  }
  return true;
}

namespace {
int prec(Cond::Kind k) {
  switch (k) {
    case Cond::Or: return 1;
    case Cond::And: return 2;
    case Cond::Not: return 3;
    default: return 4;
  }
}
}  // namespace

std::string Program::print_cond(const Cond& c) const {
  auto sub = [&](const Cond& x, int p) {
    std::string s = print_cond(x);
    return prec(x.kind) < p ? "(" + s + ")" : s;
  };
  switch (c.kind) {
    case Cond::Ndet: return "ndet()";
    case Cond::True: return "true";
    case Cond::False: return "false";
    case Cond::Var: return bool_vars[c.var];
    case Cond::Not: return "!" + sub(*c.lhs, 3);
    case Cond::Or: return sub(*c.lhs, 1) + " || " + sub(*c.rhs, 2);
    case Cond::And: return sub(*c.lhs, 2) + " && " + sub(*c.rhs, 3);
  }
  return "?";
}

std::string Program::print_stmt(int id, int indent) const {
  const Stmt& s = stmts[id];
  auto body = [&](const std::vector<int>& b) {
    if (b.empty()) return std::string("{}");
    if (indent < 0) {
      std::string r = "{";
      for (int x : b) r += " " + print_stmt(x, -1);
      return r + " }";
    }
    std::string r = "{\n";
    for (int x : b) r += std::string(indent + 2, ' ') + print_stmt(x, indent + 2) + "\n";
    return r + std::string(indent, ' ') + "}";
  };
  auto pv = [&](int v) { return v >= 0 ? phaser_vars[v] : std::string("?"); };
  switch (s.kind) {
    case StmtKind::NewPhaser:
      return pv(s.pvar) + " = newPhaser(" + (s.mode == Mode::SigWait ? "" : mode_name(s.mode)) + ");";
    case StmtKind::Asynch: {
      std::string r = "asynch(" + s.task_name;
      for (size_t i = 0; i < s.args.size(); ++i) {
        r += ", " + pv(s.args[i]);
        if (s.arg_mode_given[i]) r += std::string(":") + mode_name(s.arg_modes[i]);
      }
      return r + ");";
    }
    case StmtKind::Drop: return "drop(" + pv(s.pvar) + ");";
    case StmtKind::Signal: return "signal(" + pv(s.pvar) + ");";
    case StmtKind::Wait: return "wait(" + pv(s.pvar) + ");";
    case StmtKind::NextBlock: return "next(" + pv(s.pvar) + ") " + body(s.body);
    case StmtKind::Assign: return bool_vars[s.bvar] + " = " + print_cond(*s.cond) + ";";
    case StmtKind::Assert: return "assert(" + print_cond(*s.cond) + ");";
    case StmtKind::While: return "while (" + print_cond(*s.cond) + ") " + body(s.body);
    case StmtKind::If: return "if (" + print_cond(*s.cond) + ") " + body(s.body);
    case StmtKind::Exit: return "exit;";
  }
  return "?";
}

std::string Program::print_suffix(int suffix) const {
  const auto& seq = suffixes_[suffix];
  if (seq.empty()) return "";
  std::string r;
  for (size_t i = 0; i < seq.size(); ++i) {
    if (i) r += ' ';
    r += print_stmt(seq[i], -1);
  }
  return r;
}

std::string Program::print() const {
  std::string r;
  if (!bool_vars.empty()) {
    r += "bool ";
    for (size_t i = 0; i < bool_vars.size(); ++i) r += (i ? ", " : "") + bool_vars[i];
    r += ";\n\n";
  }
  for (size_t k = 0; k < tasks.size(); ++k) {
    const TaskDef& t = tasks[k];
    if (k) r += "\n";
    r += t.name + "(";
    for (size_t i = 0; i < t.params.size(); ++i) {
      r += (i ? ", " : "") + phaser_vars[t.params[i]];
      if (t.modes[i] != Mode::SigWait) r += std::string(":") + mode_name(t.modes[i]);
    }
    r += ") {\n";
    for (int x : t.body) r += "  " + print_stmt(x, 2) + "\n";
    r += "}\n";
  }
  return r;
}

namespace {

struct ScopeChecker {
  const Program& p;
  std::vector<Diagnostic>& out;

  void use(int v, const Stmt& s, const std::set<int>& bound) {
    if (v >= 0 && !bound.count(v))
      out.push_back({Diagnostic::Error, "unbound phaser variable '" + p.phaser_vars[v] + "'", s.line});
  }

  std::set<int> run(const std::vector<int>& body, std::set<int> bound) {
    for (int id : body) {
      const Stmt& s = p.stmts[id];
      switch (s.kind) {
        case StmtKind::NewPhaser: bound.insert(s.pvar); break;
        case StmtKind::Signal:
        case StmtKind::Wait:
        case StmtKind::Drop: use(s.pvar, s, bound); break;
        case StmtKind::NextBlock:
          use(s.pvar, s, bound);
          run(s.body, bound);
          break;
        case StmtKind::Asynch:
          for (int a : s.args) use(a, s, bound);
          break;
        case StmtKind::While:
        case StmtKind::If: run(s.body, bound); break;
        default: break;
      }
    }
    return bound;
  }
};

}  // namespace

std::vector<Diagnostic> validate(const Program& p) {
  std::vector<Diagnostic> out;
  int mains = 0;
  std::set<std::string> names;
  for (const auto& t : p.tasks) {
    if (!names.insert(t.name).second) out.push_back({Diagnostic::Error, "duplicate task name '" + t.name + "'", t.line});
    if (t.name == "main") {
      ++mains;
      if (!t.params.empty()) out.push_back({Diagnostic::Error, "main must not take parameters", t.line});
    }
    std::set<int> ps(t.params.begin(), t.params.end());
    if (ps.size() != t.params.size())
      out.push_back({Diagnostic::Error, "duplicate parameter in task '" + t.name + "'", t.line});
  }
  if (mains == 0) out.push_back({Diagnostic::Error, "missing task 'main'", 0});
  bool atomic = false;
  for (const auto& s : p.stmts) {
    if (s.kind == StmtKind::NextBlock && s.line > 0) atomic = true;
    if (s.kind != StmtKind::Asynch) continue;
    if (s.task < 0) {
      out.push_back({Diagnostic::Error, "asynch of undeclared task '" + s.task_name + "'", s.line});
    } else if (p.tasks[s.task].params.size() != s.args.size()) {
      out.push_back({Diagnostic::Error,
                     "arity mismatch in asynch of '" + s.task_name + "': expected " +
                         std::to_string(p.tasks[s.task].params.size()) + ", got " + std::to_string(s.args.size()),
                     s.line});
    }
    std::set<int> as(s.args.begin(), s.args.end());
    if (as.size() != s.args.size())
      out.push_back({Diagnostic::Error, "duplicate asynch arguments in asynch of '" + s.task_name + "'", s.line});
  }
  ScopeChecker sc{p, out};
  for (const auto& t : p.tasks) sc.run(t.body, std::set<int>(t.params.begin(), t.params.end()));
  if (atomic) out.push_back({Diagnostic::Info, "atomic program: exact symbolic engine unavailable", 0});
  return out;
}

}  // namespace phz
