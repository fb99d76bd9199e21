#include <algorithm>
#include <fstream>
#include <sstream>

#include "phz/targets.hpp"

namespace phz {

namespace {

std::string trim(std::string_view s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  size_t b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

int index_of(const std::vector<std::string>& names, const std::string& n) {
  auto it = std::find(names.begin(), names.end(), n);
  return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

int phase_value(const std::string& tok, int line) {
  if (tok == "*") return -1;
  try {
    size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used == tok.size() && v >= 0) return v;
  } catch (const std::exception&) {
  }
  throw TargetFormatError("bad phase value '" + tok + "'", line);
}

}  // namespace

PartialConfig parse_partial_config(const Program& p, std::string_view text) {
  PartialConfig pc;
  pc.bv.assign(p.bool_vars.size(), 2);
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
    std::string s = trim(raw);
    if (s.empty()) continue;
    std::istringstream ls(s);
    std::string kw;
    ls >> kw;
    if (kw == "bool") {
      std::string name, eq, val;
      ls >> name >> eq >> val;
      int b = p.bool_index(name);
      if (b < 0) throw TargetFormatError("unknown bool variable '" + name + "'", line);
      if (eq != "=" || (val != "0" && val != "1" && val != "*"))
        throw TargetFormatError("expected 'bool NAME = 0|1|*'", line);
      pc.bv[b] = val == "*" ? 2 : static_cast<std::int8_t>(val == "1");
    } else if (kw == "phaser") {
      std::string name;
      ls >> name;
      if (name.empty() || index_of(pc.phaser_names, name) >= 0)
        throw TargetFormatError("missing or duplicate phaser name", line);
      pc.phaser_names.push_back(name);
      ++pc.phasers;
      for (auto& row : pc.phase) row.emplace_back();
    } else if (kw == "task") {
      std::string name, at;
      ls >> name >> at;
      if (name.empty() || index_of(pc.task_names, name) >= 0)
        throw TargetFormatError("missing or duplicate task name", line);
      if (at != "at") throw TargetFormatError("expected 'task NAME at SUFFIX'", line);
      std::string rest;
      std::getline(ls, rest);
      rest = trim(rest);
      int seq = -1;
      if (rest != "*") {
        try {
          seq = parse_suffix(p, rest);
        } catch (const SyntaxError& e) {
          throw TargetFormatError(std::string("bad suffix: ") + e.what(), line);
        }
        if (seq < 0) throw TargetFormatError("suffix '" + rest + "' is not a control suffix of the program", line);
      }
      pc.task_names.push_back(name);
      pc.seq.push_back(seq);
      pc.phase.emplace_back(pc.phasers);
      ++pc.tasks;
    } else {
      // TASK.PHASER = VAR (W,S) | VAR nreg
      auto dot = kw.find('.');
      if (dot == std::string::npos) throw TargetFormatError("unknown directive '" + kw + "'", line);
      int t = index_of(pc.task_names, kw.substr(0, dot));
      int q = index_of(pc.phaser_names, kw.substr(dot + 1));
      if (t < 0 || q < 0) throw TargetFormatError("unknown task or phaser in '" + kw + "'", line);
      std::string eq, var, val;
      ls >> eq >> var;
      std::getline(ls, val);
      val = trim(val);
      if (eq != "=" || var.empty() || val.empty()) throw TargetFormatError("expected 'T.P = VAR (W,S)|nreg'", line);
      PartialEntry e;
      if (var == "*") {
        e.var = -2;
      } else if (var == "-") {
        e.var = -1;
      } else {
        e.var = p.phaser_index(var);
        if (e.var < 0) throw TargetFormatError("unknown phaser variable '" + var + "'", line);
      }
      if (val == "nreg") {
        e.val = PartialEntry::Nreg;
      } else {
        if (val.front() != '(' || val.back() != ')') throw TargetFormatError("expected '(W,S)' or 'nreg'", line);
        std::string inner = val.substr(1, val.size() - 2);
        auto comma = inner.find(',');
        if (comma == std::string::npos) throw TargetFormatError("expected '(W,S)'", line);
        e.w = phase_value(trim(inner.substr(0, comma)), line);
        e.s = phase_value(trim(inner.substr(comma + 1)), line);
        if (e.w >= 0 && e.s >= 0 && e.w > e.s) throw TargetFormatError("wait phase exceeds signal phase", line);
      }
      if (pc.phase[t][q]) throw TargetFormatError("entry given twice", line);
      pc.phase[t][q] = e;
    }
  }
  return pc;
}

PartialConfig parse_partial_config_file(const Program& p, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw TargetFormatError("cannot open " + path, 0);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_partial_config(p, ss.str());
}

}  // namespace phz
