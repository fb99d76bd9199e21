#include <cctype>
#include <fstream>
#include <sstream>

#include "phz/lang.hpp"

namespace phz {

SyntaxError::SyntaxError(const std::string& msg, int l, int c)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), col(c) {}

namespace {

struct Token {
  enum Kind { Ident, Sym, End } kind;
  std::string text;
  int line, col;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto adv = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char ch = src[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      adv(1);
      continue;
    }
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') adv(1);
      continue;
    }
    if (src.substr(i, 2) == "/*") {
      int l0 = line, c0 = col;
      adv(2);
      while (i < src.size() && src.substr(i, 2) != "*/") adv(1);
      if (i >= src.size()) throw SyntaxError("unterminated comment", l0, c0);
      adv(2);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Token::Ident, std::string(src.substr(i, j - i)), line, col});
      adv(j - i);
      continue;
    }
    static const char* two[] = {":=", "||", "&&"};
    bool matched = false;
    for (const char* t : two) {
      if (src.substr(i, 2) == t) {
        out.push_back({Token::Sym, t, line, col});
        adv(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("(){},;:.=!").find(ch) != std::string_view::npos) {
      out.push_back({Token::Sym, std::string(1, ch), line, col});
      adv(1);
      continue;
    }
    throw SyntaxError(std::string("unexpected character '") + ch + "'", line, col);
  }
  out.push_back({Token::End, "", line, col});
  return out;
}

bool mode_from(const std::string& s, Mode& m) {
  std::string u;
  for (char c : s) u += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (u == "SIG_WAIT" || u == "SIGWAIT") {
    m = Mode::SigWait;
  } else if (u == "SIG") {
    m = Mode::Sig;
  } else if (u == "WAIT") {
    m = Mode::Wait;
  } else {
    return false;
  }
  return true;
}

}  // namespace

class Parser {
 public:
  Parser(std::string_view src, Program& prog) : toks_(lex(src)), p_(prog) {}

  void program() {
    while (peek_ident("bool")) {
      next();
      do {
        const Token& t = expect_ident();
        if (p_.bool_index(t.text) >= 0) throw SyntaxError("duplicate boolean variable '" + t.text + "'", t.line, t.col);
        p_.bool_vars.push_back(t.text);
      } while (accept(","));
      expect(";");
    }
    // Task headers first so asynch can reference tasks declared later.
    size_t save = pos_;
    std::vector<std::string> names;
    while (cur().kind != Token::End) {
      if (peek_ident("task")) next();
      names.push_back(expect_ident().text);
      skip_balanced("(", ")");
      skip_balanced("{", "}");
      accept(";");
    }
    pos_ = save;
    for (auto& n : names) {
      TaskDef td;
      td.name = n;
      p_.tasks.push_back(std::move(td));
    }
    for (size_t k = 0; k < names.size(); ++k) {
      if (peek_ident("task")) next();
      const Token& nt = expect_ident();
      TaskDef& td = p_.tasks[k];
      td.line = nt.line;
      expect("(");
      if (!accept(")")) {
        do {
          const Token& v = expect_ident();
          Mode m = Mode::SigWait;
          if (accept(":")) {
            const Token& mt = expect_ident();
            if (!mode_from(mt.text, m)) throw SyntaxError("unknown registration mode '" + mt.text + "'", mt.line, mt.col);
          }
          td.params.push_back(pvar(v.text));
          td.modes.push_back(m);
        } while (accept(","));
        expect(")");
      }
      expect("{");
      std::vector<int> body = stmts();
      p_.tasks[k].body = std::move(body);
      expect("}");
      accept(";");
    }
    for (size_t k = 0; k < p_.tasks.size(); ++k) {
      if (p_.tasks[k].name == "main" && p_.main_task < 0) p_.main_task = static_cast<int>(k);
    }
  }

  std::vector<int> fragment() {
    std::vector<int> body = stmts();
    if (cur().kind != Token::End) fail("unexpected '" + cur().text + "'");
    return body;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  Program& p_;

  const Token& cur() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, cur().line, cur().col); }
  bool peek_sym(const char* s, size_t ahead = 0) const {
    const Token& t = toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    return t.kind == Token::Sym && t.text == s;
  }
  bool peek_ident(const char* s, size_t ahead = 0) const {
    const Token& t = toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    return t.kind == Token::Ident && t.text == s;
  }
  bool accept(const char* s) {
    if (peek_sym(s)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(const char* s) {
    if (!accept(s)) fail(std::string("expected '") + s + "'" + (cur().kind == Token::End ? " at end of input" : " before '" + cur().text + "'"));
  }
  const Token& expect_ident() {
    if (cur().kind != Token::Ident) fail("expected identifier");
    return next();
  }
  void skip_balanced(const char* open, const char* close) {
    expect(open);
    int depth = 1;
    while (depth > 0) {
      if (cur().kind == Token::End) fail(std::string("unbalanced '") + open + "'");
      if (peek_sym(open)) ++depth;
      if (peek_sym(close)) --depth;
      ++pos_;
    }
  }

  int pvar(const std::string& name) {
    int i = p_.phaser_index(name);
    if (i >= 0) return i;
    p_.phaser_vars.push_back(name);
    return static_cast<int>(p_.phaser_vars.size()) - 1;
  }

  int bvar(const Token& t) {
    int i = p_.bool_index(t.text);
    if (i >= 0) return i;
    if (p_.fragment) {
      p_.bool_vars.push_back(t.text);
      return static_cast<int>(p_.bool_vars.size()) - 1;
    }
    throw SyntaxError("undeclared boolean variable '" + t.text + "'", t.line, t.col);
  }

  Stmt mk(StmtKind k, const Token& at) {
    Stmt s;
    s.kind = k;
    s.line = at.line;
    s.col = at.col;
    return s;
  }

  std::vector<int> stmts() {
    std::vector<int> out;
    while (!peek_sym("}") && cur().kind != Token::End) stmt(out);
    return out;
  }

  std::vector<int> block() {
    if (accept("{")) {
      std::vector<int> b = stmts();
      expect("}");
      return b;
    }
    std::vector<int> b;
    stmt(b);
    return b;
  }

  void end_stmt() { expect(";"); }

  void phaser_op(const std::string& op, int v, const Token& at, std::vector<int>& out) {
    if (op == "signal" || op == "sig") {
      Stmt s = mk(StmtKind::Signal, at);
      s.pvar = v;
      out.push_back(p_.add_stmt(std::move(s)));
    } else if (op == "wait") {
      Stmt s = mk(StmtKind::Wait, at);
      s.pvar = v;
      out.push_back(p_.add_stmt(std::move(s)));
    } else if (op == "drop") {
      Stmt s = mk(StmtKind::Drop, at);
      s.pvar = v;
      out.push_back(p_.add_stmt(std::move(s)));
    } else if (op == "next") {
      Stmt s = mk(StmtKind::Signal, at);
      s.pvar = v;
      out.push_back(p_.add_stmt(std::move(s)));
      Stmt w = mk(StmtKind::Wait, at);
      w.pvar = v;
      out.push_back(p_.add_stmt(std::move(w)));
    } else {
      throw SyntaxError("unknown phaser operation '" + op + "'", at.line, at.col);
    }
  }

  void stmt(std::vector<int>& out) {
    const Token& t = cur();
    if (t.kind != Token::Ident) fail("expected statement");
    const std::string& w = t.text;
    if (w == "while" || w == "if") {
      next();
      expect("(");
      CondPtr c = cond();
      expect(")");
      Stmt s = mk(w == "while" ? StmtKind::While : StmtKind::If, t);
      s.cond = c;
      s.body = block();
      accept(";");
      if (peek_ident("else")) fail("'else' is not part of the language");
      out.push_back(p_.add_stmt(std::move(s)));
      return;
    }
    if (w == "assert") {
      next();
      expect("(");
      Stmt s = mk(StmtKind::Assert, t);
      s.cond = cond();
      expect(")");
      end_stmt();
      out.push_back(p_.add_stmt(std::move(s)));
      return;
    }
    if (w == "exit" && !peek_sym("=", 1) && !peek_sym(":=", 1)) {
      next();
      end_stmt();
      out.push_back(p_.add_stmt(mk(StmtKind::Exit, t)));
      return;
    }
    if (w == "asynch" && peek_sym("(", 1)) {
      next();
      expect("(");
      Stmt s = mk(StmtKind::Asynch, t);
      s.task_name = expect_ident().text;
      while (accept(",")) {
        const Token& a = expect_ident();
        s.args.push_back(pvar(a.text));
        Mode m = Mode::SigWait;
        bool given = false;
        if (accept(":")) {
          const Token& mt = expect_ident();
          if (!mode_from(mt.text, m)) throw SyntaxError("unknown registration mode '" + mt.text + "'", mt.line, mt.col);
          given = true;
        }
        s.arg_modes.push_back(m);
        s.arg_mode_given.push_back(given);
      }
      expect(")");
      end_stmt();
      out.push_back(p_.add_stmt(std::move(s)));
      return;
    }
    if ((w == "next" || w == "nextBlock" || w == "nextblock") && peek_sym("(", 1)) {
      next();
      expect("(");
      const Token& v = expect_ident();
      expect(")");
      if (peek_sym("{")) {
        Stmt s = mk(StmtKind::NextBlock, t);
        s.pvar = pvar(v.text);
        next();
        s.body = stmts();
        expect("}");
        accept(";");
        out.push_back(p_.add_stmt(std::move(s)));
        return;
      }
      if (w != "next") fail("nextBlock requires a body");
      end_stmt();
      phaser_op("next", pvar(v.text), t, out);
      return;
    }
    if ((w == "signal" || w == "sig" || w == "wait" || w == "drop") && peek_sym("(", 1)) {
      next();
      expect("(");
      const Token& v = expect_ident();
      expect(")");
      end_stmt();
      phaser_op(w, pvar(v.text), t, out);
      return;
    }
    // v.op() form
    if (peek_sym(".", 1)) {
      next();
      next();
      const Token& op = expect_ident();
      expect("(");
      expect(")");
      if (op.text == "next" && peek_sym("{")) {
        Stmt s = mk(StmtKind::NextBlock, t);
        s.pvar = pvar(w);
        next();
        s.body = stmts();
        expect("}");
        accept(";");
        out.push_back(p_.add_stmt(std::move(s)));
        return;
      }
      end_stmt();
      phaser_op(op.text, pvar(w), t, out);
      return;
    }
    if (peek_sym("=", 1) || peek_sym(":=", 1)) {
      next();
      bool colon = cur().text == ":=";
      next();
      if (!colon && peek_ident("newPhaser")) {
        next();
        expect("(");
        Stmt s = mk(StmtKind::NewPhaser, t);
        s.pvar = pvar(w);
        if (cur().kind == Token::Ident) {
          const Token& mt = next();
          if (!mode_from(mt.text, s.mode)) throw SyntaxError("unknown registration mode '" + mt.text + "'", mt.line, mt.col);
        }
        expect(")");
        end_stmt();
        out.push_back(p_.add_stmt(std::move(s)));
        return;
      }
      Stmt s = mk(StmtKind::Assign, t);
      s.bvar = bvar(t);
      s.cond = cond();
      end_stmt();
      out.push_back(p_.add_stmt(std::move(s)));
      return;
    }
    fail("unknown statement '" + w + "'");
  }

  CondPtr cond() {
    CondPtr l = conj();
    while (accept("||")) {
      auto c = std::make_shared<Cond>();
      c->kind = Cond::Or;
      c->lhs = l;
      c->rhs = conj();
      l = c;
    }
    return l;
  }

  CondPtr conj() {
    CondPtr l = unary();
    while (accept("&&")) {
      auto c = std::make_shared<Cond>();
      c->kind = Cond::And;
      c->lhs = l;
      c->rhs = unary();
      l = c;
    }
    return l;
  }

  CondPtr unary() {
    auto c = std::make_shared<Cond>();
    if (accept("!")) {
      c->kind = Cond::Not;
      c->lhs = unary();
      return c;
    }
    if (accept("(")) {
      CondPtr inner = cond();
      expect(")");
      return inner;
    }
    const Token& t = expect_ident();
    if (t.text == "true") {
      c->kind = Cond::True;
    } else if (t.text == "false") {
      c->kind = Cond::False;
    } else if (t.text == "ndet" && peek_sym("(")) {
      next();
      expect(")");
      c->kind = Cond::Ndet;
    } else {
      c->kind = Cond::Var;
      c->var = bvar(t);
    }
    return c;
  }
};

int Program::add_stmt(Stmt s) {
  s.id = static_cast<int>(stmts.size());
  stmts.push_back(std::move(s));
  return stmts.back().id;
}

ProgramPtr parse_unchecked(std::string_view text) {
  auto p = std::make_shared<Program>();
  Parser ps(text, *p);
  ps.program();
  for (auto& s : p->stmts) {
    if (s.kind == StmtKind::Asynch) s.task = p->task_index(s.task_name);
  }
  p->close();
  return p;
}

ProgramPtr parse(std::string_view text) {
  ProgramPtr p = parse_unchecked(text);
  for (const Diagnostic& d : validate(*p)) {
    if (d.level == Diagnostic::Error) throw SyntaxError(d.message, d.line, 0);
  }
  return p;
}

ProgramPtr parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

int parse_suffix(const Program& p, std::string_view text) {
  Program scratch;
  scratch.bool_vars = p.bool_vars;
  scratch.phaser_vars = p.phaser_vars;
  for (const auto& t : p.tasks) {
    TaskDef td;
    td.name = t.name;
    td.params = t.params;
    scratch.tasks.push_back(td);
  }
  Parser ps(text, scratch);
  std::vector<int> seq = ps.fragment();
  std::string want;
  for (int id : seq) {
    if (scratch.stmts[id].kind == StmtKind::Asynch) scratch.stmts[id].task = scratch.task_index(scratch.stmts[id].task_name);
    want += scratch.print_stmt(id);
  }
  for (int s = 0; s < p.suffix_count(); ++s) {
    std::string got;
    for (int id : p.suffix(s)) got += p.print_stmt(id);
    if (got == want) return s;
  }
  return -1;
}

}  // namespace phz
