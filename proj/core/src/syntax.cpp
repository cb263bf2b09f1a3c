#include "lcc/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace lcc {

Constraint Constraint::tensor(std::vector<Constraint> cs) {
  std::vector<Constraint> flat;
  for (Constraint& c : cs) {
    if (c.kind == Kind::Tensor)
      for (Constraint& k : c.children) flat.push_back(std::move(k));
    else
      flat.push_back(std::move(c));
  }
  if (flat.size() == 1) return std::move(flat[0]);
  Constraint c;
  c.kind = Kind::Tensor;
  c.children = std::move(flat);
  return c;
}

Constraint Constraint::exists(std::vector<VarId> vars, Constraint body) {
  if (vars.empty()) return body;
  Constraint c;
  c.kind = Kind::Exists;
  c.binders = std::move(vars);
  c.children.push_back(std::move(body));
  return c;
}

bool AskBranch::operator==(const AskBranch& o) const {
  return univ == o.univ && guard == o.guard && *body == *o.body;
}

bool Process::operator==(const Process& o) const {
  if (kind != o.kind || tell != o.tell || binders != o.binders || branches != o.branches) return false;
  if (children.size() != o.children.size()) return false;
  for (size_t i = 0; i < children.size(); ++i)
    if (!(*children[i] == *o.children[i])) return false;
  return true;
}

ProcessPtr mk_tell(Constraint c) {
  auto p = std::make_shared<Process>();
  p->kind = Process::Kind::Tell;
  p->tell = std::move(c);
  return p;
}

ProcessPtr mk_par(std::vector<ProcessPtr> ps) {
  std::vector<ProcessPtr> flat;
  for (auto& p : ps) {
    if (p->kind == Process::Kind::Par)
      for (auto& k : p->children) flat.push_back(k);
    else
      flat.push_back(std::move(p));
  }
  if (flat.size() == 1) return flat[0];
  auto p = std::make_shared<Process>();
  p->kind = Process::Kind::Par;
  p->children = std::move(flat);
  return p;
}

ProcessPtr mk_exists(std::vector<VarId> vars, ProcessPtr body) {
  if (vars.empty()) return body;
  auto p = std::make_shared<Process>();
  p->kind = Process::Kind::Exists;
  p->binders = std::move(vars);
  p->children.push_back(std::move(body));
  return p;
}

ProcessPtr mk_sum(std::vector<AskBranch> branches) {
  auto p = std::make_shared<Process>();
  p->kind = Process::Kind::Sum;
  p->branches = std::move(branches);
  return p;
}

ProcessPtr mk_repl(std::vector<AskBranch> branches) {
  auto p = std::make_shared<Process>();
  p->kind = Process::Kind::Repl;
  p->branches = std::move(branches);
  return p;
}

ProcessPtr mk_hole() {
  auto p = std::make_shared<Process>();
  p->kind = Process::Kind::Hole;
  return p;
}

const ProcessPtr* LccFile::find(const std::string& name) const {
  for (const auto& d : defs)
    if (d.name == name) return &d.body;
  return nullptr;
}

SymbolScope::SymbolScope() {
  false_pred_ = declare_pred("false", 0, /*classical=*/true);
  fresh_input_var_ = vars_.intern("_w");
}

Sym SymbolScope::declare_pred(const std::string& name, uint32_t arity, bool classical) {
  Sym s = syms_.intern(name);
  if (s >= info_.size()) info_.resize(s + 1);
  Info& i = info_[s];
  if (i.declared && (!i.is_pred || i.arity != arity))
    throw std::runtime_error("conflicting declaration for '" + name + "'");
  i = {true, classical, arity, true};
  return s;
}

Sym SymbolScope::declare_fun(const std::string& name, uint32_t arity) {
  Sym s = syms_.intern(name);
  if (s >= info_.size()) info_.resize(s + 1);
  Info& i = info_[s];
  if (i.declared && (i.is_pred || i.arity != arity))
    throw std::runtime_error("conflicting declaration for '" + name + "'");
  i = {false, false, arity, true};
  return s;
}

std::optional<Sym> SymbolScope::find_sym(std::string_view name) const {
  const uint32_t* id = syms_.lookup(name);
  if (!id) return std::nullopt;
  return *id;
}

Sym SymbolScope::fun_at_use(const std::string& name, uint32_t arity, int line, int col) {
  if (auto s = find_sym(name)) {
    if (info_[*s].is_pred) throw ParseError("predicate '" + name + "' used as a function symbol", line, col);
    if (info_[*s].arity != arity)
      throw ParseError("arity mismatch for '" + name + "': declared/used with arity " +
                           std::to_string(info_[*s].arity) + ", here " + std::to_string(arity),
                       line, col);
    return *s;
  }
  return declare_fun(name, arity);
}

std::vector<Sym> SymbolScope::all_preds() const {
  std::vector<Sym> out;
  for (Sym s = 0; s < info_.size(); ++s)
    if (info_[s].is_pred) out.push_back(s);
  return out;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  Ident, Int, LParen, RParen, Star, Arrow, Plus, Pipe, Bang, Dot, Comma,
  Eq, DArrow, Slash, End,
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

struct Lexer {
  explicit Lexer(const std::string& src) : src(src) { advance(); }

  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;
  Token cur;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, cur.line, cur.col); }

  void bump(size_t n) {
    for (size_t i = 0; i < n; ++i) {
      if (src[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }

  void skip_ws() {
    for (;;) {
      while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) bump(1);
      if (pos < src.size() && (src[pos] == '%' || src[pos] == '#')) {
        while (pos < src.size() && src[pos] != '\n') bump(1);
        continue;
      }
      break;
    }
  }

  void advance() {
    skip_ws();
    cur.line = line;
    cur.col = col;
    if (pos >= src.size()) {
      cur = {Tok::End, "", line, col};
      return;
    }
    char c = src[pos];
    auto single = [&](Tok k) {
      cur.kind = k;
      cur.text = std::string(1, c);
      bump(1);
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_' || src[pos] == '\''))
        bump(1);
      cur.kind = Tok::Ident;
      cur.text = src.substr(start, pos - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) bump(1);
      cur.kind = Tok::Int;
      cur.text = src.substr(start, pos - start);
      return;
    }
    switch (c) {
      case '(': single(Tok::LParen); return;
      case ')': single(Tok::RParen); return;
      case '*': single(Tok::Star); return;
      case '+': single(Tok::Plus); return;
      case '|': single(Tok::Pipe); return;
      case '!': single(Tok::Bang); return;
      case '.': single(Tok::Dot); return;
      case ',': single(Tok::Comma); return;
      case '/': single(Tok::Slash); return;
      case '-':
        if (pos + 1 < src.size() && src[pos + 1] == '>') {
          cur = {Tok::Arrow, "->", line, col};
          bump(2);
          return;
        }
        throw ParseError("stray '-'", line, col);
      case '=':
        if (pos + 1 < src.size() && src[pos + 1] == '>') {
          cur = {Tok::DArrow, "=>", line, col};
          bump(2);
          return;
        }
        single(Tok::Eq);
        return;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
  }
};

bool is_keyword(const std::string& s) {
  return s == "tell" || s == "exists" || s == "forall" || s == "pred" || s == "fun" || s == "axiom" ||
         s == "classical";
}

// ---------------------------------------------------------------------------
// Parser

struct Parser {
  Lexer lx;
  SymbolScope& scope;
  const std::map<std::string, ProcessPtr>* defs;  // resolved references, may be null

  Parser(const std::string& src, SymbolScope& scope, const std::map<std::string, ProcessPtr>* defs)
      : lx(src), scope(scope), defs(defs) {}

  Token& cur() { return lx.cur; }
  void next() { lx.advance(); }
  bool at(Tok k) const { return lx.cur.kind == k; }
  bool at_ident(const char* kw) const { return lx.cur.kind == Tok::Ident && lx.cur.text == kw; }

  void expect(Tok k, const char* what) {
    if (!at(k)) lx.fail(std::string("expected ") + what);
    next();
  }

  std::string expect_ident(const char* what) {
    if (!at(Tok::Ident)) lx.fail(std::string("expected ") + what);
    std::string s = cur().text;
    next();
    return s;
  }

  VarId intern_var(const std::string& name, int line, int col) {
    if (is_keyword(name)) throw ParseError("'" + name + "' is reserved", line, col);
    // _x<k> and _r<k> round-trip to the synthetic / rigid-marker id spaces
    if (name.size() > 2 && name[0] == '_' && (name[1] == 'x' || name[1] == 'r') &&
        name.find_first_not_of("0123456789", 2) == std::string::npos) {
      uint32_t k = static_cast<uint32_t>(std::stoul(name.substr(2)));
      return (name[1] == 'x' ? kSyntheticBase : kRigidBase) + k;
    }
    if (auto s = scope.find_sym(name)) {
      if (scope.is_pred(*s)) throw ParseError("predicate '" + name + "' used as a variable", line, col);
      if (scope.arity(*s) != 0) throw ParseError("function '" + name + "' used as a variable", line, col);
    }
    return scope.vars().intern(name);
  }

  std::vector<VarId> var_list() {
    std::vector<VarId> vars;
    for (;;) {
      int line = cur().line, col = cur().col;
      vars.push_back(intern_var(expect_ident("variable name"), line, col));
      if (!at(Tok::Comma)) break;
      next();
    }
    return vars;
  }

  Term term() {
    if (at(Tok::Int)) {
      Sym s = scope.fun_at_use(cur().text, 0, cur().line, cur().col);
      next();
      return Term::app(s);
    }
    int line = cur().line, col = cur().col;
    std::string name = expect_ident("term");
    if (at(Tok::LParen)) {
      next();
      std::vector<Term> args;
      if (!at(Tok::RParen)) {
        for (;;) {
          args.push_back(term());
          if (!at(Tok::Comma)) break;
          next();
        }
      }
      expect(Tok::RParen, "')'");
      Sym s = scope.fun_at_use(name, static_cast<uint32_t>(args.size()), line, col);
      return Term::app(s, std::move(args));
    }
    if (auto s = scope.find_sym(name); s && !scope.is_pred(*s)) {
      if (scope.arity(*s) != 0)
        throw ParseError("function '" + name + "' needs " + std::to_string(scope.arity(*s)) + " arguments",
                         line, col);
      return Term::app(*s);
    }
    return Term::var(intern_var(name, line, col));
  }

  Atom atom() {
    int line = cur().line, col = cur().col;
    std::string name = expect_ident("predicate");
    auto s = scope.find_sym(name);
    if (!s || !scope.is_pred(*s)) throw ParseError("undeclared predicate '" + name + "'", line, col);
    Atom a;
    a.pred = *s;
    if (at(Tok::LParen)) {
      next();
      if (!at(Tok::RParen)) {
        for (;;) {
          a.args.push_back(term());
          if (!at(Tok::Comma)) break;
          next();
        }
      }
      expect(Tok::RParen, "')'");
    }
    if (a.args.size() != scope.arity(*s))
      throw ParseError("arity mismatch for predicate '" + name + "': declared " +
                           std::to_string(scope.arity(*s)) + ", used with " + std::to_string(a.args.size()),
                       line, col);
    return a;
  }

  Constraint constraint() {
    if (at_ident("exists")) {
      next();
      std::vector<VarId> vars = var_list();
      expect(Tok::Dot, "'.'");
      return Constraint::exists(std::move(vars), constraint());
    }
    std::vector<Constraint> factors;
    factors.push_back(cfactor());
    while (at(Tok::Star)) {
      next();
      factors.push_back(cfactor());
    }
    return Constraint::tensor(std::move(factors));
  }

  Constraint cfactor() {
    if (at(Tok::Int)) {
      if (cur().text == "1") {
        next();
        return Constraint::one();
      }
      if (cur().text == "0") {
        next();
        return Constraint::zero();
      }
      lx.fail("numbers other than 1/0 are not constraints");
    }
    if (at(Tok::Bang)) {
      next();
      return Constraint::bang(cfactor());
    }
    if (at(Tok::LParen)) {
      next();
      Constraint c = constraint();
      expect(Tok::RParen, "')'");
      return c;
    }
    if (at_ident("exists")) return constraint();
    return Constraint::mk_atom(atom());
  }

  // Scans from an opening parenthesis (current token) to its match and
  // reports whether the token after it starts a guard continuation.
  bool paren_starts_guard() {
    size_t save_pos = lx.pos;
    int save_line = lx.line, save_col = lx.col;
    Token save_cur = lx.cur;
    int depth = 0;
    bool guard = false;
    for (;;) {
      if (at(Tok::End)) break;
      if (at(Tok::LParen)) ++depth;
      if (at(Tok::RParen)) {
        --depth;
        if (depth == 0) {
          next();
          guard = at(Tok::Arrow) || at(Tok::Plus) || at(Tok::Star);
          break;
        }
      }
      next();
    }
    lx.pos = save_pos;
    lx.line = save_line;
    lx.col = save_col;
    lx.cur = save_cur;
    return guard;
  }

  // After a balanced parenthesis group, '->' or '*' means the group was a
  // guard; anything else makes it a parenthesized ask branch.
  bool paren_wraps_guard() {
    size_t save_pos = lx.pos;
    int save_line = lx.line, save_col = lx.col;
    Token save_cur = lx.cur;
    int depth = 0;
    bool guard = false;
    for (;;) {
      if (at(Tok::End)) break;
      if (at(Tok::LParen)) ++depth;
      if (at(Tok::RParen)) {
        --depth;
        if (depth == 0) {
          next();
          guard = at(Tok::Arrow) || at(Tok::Star);
          break;
        }
      }
      next();
    }
    lx.pos = save_pos;
    lx.line = save_line;
    lx.col = save_col;
    lx.cur = save_cur;
    return guard;
  }

  AskBranch ask() {
    if (at(Tok::LParen) && !paren_wraps_guard()) {
      next();
      AskBranch inner = ask();
      expect(Tok::RParen, "')'");
      return inner;
    }
    AskBranch b;
    if (at_ident("forall")) {
      next();
      b.univ = var_list();
      expect(Tok::Dot, "'.'");
    }
    std::vector<Constraint> factors;
    factors.push_back(cfactor());
    while (at(Tok::Star)) {
      next();
      factors.push_back(cfactor());
    }
    b.guard = Constraint::tensor(std::move(factors));
    expect(Tok::Arrow, "'->'");
    b.body = pproc();
    return b;
  }

  ProcessPtr sum() {
    std::vector<AskBranch> branches;
    branches.push_back(ask());
    while (at(Tok::Plus)) {
      next();
      branches.push_back(ask());
    }
    return mk_sum(std::move(branches));
  }

  ProcessPtr pproc() {
    if (at_ident("tell")) {
      next();
      expect(Tok::LParen, "'('");
      Constraint c = constraint();
      expect(Tok::RParen, "')'");
      return mk_tell(std::move(c));
    }
    if (at_ident("exists")) {
      next();
      std::vector<VarId> vars = var_list();
      expect(Tok::Dot, "'.'");
      return mk_exists(std::move(vars), pproc());
    }
    if (at_ident("forall")) return sum();
    if (at(Tok::Bang)) {
      int line = cur().line, col = cur().col;
      next();
      ProcessPtr body = pproc();
      if (body->kind != Process::Kind::Sum)
        throw ParseError("replication applies only to guards", line, col);
      return mk_repl(body->branches);
    }
    if (at(Tok::LParen)) {
      if (paren_starts_guard()) return sum();
      next();
      ProcessPtr p = process();
      expect(Tok::RParen, "')'");
      return p;
    }
    if (at(Tok::Int)) return sum();  // a guard like "1 -> P"
    if (at(Tok::Ident)) {
      // Either an ask whose guard starts with an atom, or a reference to an
      // earlier definition. Distinguish by scanning the atom.
      size_t save_pos = lx.pos;
      int save_line = lx.line, save_col = lx.col;
      Token save_cur = lx.cur;
      std::string name = cur().text;
      next();
      bool guard;
      if (at(Tok::LParen)) {
        guard = paren_starts_guard();
      } else {
        guard = at(Tok::Arrow) || at(Tok::Star) || at(Tok::Plus);
      }
      lx.pos = save_pos;
      lx.line = save_line;
      lx.col = save_col;
      lx.cur = save_cur;
      if (guard) return sum();
      if (defs) {
        auto it = defs->find(name);
        if (it != defs->end()) {
          next();
          return it->second;
        }
      }
      lx.fail("expected a process; '" + name + "' is not a known definition");
    }
    lx.fail("expected a process");
  }

  ProcessPtr process() {
    std::vector<ProcessPtr> parts;
    parts.push_back(pproc());
    while (at(Tok::Pipe)) {
      next();
      parts.push_back(pproc());
    }
    return mk_par(std::move(parts));
  }

  uint32_t expect_arity() {
    if (!at(Tok::Int)) lx.fail("expected arity");
    uint32_t n = static_cast<uint32_t>(std::stoul(cur().text));
    next();
    return n;
  }

  LccFile file() {
    LccFile f;
    std::map<std::string, ProcessPtr> resolved;
    defs = &resolved;
    while (!at(Tok::End)) {
      if (at_ident("pred")) {
        next();
        PredDecl d;
        d.name = expect_ident("predicate name");
        expect(Tok::Slash, "'/'");
        d.arity = expect_arity();
        if (at_ident("classical")) {
          next();
          d.classical = true;
        }
        expect(Tok::Dot, "'.'");
        scope.declare_pred(d.name, d.arity, d.classical);
        f.decl.preds.push_back(std::move(d));
        continue;
      }
      if (at_ident("fun")) {
        next();
        FunDecl d;
        d.name = expect_ident("function name");
        expect(Tok::Slash, "'/'");
        d.arity = expect_arity();
        expect(Tok::Dot, "'.'");
        scope.declare_fun(d.name, d.arity);
        f.decl.funs.push_back(std::move(d));
        continue;
      }
      if (at_ident("axiom")) {
        next();
        AxiomDecl a;
        a.lhs = constraint();
        expect(Tok::DArrow, "'=>'");
        a.rhs = constraint();
        expect(Tok::Dot, "'.'");
        f.decl.axioms.push_back(std::move(a));
        continue;
      }
      std::string name = expect_ident("definition name");
      expect(Tok::Eq, "'='");
      ProcessPtr body = process();
      expect(Tok::Dot, "'.'");
      if (resolved.count(name)) lx.fail("duplicate definition '" + name + "'");
      resolved.emplace(name, body);
      f.defs.push_back({name, body});
    }
    return f;
  }
};

}  // namespace

ParsedFile parse_lcc_file(const std::string& text) {
  ParsedFile out;
  out.scope = std::make_shared<SymbolScope>();
  Parser p(text, *out.scope, nullptr);
  out.file = p.file();
  return out;
}

ProcessPtr parse_process(const std::string& text, SymbolScope& scope) {
  Parser p(text, scope, nullptr);
  ProcessPtr res = p.process();
  if (!p.at(Tok::End)) p.lx.fail("trailing input after process");
  return res;
}

Constraint parse_constraint(const std::string& text, SymbolScope& scope) {
  Parser p(text, scope, nullptr);
  Constraint res = p.constraint();
  if (!p.at(Tok::End)) p.lx.fail("trailing input after constraint");
  return res;
}

// ---------------------------------------------------------------------------
// Printer

std::string print_term(const Term& t, const SymbolScope& sc) {
  if (t.is_var()) return var_display_name(sc.vars(), t.var_id());
  std::string s = sc.sym_name(t.fn());
  if (t.args().empty()) return s;
  s += '(';
  for (size_t i = 0; i < t.args().size(); ++i) {
    if (i) s += ',';
    s += print_term(t.args()[i], sc);
  }
  s += ')';
  return s;
}

std::string print_atom(const Atom& a, const SymbolScope& sc) {
  std::string s = sc.sym_name(a.pred);
  if (a.args.empty()) return s;
  s += '(';
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (i) s += ',';
    s += print_term(a.args[i], sc);
  }
  s += ')';
  return s;
}

namespace {

std::string print_var_list(const std::vector<VarId>& vars, const SymbolScope& sc) {
  std::string s;
  for (size_t i = 0; i < vars.size(); ++i) {
    if (i) s += ", ";
    s += var_display_name(sc.vars(), vars[i]);
  }
  return s;
}

// Precedence: exists < tensor < bang/atom.
std::string print_c(const Constraint& c, const SymbolScope& sc, int min_level) {
  switch (c.kind) {
    case Constraint::Kind::One: return "1";
    case Constraint::Kind::Zero: return "0";
    case Constraint::Kind::Atom: return print_atom(c.atom, sc);
    case Constraint::Kind::Bang: return "!" + print_c(c.children[0], sc, 2);
    case Constraint::Kind::Tensor: {
      std::string s;
      for (size_t i = 0; i < c.children.size(); ++i) {
        if (i) s += " * ";
        s += print_c(c.children[i], sc, 1);
      }
      return min_level > 1 ? "(" + s + ")" : s;
    }
    case Constraint::Kind::Exists: {
      std::string s = "exists " + print_var_list(c.binders, sc) + ". " + print_c(c.children[0], sc, 0);
      return min_level > 0 ? "(" + s + ")" : s;
    }
  }
  return "?";
}

bool guard_needs_parens(const Constraint& g) {
  if (g.kind == Constraint::Kind::Exists || g.kind == Constraint::Kind::Bang) return true;
  if (g.kind == Constraint::Kind::Tensor) return guard_needs_parens(g.children.front());
  return false;
}

// Process levels: 0 par, 1 sum, 2 prefix units.
std::string print_p(const Process& p, const SymbolScope& sc, int min_level);

std::string print_branch(const AskBranch& b, const SymbolScope& sc) {
  std::string s;
  if (!b.univ.empty()) s += "forall " + print_var_list(b.univ, sc) + ". ";
  if (guard_needs_parens(b.guard))
    s += "(" + print_c(b.guard, sc, 0) + ")";
  else
    s += print_c(b.guard, sc, 1);
  s += " -> " + print_p(*b.body, sc, 2);
  return s;
}

std::string print_p(const Process& p, const SymbolScope& sc, int min_level) {
  switch (p.kind) {
    case Process::Kind::Tell:
      return "tell(" + print_c(p.tell, sc, 0) + ")";
    case Process::Kind::Hole:
      return "[]";
    case Process::Kind::Par: {
      std::string s;
      for (size_t i = 0; i < p.children.size(); ++i) {
        if (i) s += " | ";
        s += print_p(*p.children[i], sc, 1);
      }
      return min_level > 0 ? "(" + s + ")" : s;
    }
    case Process::Kind::Exists: {
      std::string s = "exists " + print_var_list(p.binders, sc) + ". " + print_p(*p.children[0], sc, 2);
      return min_level > 2 ? "(" + s + ")" : s;
    }
    case Process::Kind::Sum: {
      std::string s;
      for (size_t i = 0; i < p.branches.size(); ++i) {
        if (i) s += " + ";
        s += print_branch(p.branches[i], sc);
      }
      return min_level > 1 ? "(" + s + ")" : s;
    }
    case Process::Kind::Repl: {
      std::string s = "!(";
      for (size_t i = 0; i < p.branches.size(); ++i) {
        if (i) s += " + ";
        s += print_branch(p.branches[i], sc);
      }
      return s + ")";
    }
  }
  return "?";
}

}  // namespace

std::string print_constraint(const Constraint& c, const SymbolScope& sc) { return print_c(c, sc, 0); }
std::string print_process(const Process& p, const SymbolScope& sc) { return print_p(p, sc, 0); }

// ---------------------------------------------------------------------------
// Free variables and substitution

namespace {

void fv_c(const Constraint& c, std::set<VarId>& bound, std::set<VarId>& out) {
  switch (c.kind) {
    case Constraint::Kind::One:
    case Constraint::Kind::Zero:
      return;
    case Constraint::Kind::Atom: {
      std::set<VarId> vs;
      collect_vars(c.atom, vs);
      for (VarId v : vs)
        if (!bound.count(v)) out.insert(v);
      return;
    }
    case Constraint::Kind::Bang:
    case Constraint::Kind::Tensor:
      for (const Constraint& k : c.children) fv_c(k, bound, out);
      return;
    case Constraint::Kind::Exists: {
      std::vector<VarId> added;
      for (VarId v : c.binders)
        if (bound.insert(v).second) added.push_back(v);
      fv_c(c.children[0], bound, out);
      for (VarId v : added) bound.erase(v);
      return;
    }
  }
}

void fv_p(const Process& p, std::set<VarId>& bound, std::set<VarId>& out) {
  switch (p.kind) {
    case Process::Kind::Tell:
      fv_c(p.tell, bound, out);
      return;
    case Process::Kind::Hole:
      return;
    case Process::Kind::Par:
      for (const auto& k : p.children) fv_p(*k, bound, out);
      return;
    case Process::Kind::Exists: {
      std::vector<VarId> added;
      for (VarId v : p.binders)
        if (bound.insert(v).second) added.push_back(v);
      fv_p(*p.children[0], bound, out);
      for (VarId v : added) bound.erase(v);
      return;
    }
    case Process::Kind::Sum:
    case Process::Kind::Repl:
      for (const AskBranch& b : p.branches) {
        std::vector<VarId> added;
        for (VarId v : b.univ)
          if (bound.insert(v).second) added.push_back(v);
        fv_c(b.guard, bound, out);
        fv_p(*b.body, bound, out);
        for (VarId v : added) bound.erase(v);
      }
      return;
  }
}

std::set<VarId> range_vars(const Subst& s) {
  std::set<VarId> vs;
  for (const auto& [v, t] : s) collect_vars(t, vs);
  return vs;
}

// Binders are renamed when they collide with the substitution domain or the
// free variables of its range.
std::vector<VarId> freshen_binders(const std::vector<VarId>& binders, Subst& local, const Subst& s,
                                   const std::set<VarId>& avoid, VarId* fresh_counter) {
  std::vector<VarId> out;
  out.reserve(binders.size());
  for (VarId v : binders) {
    if (s.count(v) || avoid.count(v)) {
      VarId nv = (*fresh_counter)++;
      local[v] = Term::var(nv);
      out.push_back(nv);
    } else {
      local.erase(v);
      out.push_back(v);
    }
  }
  return out;
}

Constraint subst_c(const Constraint& c, const Subst& s, const std::set<VarId>& avoid, VarId* fresh_counter) {
  switch (c.kind) {
    case Constraint::Kind::One:
    case Constraint::Kind::Zero:
      return c;
    case Constraint::Kind::Atom:
      return Constraint::mk_atom(apply_subst(c.atom, s));
    case Constraint::Kind::Bang:
      return Constraint::bang(subst_c(c.children[0], s, avoid, fresh_counter));
    case Constraint::Kind::Tensor: {
      std::vector<Constraint> ks;
      ks.reserve(c.children.size());
      for (const Constraint& k : c.children) ks.push_back(subst_c(k, s, avoid, fresh_counter));
      return Constraint::tensor(std::move(ks));
    }
    case Constraint::Kind::Exists: {
      Subst inner = s;
      std::vector<VarId> binders = freshen_binders(c.binders, inner, s, avoid, fresh_counter);
      return Constraint::exists(std::move(binders), subst_c(c.children[0], inner, avoid, fresh_counter));
    }
  }
  return c;
}

ProcessPtr subst_p(const ProcessPtr& p, const Subst& s, const std::set<VarId>& avoid, VarId* fresh_counter) {
  if (s.empty()) return p;
  switch (p->kind) {
    case Process::Kind::Tell:
      return mk_tell(subst_c(p->tell, s, avoid, fresh_counter));
    case Process::Kind::Hole:
      return p;
    case Process::Kind::Par: {
      std::vector<ProcessPtr> ks;
      ks.reserve(p->children.size());
      for (const auto& k : p->children) ks.push_back(subst_p(k, s, avoid, fresh_counter));
      return mk_par(std::move(ks));
    }
    case Process::Kind::Exists: {
      Subst inner = s;
      std::vector<VarId> binders = freshen_binders(p->binders, inner, s, avoid, fresh_counter);
      return mk_exists(std::move(binders), subst_p(p->children[0], inner, avoid, fresh_counter));
    }
    case Process::Kind::Sum:
    case Process::Kind::Repl: {
      std::vector<AskBranch> bs;
      bs.reserve(p->branches.size());
      for (const AskBranch& b : p->branches) {
        Subst inner = s;
        AskBranch nb;
        nb.univ = freshen_binders(b.univ, inner, s, avoid, fresh_counter);
        nb.guard = subst_c(b.guard, inner, avoid, fresh_counter);
        nb.body = subst_p(b.body, inner, avoid, fresh_counter);
        bs.push_back(std::move(nb));
      }
      return p->kind == Process::Kind::Sum ? mk_sum(std::move(bs)) : mk_repl(std::move(bs));
    }
  }
  return p;
}

}  // namespace

void free_vars(const Constraint& c, std::set<VarId>& out) {
  std::set<VarId> bound;
  fv_c(c, bound, out);
}

void free_vars(const Process& p, std::set<VarId>& out) {
  std::set<VarId> bound;
  fv_p(p, bound, out);
}

std::set<VarId> free_vars(const Process& p) {
  std::set<VarId> out;
  free_vars(p, out);
  return out;
}

ProcessPtr subst_process(const ProcessPtr& p, const Subst& s, VarId* fresh_counter) {
  return subst_p(p, s, range_vars(s), fresh_counter);
}

Constraint subst_constraint(const Constraint& c, const Subst& s, VarId* fresh_counter) {
  return subst_c(c, s, range_vars(s), fresh_counter);
}

}  // namespace lcc
