#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcc/term.hpp"

namespace lcc {

struct ParseError : std::runtime_error {
  ParseError(std::string msg, int line, int col)
      : std::runtime_error(msg + " at " + std::to_string(line) + ":" + std::to_string(col)),
        line(line),
        col(col) {}
  int line, col;
};

// Constraint expression tree over {1, 0, atom, *, exists x., !}.
struct Constraint {
  enum class Kind { One, Zero, Atom, Tensor, Exists, Bang };
  Kind kind = Kind::One;
  lcc::Atom atom;                    // Atom
  std::vector<Constraint> children;  // Tensor (>=2), Exists (1), Bang (1)
  std::vector<VarId> binders;        // Exists

  static Constraint one() { return {}; }
  static Constraint zero() {
    Constraint c;
    c.kind = Kind::Zero;
    return c;
  }
  static Constraint mk_atom(lcc::Atom a) {
    Constraint c;
    c.kind = Kind::Atom;
    c.atom = std::move(a);
    return c;
  }
  static Constraint tensor(std::vector<Constraint> cs);
  static Constraint exists(std::vector<VarId> vars, Constraint body);
  static Constraint bang(Constraint body) {
    Constraint c;
    c.kind = Kind::Bang;
    c.children.push_back(std::move(body));
    return c;
  }
  bool operator==(const Constraint&) const = default;
};

struct Process;
using ProcessPtr = std::shared_ptr<const Process>;

// One branch of a guarded sum: forall univ. (guard -> body).
struct AskBranch {
  std::vector<VarId> univ;
  Constraint guard;
  ProcessPtr body;
  bool operator==(const AskBranch& o) const;
};

// Process tree. Sum holds >=1 ask branches; Repl replicates a sum.
// Hole is only used to represent evaluation contexts.
struct Process {
  enum class Kind { Tell, Par, Exists, Sum, Repl, Hole };
  Kind kind = Kind::Tell;
  Constraint tell;                  // Tell
  std::vector<ProcessPtr> children; // Par (>=2), Exists (1)
  std::vector<VarId> binders;       // Exists
  std::vector<AskBranch> branches;  // Sum, Repl

  bool operator==(const Process& o) const;
};

ProcessPtr mk_tell(Constraint c);
ProcessPtr mk_par(std::vector<ProcessPtr> ps);
ProcessPtr mk_exists(std::vector<VarId> vars, ProcessPtr body);
ProcessPtr mk_sum(std::vector<AskBranch> branches);
ProcessPtr mk_repl(std::vector<AskBranch> branches);
ProcessPtr mk_hole();

// Declarations collected from an .lcc header. Axioms are directed rewrite
// steps between constraints that must be flat; their variables are pattern
// variables.
struct PredDecl {
  std::string name;
  uint32_t arity = 0;
  bool classical = false;
};
struct FunDecl {
  std::string name;
  uint32_t arity = 0;
};
struct AxiomDecl {
  Constraint lhs, rhs;
};
struct SystemDecl {
  std::vector<PredDecl> preds;
  std::vector<FunDecl> funs;
  std::vector<AxiomDecl> axioms;
};

struct ProcessDef {
  std::string name;
  ProcessPtr body;
};

struct LccFile {
  SystemDecl decl;
  std::vector<ProcessDef> defs;
  const ProcessPtr* find(const std::string& name) const;
};

// Symbol context shared by the parser and printer. Predicates must be
// declared before use; function symbols may be declared or get their arity
// fixed at first use; undeclared bare identifiers in term position are
// variables.
class SymbolScope {
 public:
  Sym declare_pred(const std::string& name, uint32_t arity, bool classical);
  Sym declare_fun(const std::string& name, uint32_t arity);

  const Interner& syms() const { return syms_; }
  Interner& vars() { return vars_; }
  const Interner& vars() const { return vars_; }

  bool is_pred(Sym s) const { return info_[s].is_pred; }
  bool is_classical(Sym s) const { return info_[s].classical; }
  uint32_t arity(Sym s) const { return info_[s].arity; }
  const std::string& sym_name(Sym s) const { return syms_.name(s); }
  std::optional<Sym> find_sym(std::string_view name) const;

  // Interns `name` as a function symbol with the given arity, erroring on an
  // arity clash; used for numerals and inferred functors.
  Sym fun_at_use(const std::string& name, uint32_t arity, int line, int col);

  std::vector<Sym> all_preds() const;
  size_t sym_count() const { return syms_.size(); }

  // Reserved nullary classical predicate standing for an inconsistent store.
  Sym false_pred() const { return false_pred_; }
  // Reserved free variable injected as the fresh name when instantiating
  // guard closures.
  VarId fresh_input_var() const { return fresh_input_var_; }

  SymbolScope();

 private:
  struct Info {
    bool is_pred = false;
    bool classical = false;
    uint32_t arity = 0;
    bool declared = false;
  };
  Interner syms_;
  Interner vars_;
  std::vector<Info> info_;
  Sym false_pred_;
  VarId fresh_input_var_;
};

// Parsing. The scope accumulates declarations; parse_file starts from a
// fresh scope embedded in the result.
struct ParsedFile {
  std::shared_ptr<SymbolScope> scope;
  LccFile file;
};

ParsedFile parse_lcc_file(const std::string& text);
ProcessPtr parse_process(const std::string& text, SymbolScope& scope);
Constraint parse_constraint(const std::string& text, SymbolScope& scope);

// Printing; parse(print(x)) is structurally equal to x.
std::string print_term(const Term& t, const SymbolScope& sc);
std::string print_atom(const Atom& a, const SymbolScope& sc);
std::string print_constraint(const Constraint& c, const SymbolScope& sc);
std::string print_process(const Process& p, const SymbolScope& sc);
inline std::string print_process(const ProcessPtr& p, const SymbolScope& sc) { return print_process(*p, sc); }

// Free variables, following the binder conventions: exists and ask
// universals bind, extruded variables of outputs stay free.
void free_vars(const Process& p, std::set<VarId>& out);
void free_vars(const Constraint& c, std::set<VarId>& out);
std::set<VarId> free_vars(const Process& p);

// Capture-avoiding substitution; binders colliding with the substitution are
// renamed to fresh synthetic variables drawn from *fresh_counter.
ProcessPtr subst_process(const ProcessPtr& p, const Subst& s, VarId* fresh_counter);
Constraint subst_constraint(const Constraint& c, const Subst& s, VarId* fresh_counter);

}  // namespace lcc
