#pragma once

#include <memory>

#include "lcc/normal.hpp"

namespace lcc {

// A declared axiom, compiled to a directed rewrite step over flat
// constraints. All variables occurring in it are pattern variables; rhs-only
// variables are existential and freshened at each application.
struct Axiom {
  Flat lhs, rhs;
  std::set<VarId> pattern_vars;
  std::vector<VarId> rhs_fresh;
};

// Compiled constraint system: predicate table, axioms as rewrite steps, an
// axiom-depth budget and an optional built-in theory.
class System {
 public:
  System(std::shared_ptr<SymbolScope> scope, std::vector<Axiom> axioms, int axiom_depth = 2,
         std::shared_ptr<const Theory> theory = nullptr)
      : scope_(std::move(scope)), axioms_(std::move(axioms)), axiom_depth_(axiom_depth),
        theory_(std::move(theory)) {}

  static System compile(std::shared_ptr<SymbolScope> scope, const SystemDecl& decl, int axiom_depth = 2);

  const SymbolScope& scope() const { return *scope_; }
  std::shared_ptr<SymbolScope> scope_ptr() const { return scope_; }
  const std::vector<Axiom>& axioms() const { return axioms_; }
  int axiom_depth() const { return axiom_depth_; }
  void set_axiom_depth(int d) { axiom_depth_ = d; }
  const Theory* theory() const { return theory_.get(); }
  void set_theory(std::shared_ptr<const Theory> t) { theory_ = std::move(t); }
  Sym false_pred() const { return scope_->false_pred(); }
  NormEnv norm_env() const { return NormEnv{false_pred(), theory_.get()}; }

  bool is_classical(Sym pred) const { return scope_->is_classical(pred); }

  State norm(const ProcessPtr& p) const { return normalize(p, norm_env()); }

 private:
  std::shared_ptr<SymbolScope> scope_;
  std::vector<Axiom> axioms_;
  int axiom_depth_;
  std::shared_ptr<const Theory> theory_;
};

// Result of matching a guard against a store: the substitution for the
// guard's universal variables, the consumed linear atoms, the store
// existentials exposed by the match, and the residual store.
struct Match {
  Subst theta;
  std::vector<Atom> consumed;  // linear store atoms, sorted
  std::vector<VarId> opened;   // store binders occurring in the range of theta
  Flat residual;
  // store snapshot the match was found in (after axiom rewriting)
  Flat rewritten_store;

  bool operator==(const Match& o) const {
    return theta == o.theta && consumed == o.consumed && residual == o.residual;
  }
};

// All stores reachable from `store` by at most `depth` axiom steps
// (including the store itself), deduplicated.
std::vector<Flat> axiom_closure(const Flat& store, const System& sys, int depth);

// The complete finite set of most-general matches of a guard against a
// store. Linear guard atoms map injectively to distinct linear store atoms
// or non-consumptively to banged ones; banged guard atoms map to banged
// store atoms; only `univ` variables are instantiated (store variables are
// rigid). Axioms may rewrite the store before matching.
std::vector<Match> match_guard(const Flat& store, const Flat& guard, const std::vector<VarId>& univ,
                               const System& sys);

// Entailment c |- d on the flat fragment with residual ignored; the
// existentials of d are treated as matchable. A store containing falsity
// entails everything.
bool entails(const Flat& c, const Flat& d, const System& sys);

struct ClassicalViolation {
  Sym pred;
  std::string where;
};

// Every predicate flagged classical may occur only banged.
std::vector<ClassicalViolation> check_classical(const System& sys);
std::vector<ClassicalViolation> check_classical(const System& sys, const std::vector<ProcessDef>& defs);

}  // namespace lcc
