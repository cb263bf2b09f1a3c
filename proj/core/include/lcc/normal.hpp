#pragma once

#include <string>

#include "lcc/syntax.hpp"

namespace lcc {

struct NonFlatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat constraint: exists binders over a multiset of linear atoms plus a
// duplicate-free set of banged atoms, with an absorbing falsity flag.
struct Flat {
  std::vector<VarId> binders;
  std::vector<Atom> lin;
  std::vector<Atom> bang;
  bool falsity = false;

  bool is_one() const { return !falsity && binders.empty() && lin.empty() && bang.empty(); }
  bool operator==(const Flat&) const = default;
};

// Rejects bangs over anything but a single atom; 1 disappears, any 0 makes
// the result the absorbing falsity constraint. Binders are kept when unique
// and renamed from *fresh otherwise.
Flat flatten_constraint(const Constraint& c, VarId* fresh);
Flat flatten_constraint(const Constraint& c);

Constraint flat_to_constraint(const Flat& f);
std::set<VarId> flat_vars(const Flat& f);  // free + bound
std::string print_flat(const Flat& f, const SymbolScope& sc);

// Hook for a built-in constraint theory: banged atoms of theory predicates
// are replaced by a canonical solved form each time a state is normalized.
class Theory {
 public:
  virtual ~Theory() = default;
  virtual bool is_theory_pred(Sym p) const = 0;
  // Canonical solved form of the given theory atoms; sets *inconsistent on
  // clash (the caller then collapses the store to `false`).
  virtual std::vector<Atom> solve(const std::vector<Atom>& atoms, bool* inconsistent) const = 0;
  // Entailment of one theory atom from a solved store.
  virtual bool entails(const std::vector<Atom>& solved, const Atom& goal) const = 0;
};

struct NormEnv {
  Sym false_pred = 0;
  const Theory* theory = nullptr;
};

// Guard of a normalized ask: quantifier free (guard existentials have been
// folded into the universal variables).
struct NAsk {
  std::vector<VarId> univ;
  std::vector<Atom> guard_lin;
  std::vector<Atom> guard_bang;
  ProcessPtr body;
  bool operator==(const NAsk& o) const {
    return univ == o.univ && guard_lin == o.guard_lin && guard_bang == o.guard_bang && *body == *o.body;
  }
};

struct NSum {
  std::vector<NAsk> branches;
  bool operator==(const NSum&) const = default;
};

// Canonical process: hidden names plus a multiset of components. Parallel
// composition and hiding are fully hoisted, tell(1) is gone, tells are split
// into atoms, banged atoms are deduplicated, and a sum duplicating a
// replicated sum is absorbed into it.
struct State {
  std::vector<VarId> hidden;
  std::vector<Atom> lin;
  std::vector<Atom> bang;
  std::vector<NSum> sums;
  std::vector<NSum> repls;

  bool has_false(Sym false_pred) const {
    for (const Atom& a : bang)
      if (a.pred == false_pred) return true;
    return false;
  }
};

State normalize(const ProcessPtr& p, const NormEnv& env, VarId* fresh);
State normalize(const ProcessPtr& p, const NormEnv& env);

// Canonical byte string: equal keys iff states are identical up to renaming
// of hidden names, multiset reordering and banged-set ordering.
using StateKey = std::string;
StateKey canonical_key(const State& s);
// `numbering` receives the canonical index assigned to each hidden name.
StateKey canonical_key(const State& s, std::map<VarId, int>* numbering);
std::string canonical_flat_key(const Flat& f);
std::string canonical_flat_key(const Flat& f, std::map<VarId, int>* numbering);

ProcessPtr state_to_process(const State& s);
ProcessPtr state_to_process_open(const State& s);  // without the exists wrapper

std::set<VarId> state_free_vars(const State& s);
std::set<VarId> component_free_vars(const State& s);  // free vars incl. hidden occurrences

// First synthetic id safely above everything occurring in the state.
VarId fresh_base(const State& s);
VarId fresh_base(const ProcessPtr& p);

std::string print_state(const State& s, const SymbolScope& sc);

}  // namespace lcc
