#pragma once

#include <optional>

#include "lcc/entail.hpp"

namespace lcc {

// Decidable, alpha-closed constraint-set descriptions used as ask/observation
// filter D and tell/input filter E. Either intensional (a fixed pattern
// family) or extensional (a finite list of constraints).
class Filter {
 public:
  enum class Kind {
    All,            // every constraint
    Classical,      // banged atoms of classical predicates only
    ClassicalPlus,  // classical, or a single linear atom of a given predicate
    Atoms,          // a single atom, possibly quantified
    PiD,            // {1} u { exists y. gamma(x,y) | x != y }
    PiDStar,        // PiD u { gamma(x,y) }
    PiE,            // {1} u { gamma(x,y) }
    Finite,         // explicit list, membership up to renaming
  };

  static Filter all() { return Filter(Kind::All); }
  static Filter classical() { return Filter(Kind::Classical); }
  static Filter classical_plus(Sym pred) {
    Filter f(Kind::ClassicalPlus);
    f.pred_ = pred;
    return f;
  }
  static Filter atoms() { return Filter(Kind::Atoms); }
  static Filter pi_d(Sym gamma) {
    Filter f(Kind::PiD);
    f.pred_ = gamma;
    return f;
  }
  static Filter pi_d_star(Sym gamma) {
    Filter f(Kind::PiDStar);
    f.pred_ = gamma;
    return f;
  }
  static Filter pi_e(Sym gamma) {
    Filter f(Kind::PiE);
    f.pred_ = gamma;
    return f;
  }
  static Filter finite(std::vector<Flat> list);

  // `closed` is the exists-closed form of an action constraint.
  bool contains(const Flat& closed, const System& sys) const;

  // Upper bounds on emissions that can possibly pass the filter; lets the
  // output enumeration skip hopeless sub-multisets.
  size_t max_linear() const;
  size_t max_banged() const;

  Kind kind() const { return kind_; }
  std::string describe(const SymbolScope& sc) const;

  // Spec syntax: all | classical | classical+<pred> | atoms | pi-d | pi-d* |
  // pi-e | list: <c1> ; <c2> ; ...
  static Filter parse_spec(const std::string& spec, SymbolScope& scope);

 private:
  explicit Filter(Kind k) : kind_(k) {}
  Kind kind_;
  Sym pred_ = 0;
  std::vector<Flat> list_;
  std::set<std::string> list_keys_;
};

struct Filters {
  Filter D = Filter::all();
  Filter E = Filter::all();
};

}  // namespace lcc
