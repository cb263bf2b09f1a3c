#pragma once

// Seeded random generators shared by the unit and acceptance suites.

#include <memory>
#include <random>

#include "lcc/entail.hpp"

namespace testing {

using namespace lcc;

struct GenScope {
  std::shared_ptr<SymbolScope> sc = std::make_shared<SymbolScope>();
  Sym p0, q1, r2;
  Sym ca, cb;   // constants
  Sym kc, kd;   // classical predicates
  GenScope() {
    p0 = sc->declare_pred("p", 0, false);
    q1 = sc->declare_pred("q", 1, false);
    r2 = sc->declare_pred("r", 2, false);
    kc = sc->declare_pred("kc", 1, true);
    kd = sc->declare_pred("kd", 2, true);
    ca = sc->declare_fun("a", 0);
    cb = sc->declare_fun("b", 0);
  }
  System sys() const { return System::compile(sc, SystemDecl{}); }
};

class ProcessGen {
 public:
  ProcessGen(GenScope& g, uint64_t seed) : g_(g), rng_(seed) {
    vars_.push_back(g.sc->vars().intern("x"));
    vars_.push_back(g.sc->vars().intern("y"));
    vars_.push_back(g.sc->vars().intern("z"));
  }

  Term term() {
    switch (rng_() % 3) {
      case 0: return Term::app(g_.ca);
      case 1: return Term::app(g_.cb);
      default: return Term::var(vars_[rng_() % vars_.size()]);
    }
  }

  Atom atom() {
    switch (rng_() % 3) {
      case 0: return Atom{g_.p0, {}};
      case 1: return Atom{g_.q1, {term()}};
      default: return Atom{g_.r2, {term(), term()}};
    }
  }

  Constraint constraint(int depth) {
    int n = 1 + rng_() % 2;
    std::vector<Constraint> parts;
    for (int i = 0; i < n; ++i) {
      Constraint a = Constraint::mk_atom(atom());
      if (rng_() % 4 == 0) a = Constraint::bang(std::move(a));
      parts.push_back(std::move(a));
    }
    if (depth > 0 && rng_() % 5 == 0)
      return Constraint::exists({vars_[rng_() % vars_.size()]}, Constraint::tensor(std::move(parts)));
    return Constraint::tensor(std::move(parts));
  }

  // Replication-free process with a finite closure.
  ProcessPtr finite_process(int depth) {
    if (depth <= 0 || rng_() % 3 == 0) return mk_tell(constraint(depth));
    switch (rng_() % 4) {
      case 0: {
        std::vector<ProcessPtr> kids;
        int n = 2 + rng_() % 2;
        for (int i = 0; i < n; ++i) kids.push_back(finite_process(depth - 1));
        return mk_par(std::move(kids));
      }
      case 1:
        return mk_exists({vars_[rng_() % vars_.size()]}, finite_process(depth - 1));
      case 2: {
        std::vector<AskBranch> bs;
        int n = 1 + rng_() % 2;
        for (int i = 0; i < n; ++i) {
          AskBranch b;
          b.guard = Constraint::mk_atom(atom());
          if (rng_() % 3 == 0) b.univ.push_back(vars_[rng_() % vars_.size()]);
          b.body = finite_process(depth - 1);
          bs.push_back(std::move(b));
        }
        return mk_sum(std::move(bs));
      }
      default:
        return mk_tell(constraint(depth));
    }
  }

  // State whose atoms are all classical (banged, classical predicates), with
  // optional hidden names.
  ProcessPtr classical_process() {
    std::vector<ProcessPtr> kids;
    int n = 1 + rng_() % 4;
    VarId h = vars_[rng_() % vars_.size()];
    bool hide = rng_() % 2 == 0;
    for (int i = 0; i < n; ++i) {
      Atom a = rng_() % 2 == 0 ? Atom{g_.kc, {hide && rng_() % 2 ? Term::var(h) : term()}}
                               : Atom{g_.kd, {term(), term()}};
      kids.push_back(mk_tell(Constraint::bang(Constraint::mk_atom(a))));
    }
    ProcessPtr body = mk_par(std::move(kids));
    return hide ? mk_exists({h}, body) : body;
  }

  std::mt19937_64& rng() { return rng_; }
  const std::vector<VarId>& vars() const { return vars_; }

 private:
  GenScope& g_;
  std::mt19937_64 rng_;
  std::vector<VarId> vars_;
};

}  // namespace testing
