#include "doctest.h"

#include <algorithm>

#include "lcc/entail.hpp"
#include "oracles.hpp"

using namespace lcc;

namespace {

struct Fx {
  std::shared_ptr<SymbolScope> sc = std::make_shared<SymbolScope>();
  Fx() {
    sc->declare_pred("fork", 1, false);
    sc->declare_pred("gamma", 2, false);
    sc->declare_pred("p", 0, false);
    sc->declare_pred("q", 1, false);
    sc->declare_pred("r", 2, false);
    sc->declare_pred("cc", 0, true);
    sc->declare_pred("cd", 0, true);
  }
  System sys(std::vector<AxiomDecl> axioms = {}) const {
    SystemDecl d;
    d.axioms = std::move(axioms);
    return System::compile(sc, d);
  }
  Flat flat(const std::string& s) const { return flatten_constraint(parse_constraint(s, *sc)); }
  std::vector<VarId> vars(std::initializer_list<const char*> names) const {
    std::vector<VarId> out;
    for (const char* n : names) out.push_back(const_cast<SymbolScope&>(*sc).vars().intern(n));
    return out;
  }
};

}  // namespace

TEST_CASE("guard over two forks matches once") {
  Fx fx;
  System sys = fx.sys();
  auto ms = match_guard(fx.flat("fork(1) * fork(2)"), fx.flat("fork(1) * fork(2)"), {}, sys);
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].theta.empty());
  CHECK(ms[0].consumed.size() == 2);
  CHECK(ms[0].residual.lin.empty());
  CHECK(ms[0].residual.bang.empty());
}

TEST_CASE("universal variables match store terms") {
  Fx fx;
  System sys = fx.sys();
  VarId y = fx.sc->vars().intern("y");
  auto ms = match_guard(fx.flat("gamma(x,z)"), fx.flat("gamma(x,y)"), {y}, sys);
  REQUIRE(ms.size() == 1);
  REQUIRE(ms[0].theta.count(y));
  CHECK(ms[0].theta.at(y) == Term::var(fx.sc->vars().intern("z")));
  CHECK(ms[0].residual.lin.empty());
}

TEST_CASE("banged store atoms discharge linear guards without consumption") {
  Fx fx;
  System sys = fx.sys();
  auto ms = match_guard(fx.flat("!p"), fx.flat("p"), {}, sys);
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].consumed.empty());
  CHECK(ms[0].residual.bang.size() == 1);
  // and may discharge two linear copies at once
  auto ms2 = match_guard(fx.flat("!p"), fx.flat("p * p"), {}, sys);
  CHECK(ms2.size() == 1);
}

TEST_CASE("matches expose opened store existentials") {
  Fx fx;
  System sys = fx.sys();
  VarId y = fx.sc->vars().intern("y");
  Flat store = fx.flat("exists v. gamma(x,v)");
  REQUIRE(store.binders.size() == 1);
  auto ms = match_guard(store, fx.flat("gamma(x,y)"), {y}, sys);
  REQUIRE(ms.size() == 1);
  REQUIRE(ms[0].opened.size() == 1);
  CHECK(ms[0].opened[0] == store.binders[0]);
}

TEST_CASE("entailment on the flat fragment") {
  Fx fx;
  System sys = fx.sys();
  for (const char* c : {"1", "p", "fork(1) * fork(2)", "!p * q(1)"}) {
    CAPTURE(c);
    CHECK(entails(fx.flat(c), fx.flat(c), sys));  // identity
  }
  CHECK(entails(fx.flat("gamma(x,z)"), fx.flat("exists y. gamma(x,y)"), sys));
  CHECK(!entails(fx.flat("fork(1)"), fx.flat("fork(2)"), sys));
  CHECK(entails(fx.flat("p * q(1)"), fx.flat("p"), sys));  // residual ignored
  CHECK(!entails(fx.flat("p"), fx.flat("0"), sys));
  CHECK(entails(fx.flat("0"), fx.flat("fork(1)"), sys));  // ex falso
}

TEST_CASE("axioms rewrite the store before matching") {
  Fx fx;
  SymbolScope& sc = *fx.sc;
  System sys = fx.sys({AxiomDecl{parse_constraint("!cc", sc), parse_constraint("!cd", sc)}});
  CHECK(entails(fx.flat("!cc"), fx.flat("!cd"), sys));
  CHECK(!entails(fx.flat("!cd"), fx.flat("!cc"), sys));  // directed
  // depth budget: chain of two
  System sys2 = fx.sys({AxiomDecl{parse_constraint("!cc", sc), parse_constraint("!cd", sc)},
                        AxiomDecl{parse_constraint("!cd", sc), parse_constraint("p", sc)}});
  CHECK(entails(fx.flat("!cc"), fx.flat("p"), sys2));
  sys2.set_axiom_depth(1);
  CHECK(!entails(fx.flat("!cc"), fx.flat("p"), sys2));
}

TEST_CASE("match_guard agrees with the brute force oracle on small stores") {
  Fx fx;
  System sys = fx.sys();
  auto stores = {"fork(1) * fork(2)", "gamma(x,z) * fork(1)", "!p * q(1) * q(2)",
                 "q(1) * q(1)", "exists v. gamma(v,v) * q(1)"};
  auto guards = {"fork(1)", "gamma(x,y)", "p * q(w)", "q(w) * q(u)", "1"};
  std::vector<VarId> univ = fx.vars({"y", "w", "u"});
  for (const char* st : stores)
    for (const char* g : guards) {
      CAPTURE(st);
      CAPTURE(g);
      auto got = match_guard(fx.flat(st), fx.flat(g), univ, sys);
      auto want = testing::brute_force_matches(fx.flat(st), fx.flat(g), univ);
      CHECK(testing::same_match_sets(got, want));
    }
}

TEST_CASE("matches are stable under store extension") {
  Fx fx;
  System sys = fx.sys();
  Flat store = fx.flat("gamma(x,z) * fork(1)");
  Flat bigger = fx.flat("gamma(x,z) * fork(1) * q(7) * !p");
  std::vector<VarId> univ = fx.vars({"y"});
  auto small = match_guard(store, fx.flat("gamma(x,y)"), univ, sys);
  auto big = match_guard(bigger, fx.flat("gamma(x,y)"), univ, sys);
  for (const Match& m : small) {
    bool found = false;
    for (const Match& m2 : big)
      if (m2.theta == m.theta && m2.consumed == m.consumed) found = true;
    CHECK(found);
  }
}

TEST_CASE("classicality check") {
  Fx fx;
  System clean = fx.sys({AxiomDecl{parse_constraint("!cc", *fx.sc), parse_constraint("!cd", *fx.sc)}});
  CHECK(check_classical(clean).empty());

  System dirty = fx.sys({AxiomDecl{parse_constraint("cc", *fx.sc), parse_constraint("!cd", *fx.sc)}});
  CHECK(check_classical(dirty).size() == 1);

  std::vector<ProcessDef> defs{{"Bad", parse_process("tell(cc)", *fx.sc)}};
  CHECK(check_classical(clean, defs).size() == 1);
  std::vector<ProcessDef> ok{{"Good", parse_process("tell(!cc)", *fx.sc)}};
  CHECK(check_classical(clean, ok).empty());

  System empty = fx.sys();
  CHECK(check_classical(empty).empty());
}
