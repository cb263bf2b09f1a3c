#include "doctest.h"

#include "lcc/normal.hpp"

using namespace lcc;

namespace {

struct Fx {
  std::shared_ptr<SymbolScope> sc = std::make_shared<SymbolScope>();
  Fx() {
    sc->declare_pred("a", 0, false);
    sc->declare_pred("b", 0, false);
    sc->declare_pred("c", 0, false);
    sc->declare_pred("gamma", 2, false);
    sc->declare_pred("g", 1, false);
    sc->declare_pred("h", 1, false);
  }
  NormEnv env() const { return NormEnv{sc->false_pred(), nullptr}; }
  State norm(const std::string& text) const {
    return normalize(parse_process(text, *sc), env());
  }
  StateKey key(const std::string& text) const { return canonical_key(norm(text)); }
};

}  // namespace

TEST_CASE("flatten unit and atoms") {
  Fx fx;
  Flat f = flatten_constraint(parse_constraint("1 * gamma(x,y)", *fx.sc));
  CHECK(f.binders.empty());
  CHECK(f.lin.size() == 1);
  CHECK(f.bang.empty());
  CHECK(!f.falsity);
}

TEST_CASE("flatten contracts duplicate bangs") {
  Fx fx;
  Flat f = flatten_constraint(parse_constraint("!a * !a", *fx.sc));
  CHECK(f.bang.size() == 1);
  CHECK(f.lin.empty());
}

TEST_CASE("flatten rejects bang over non-atoms") {
  Fx fx;
  CHECK_THROWS_AS(flatten_constraint(parse_constraint("!(a * b)", *fx.sc)), NonFlatError);
  CHECK_THROWS_AS(flatten_constraint(parse_constraint("!(exists x. g(x))", *fx.sc)), NonFlatError);
}

TEST_CASE("flatten absorbs falsity") {
  Fx fx;
  Flat f = flatten_constraint(parse_constraint("a * 0 * b", *fx.sc));
  CHECK(f.falsity);
  CHECK(f.lin.empty());
  CHECK(f.bang.empty());
}

TEST_CASE("flatten hoists existentials and drops vacuous binders") {
  Fx fx;
  Flat f = flatten_constraint(parse_constraint("(exists x. g(x)) * (exists y. h(y))", *fx.sc));
  CHECK(f.binders.size() == 2);
  Flat g = flatten_constraint(parse_constraint("exists z. a", *fx.sc));
  CHECK(g.binders.empty());
}

TEST_CASE("normalize drops tell(1) like the unit law") {
  Fx fx;
  CHECK(fx.key("tell(1) | tell(a)") == fx.key("tell(a)"));
  CHECK(fx.key("exists z. tell(1)") == fx.key("tell(1)"));
}

TEST_CASE("tell merging: split and merged tells coincide") {
  Fx fx;
  CHECK(fx.key("tell(a) | tell(b)") == fx.key("tell(a * b)"));
  CHECK(fx.key("tell(a) | tell(!b)") == fx.key("tell(a * !b)"));
}

TEST_CASE("scope extrusion lifts hiding over parallel") {
  Fx fx;
  CHECK(fx.key("(exists x. tell(g(x))) | tell(a)") == fx.key("exists x. (tell(g(x)) | tell(a))"));
}

TEST_CASE("alpha renaming and reordering do not change keys") {
  Fx fx;
  CHECK(fx.key("exists x. tell(g(x))") == fx.key("exists y. tell(g(y))"));
  CHECK(fx.key("tell(a) | tell(b)") == fx.key("tell(b) | tell(a)"));
  CHECK(fx.key("exists x, y. (tell(g(x)) | tell(h(y)))") ==
        fx.key("exists y, x. (tell(g(x)) | tell(h(y)))"));
}

TEST_CASE("linear and banged atoms have different keys") {
  Fx fx;
  CHECK(fx.key("tell(a)") != fx.key("tell(!a)"));
}

TEST_CASE("hidden name sharing is part of the key") {
  Fx fx;
  CHECK(fx.key("exists x. (tell(g(x)) | tell(h(x)))") !=
        fx.key("exists x, y. (tell(g(x)) | tell(h(y)))"));
  // two identical-shape components hooked up differently
  CHECK(fx.key("exists x, y. (tell(g(x)) | tell(g(y)) | tell(h(x)))") ==
        fx.key("exists y, x. (tell(g(y)) | tell(g(x)) | tell(h(y)))"));
}

TEST_CASE("replication unfolding is absorbed") {
  Fx fx;
  std::string g = "a -> tell(b)";
  CHECK(fx.key("!(" + g + ")") == fx.key("(" + g + ") | !(" + g + ")"));
  // but two replicas are not one
  CHECK(fx.key("!(" + g + ") | !(" + g + ")") != fx.key("!(" + g + ")"));
}

TEST_CASE("sum branch order is canonical") {
  Fx fx;
  CHECK(fx.key("a -> tell(b) + b -> tell(a)") == fx.key("b -> tell(a) + a -> tell(b)"));
}

TEST_CASE("telling 0 collapses the store to false") {
  Fx fx;
  State s = fx.norm("tell(0) | tell(a)");
  CHECK(s.lin.empty());
  REQUIRE(s.bang.size() == 1);
  CHECK(s.bang[0].pred == fx.sc->false_pred());
}

TEST_CASE("normalization is a fixed point on re-printed states") {
  Fx fx;
  const char* samples[] = {
      "tell(a) | (exists x. tell(g(x))) | !(a -> tell(b))",
      "exists x. (tell(gamma(x,x)) | forall y. gamma(x,y) -> tell(g(y)))",
      "tell(a * !b) | b -> tell(c) + a -> tell(c)",
  };
  for (const char* s : samples) {
    CAPTURE(s);
    State st = fx.norm(s);
    std::string printed = print_state(st, *fx.sc);
    State st2 = fx.norm(printed);
    CHECK(canonical_key(st) == canonical_key(st2));
  }
}

TEST_CASE("guard existentials become universals") {
  Fx fx;
  State s = fx.norm("(exists y. gamma(x,y)) -> tell(a)");
  REQUIRE(s.sums.size() == 1);
  REQUIRE(s.sums[0].branches.size() == 1);
  const NAsk& a = s.sums[0].branches[0];
  CHECK(a.univ.size() == 1);
  CHECK(a.guard_lin.size() == 1);
  // and is key-equal to the forall form
  CHECK(canonical_key(s) == fx.key("forall y. gamma(x,y) -> tell(a)"));
}
