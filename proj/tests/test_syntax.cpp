#include "doctest.h"

#include "lcc/syntax.hpp"

using namespace lcc;

namespace {

std::shared_ptr<SymbolScope> philo_scope() {
  auto sc = std::make_shared<SymbolScope>();
  sc->declare_pred("fork", 1, false);
  sc->declare_pred("eat", 1, false);
  sc->declare_pred("gamma", 2, false);
  sc->declare_pred("a", 0, false);
  sc->declare_pred("b", 0, false);
  sc->declare_pred("eq", 2, false);
  sc->declare_pred("f", 1, false);
  return sc;
}

}  // namespace

TEST_CASE("parse the null process encoding") {
  auto sc = philo_scope();
  ProcessPtr p = parse_process("tell(1)", *sc);
  CHECK(p->kind == Process::Kind::Tell);
  CHECK(p->tell.kind == Constraint::Kind::One);
  CHECK(print_process(p, *sc) == "tell(1)");
}

TEST_CASE("parse philosopher ask tree") {
  auto sc = philo_scope();
  ProcessPtr p = parse_process(
      "fork(1) * fork(2) -> (tell(eat(1)) | eat(1) -> (tell(fork(1)) | tell(fork(2))))", *sc);
  REQUIRE(p->kind == Process::Kind::Sum);
  REQUIRE(p->branches.size() == 1);
  const AskBranch& b = p->branches[0];
  CHECK(b.univ.empty());
  REQUIRE(b.guard.kind == Constraint::Kind::Tensor);
  CHECK(b.guard.children.size() == 2);
  REQUIRE(b.body->kind == Process::Kind::Par);
  CHECK(b.body->children.size() == 2);
  CHECK(b.body->children[1]->kind == Process::Kind::Sum);
}

TEST_CASE("replication applies only to guards") {
  auto sc = philo_scope();
  CHECK_THROWS_AS(parse_process("!(tell(a))", *sc), ParseError);
  CHECK_THROWS_AS(parse_process("!tell(a)", *sc), ParseError);
  ProcessPtr ok = parse_process("!(a -> tell(b))", *sc);
  CHECK(ok->kind == Process::Kind::Repl);
}

TEST_CASE("parse constraints") {
  auto sc = philo_scope();
  Constraint one = parse_constraint("1", *sc);
  CHECK(one.kind == Constraint::Kind::One);

  Constraint ex = parse_constraint("exists y. gamma(x,y)", *sc);
  REQUIRE(ex.kind == Constraint::Kind::Exists);
  CHECK(ex.binders.size() == 1);
  CHECK(ex.children[0].kind == Constraint::Kind::Atom);

  Constraint mixed = parse_constraint("!eq(x,y) * f(x)", *sc);
  REQUIRE(mixed.kind == Constraint::Kind::Tensor);
  CHECK(mixed.children[0].kind == Constraint::Kind::Bang);
  CHECK(mixed.children[1].kind == Constraint::Kind::Atom);
}

TEST_CASE("parse errors carry positions and arity checks fire") {
  auto sc = philo_scope();
  CHECK_THROWS_AS(parse_process("tell(", *sc), ParseError);
  CHECK_THROWS_AS(parse_process("tell(fork(1,2))", *sc), ParseError);     // arity
  CHECK_THROWS_AS(parse_process("tell(undeclared(1))", *sc), ParseError); // unknown predicate
  try {
    parse_process("tell(a) |\n tell(", *sc);
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("print/parse round trips") {
  auto sc = philo_scope();
  const char* samples[] = {
      "tell(1)",
      "tell(fork(1) * fork(2))",
      "tell(exists z. gamma(x,z))",
      "fork(1) * fork(2) -> (tell(eat(1)) | eat(1) -> (tell(fork(1)) | tell(fork(2))))",
      "!(fork(1) -> (1 -> tell(fork(1))) + (fork(2) -> tell(eat(1))))",
      "exists x. (tell(gamma(x,x)) | forall y. gamma(x,y) -> tell(eat(1)))",
      "tell(!a * b)",
      "(!a) -> tell(b)",
      "a -> tell(b) + b -> tell(a)",
      "exists x, y. tell(gamma(x,y))",
      "1 -> (a -> tell(b))",
  };
  for (const char* s : samples) {
    CAPTURE(s);
    ProcessPtr p = parse_process(s, *sc);
    std::string printed = print_process(p, *sc);
    ProcessPtr q = parse_process(printed, *sc);
    CHECK(*p == *q);
    CHECK(print_process(q, *sc) == printed);
  }
}

TEST_CASE("free variables follow binder conventions") {
  auto sc = philo_scope();
  VarId x = sc->vars().intern("x");
  VarId y = sc->vars().intern("y");

  ProcessPtr p = parse_process("exists x. tell(gamma(x,y))", *sc);
  auto fv = free_vars(*p);
  CHECK(!fv.count(x));
  CHECK(fv.count(y));

  ProcessPtr ask = parse_process("forall y. gamma(x,y) -> tell(gamma(y,y))", *sc);
  fv = free_vars(*ask);
  CHECK(fv.count(x));
  CHECK(!fv.count(y));
}

TEST_CASE("file parsing with definitions and references") {
  std::string text =
      "pred fork/1.\n"
      "pred eat/1.\n"
      "% a philosopher and a table using it\n"
      "P0 = !(fork(0) * fork(1) -> (tell(eat(0)) | eat(0) -> (tell(fork(0)) | tell(fork(1))))).\n"
      "Table = P0 | tell(fork(0)) | tell(fork(1)).\n";
  ParsedFile pf = parse_lcc_file(text);
  CHECK(pf.file.decl.preds.size() == 2);
  REQUIRE(pf.file.defs.size() == 2);
  const ProcessPtr* table = pf.file.find("Table");
  REQUIRE(table != nullptr);
  CHECK((*table)->kind == Process::Kind::Par);
  CHECK((*table)->children.size() == 3);
}

TEST_CASE("axiom declarations parse") {
  std::string text =
      "pred c0/0 classical.\n"
      "pred c1/0 classical.\n"
      "axiom !c0 => !c1.\n";
  ParsedFile pf = parse_lcc_file(text);
  REQUIRE(pf.file.decl.axioms.size() == 1);
  CHECK(pf.file.decl.axioms[0].lhs.kind == Constraint::Kind::Bang);
}

TEST_CASE("substitution avoids capture") {
  auto sc = philo_scope();
  VarId x = sc->vars().intern("x");
  VarId y = sc->vars().intern("y");
  // (exists y. tell(gamma(x,y)))[x := y] must not capture y
  ProcessPtr p = parse_process("exists y. tell(gamma(x,y))", *sc);
  VarId fresh = kSyntheticBase;
  Subst s{{x, Term::var(y)}};
  ProcessPtr q = subst_process(p, s, &fresh);
  auto fv = free_vars(*q);
  CHECK(fv.count(y));
  CHECK(fv.size() == 1);
  CHECK(q->binders[0] != y);
}
