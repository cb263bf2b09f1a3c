#include "lcc/equiv.hpp"

namespace lcc {

// ---------------------------------------------------------------------------
// Linear-logic translation. Formula syntax, loosest to tightest:
//   exists x. F | forall x. F   quantifiers
//   F -o F                      linear implication (right assoc)
//   F & F                       additive conjunction
//   F * F                       tensor
//   !F, atoms, 1, 0, top
// A tensor list keeps at most one trailing `top`, and parallel composition
// and hiding do not introduce one of their own.

namespace {

struct FNode {
  enum class K { Top, One, Zero, Atom, Bang, Tensor, With, Limp, Exists, Forall };
  K k = K::Top;
  lcc::Atom atom;
  std::vector<FNode> kids;
  std::vector<VarId> vars;

  static FNode top() { return {}; }
  static FNode mk(K k, std::vector<FNode> kids) {
    FNode f;
    f.k = k;
    f.kids = std::move(kids);
    return f;
  }
};

// flatten tensors and fold the tops
FNode tensor_of(std::vector<FNode> parts) {
  std::vector<FNode> flat;
  bool saw_top = false;
  for (FNode& p : parts) {
    if (p.k == FNode::K::Tensor) {
      for (FNode& k : p.kids) {
        if (k.k == FNode::K::Top)
          saw_top = true;
        else
          flat.push_back(std::move(k));
      }
    } else if (p.k == FNode::K::Top) {
      saw_top = true;
    } else if (p.k == FNode::K::One) {
      // unit
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (saw_top) flat.push_back(FNode::top());
  if (flat.empty()) return FNode::mk(FNode::K::One, {});
  if (flat.size() == 1) return std::move(flat[0]);
  return FNode::mk(FNode::K::Tensor, std::move(flat));
}

FNode constraint_formula(const Constraint& c) {
  switch (c.kind) {
    case Constraint::Kind::One:
      return FNode::mk(FNode::K::One, {});
    case Constraint::Kind::Zero:
      return FNode::mk(FNode::K::Zero, {});
    case Constraint::Kind::Atom: {
      FNode f;
      f.k = FNode::K::Atom;
      f.atom = c.atom;
      return f;
    }
    case Constraint::Kind::Bang:
      return FNode::mk(FNode::K::Bang, {constraint_formula(c.children[0])});
    case Constraint::Kind::Tensor: {
      std::vector<FNode> parts;
      for (const Constraint& k : c.children) parts.push_back(constraint_formula(k));
      // constraint-level tensor: no top folding semantics needed, plain tensor
      return tensor_of(std::move(parts));
    }
    case Constraint::Kind::Exists: {
      FNode f = FNode::mk(FNode::K::Exists, {constraint_formula(c.children[0])});
      f.vars = c.binders;
      return f;
    }
  }
  return FNode::top();
}

FNode process_formula(const Process& p) {
  switch (p.kind) {
    case Process::Kind::Tell:
      return tensor_of({constraint_formula(p.tell), FNode::top()});
    case Process::Kind::Hole:
      throw std::runtime_error("cannot translate a context hole");
    case Process::Kind::Par: {
      std::vector<FNode> parts;
      for (const auto& k : p.children) parts.push_back(process_formula(*k));
      return tensor_of(std::move(parts));
    }
    case Process::Kind::Exists: {
      FNode f = FNode::mk(FNode::K::Exists, {process_formula(*p.children[0])});
      f.vars = p.binders;
      return f;
    }
    case Process::Kind::Sum: {
      std::vector<FNode> branches;
      for (const AskBranch& b : p.branches) {
        FNode impl = FNode::mk(FNode::K::Limp, {constraint_formula(b.guard), process_formula(*b.body)});
        if (!b.univ.empty()) {
          FNode all = FNode::mk(FNode::K::Forall, {std::move(impl)});
          all.vars = b.univ;
          impl = std::move(all);
        }
        branches.push_back(std::move(impl));
      }
      FNode inner = std::move(branches[0]);
      for (size_t i = 1; i < branches.size(); ++i)
        inner = FNode::mk(FNode::K::With, {std::move(inner), std::move(branches[i])});
      return tensor_of({std::move(inner), FNode::top()});
    }
    case Process::Kind::Repl: {
      Process sum;
      sum.kind = Process::Kind::Sum;
      sum.branches = p.branches;
      FNode inner = process_formula(sum);
      // the sum translation carries its own top; the bang wraps the rest
      return tensor_of({FNode::mk(FNode::K::Bang, {std::move(inner)}), FNode::top()});
    }
  }
  return FNode::top();
}

// precedence: 0 quantifiers, 1 -o, 2 &, 3 *, 4 units/bang/atom
std::string fmt(const FNode& f, const SymbolScope& sc, int min_level) {
  auto wrap = [&](std::string s, int level) { return min_level > level ? "(" + s + ")" : s; };
  switch (f.k) {
    case FNode::K::Top:
      return "top";
    case FNode::K::One:
      return "1";
    case FNode::K::Zero:
      return "0";
    case FNode::K::Atom:
      return print_atom(f.atom, sc);
    case FNode::K::Bang:
      return "!" + fmt(f.kids[0], sc, 4);
    case FNode::K::Tensor: {
      std::string s;
      for (size_t i = 0; i < f.kids.size(); ++i) {
        if (i) s += " * ";
        s += fmt(f.kids[i], sc, 3);
      }
      return wrap(std::move(s), 3);
    }
    case FNode::K::With:
      return wrap(fmt(f.kids[0], sc, 3) + " & " + fmt(f.kids[1], sc, 3), 2);
    case FNode::K::Limp:
      return wrap(fmt(f.kids[0], sc, 2) + " -o " + fmt(f.kids[1], sc, 1), 1);
    case FNode::K::Exists:
    case FNode::K::Forall: {
      std::string s = f.k == FNode::K::Exists ? "exists " : "forall ";
      for (size_t i = 0; i < f.vars.size(); ++i) {
        if (i) s += ", ";
        s += var_display_name(sc.vars(), f.vars[i]);
      }
      s += ". " + fmt(f.kids[0], sc, 0);
      return wrap(std::move(s), 0);
    }
  }
  return "?";
}

}  // namespace

std::string logical_translate(const ProcessPtr& p, const SymbolScope& sc) {
  return fmt(process_formula(*p), sc, 0);
}

// ---------------------------------------------------------------------------
// Law suite over classical constraints

namespace {

struct LawEnv {
  std::shared_ptr<SymbolScope> sc = std::make_shared<SymbolScope>();
  System sys;

  LawEnv() : sys(build()) {}

  System build() {
    sc->declare_pred("c0", 0, true);   // c
    sc->declare_pred("c1", 0, true);   // c' with axiom !c0 => !c1
    sc->declare_pred("d0", 0, true);   // d
    sc->declare_pred("d1", 0, true);   // d' with axiom !d0 => !d1
    sc->declare_pred("e0", 0, true);   // e
    sc->declare_pred("uc", 1, true);   // unary classical family
    sc->declare_pred("uc'", 1, true);
    sc->declare_fun("k", 0);
    // linear counterparts for the designed non-classical instantiations
    sc->declare_pred("nc", 0, false);
    sc->declare_pred("nc'", 0, false);
    sc->declare_pred("nd", 0, false);
    sc->declare_pred("nd'", 0, false);
    sc->declare_pred("ne", 0, false);
    SystemDecl decl;
    auto ax = [&](const char* l, const char* r) {
      decl.axioms.push_back({parse_constraint(l, *sc), parse_constraint(r, *sc)});
    };
    ax("!c0", "!c1");
    ax("!d0", "!d1");
    ax("!uc(x)", "!uc'(x)");
    ax("nc", "nc'");
    ax("nd", "nd'");
    return System::compile(sc, decl);
  }

  ProcessPtr P(const std::string& s) { return parse_process(s, *sc); }
};

struct LawCase {
  int law;
  std::string lhs, rhs, instance;
  bool classical;
};

}  // namespace

bool LawReport::all_expected() const {
  for (const LawOutcome& o : outcomes) {
    if (o.classical && o.verdict.kind != Verdict::Kind::Equivalent) return false;
    if (!o.classical && o.verdict.kind != Verdict::Kind::NotEquivalent) return false;
  }
  return !outcomes.empty();
}

LawReport law_suite(const RunBudget& b) {
  static const LawCase cases[] = {
      // law 1: an ask re-telling entailed classical information is inert
      {1, "(!c0) -> tell(!c1)", "tell(1)", "axiom entailment", true},
      {1, "(!c0) -> tell(!c0)", "tell(1)", "reflexive entailment", true},
      {1, "forall x. (!uc(x)) -> tell(!uc'(x))", "tell(1)", "quantified", true},
      {1, "nc -> tell(nc')", "tell(1)", "linear", false},
      // law 2 (= law 3): the guard may be re-told alongside the body
      {2, "(!c0) -> tell(!e0)", "(!c0) -> tell(!c0 * !e0)", "nullary", true},
      {2, "(!d0) -> tell(!c1)", "(!d0) -> tell(!d0 * !c1)", "swapped roles", true},
      {2, "forall x. (!uc(x)) -> tell(!e0)", "forall x. (!uc(x)) -> tell(!uc(x) * !e0)", "quantified",
       true},
      {2, "nc -> tell(ne)", "nc -> tell(nc * ne)", "linear", false},
      // law 4: a stronger-guarded sibling telling weaker information is absorbed
      {4, "((!c1) -> tell(!d0)) | ((!c0) -> tell(!d1))", "(!c1) -> tell(!d0)", "axiom chain", true},
      {4, "((!c0) -> tell(!d0)) | ((!c0) -> tell(!d1))", "(!c0) -> tell(!d0)", "shared guard", true},
      {4, "((!uc'(k)) -> tell(!d0)) | ((!uc(k)) -> tell(!d1))", "(!uc'(k)) -> tell(!d0)", "quantified family",
       true},
      {4, "(nc' -> tell(nd)) | (nc -> tell(nd'))", "nc' -> tell(nd)", "linear", false},
      // law 5: nested classical asks merge into a conjunction guard
      {5, "(!d0) -> ((!e0) -> tell(!c0))", "(!d0 * !e0) -> tell(!c0)", "nullary", true},
      {5, "(!c0) -> ((!d0) -> tell(!e0))", "(!c0 * !d0) -> tell(!e0)", "swapped roles", true},
      {5, "(!d0) -> (forall x. (!uc(x)) -> tell(!e0))", "forall x. (!d0 * !uc(x)) -> tell(!e0)",
       "quantified inner", true},
      {5, "nd -> (ne -> tell(nc))", "(nd * ne) -> tell(nc)", "linear", false},
      // law 6: replication commutes with a classical guard
      {6, "!((!c0) -> ((!d0) -> tell(!e0)))", "(!c0) -> !((!d0) -> tell(!e0))", "nested ask body", true},
      {6, "!((!c0) -> ((!c0) -> tell(!e0)))", "(!c0) -> !((!c0) -> tell(!e0))", "same guard", true},
      {6, "!((!uc(k)) -> ((!d0) -> tell(!e0)))", "(!uc(k)) -> !((!d0) -> tell(!e0))", "quantified family", true},
      {6, "!(nc -> (nd -> tell(ne)))", "nc -> !(nd -> tell(ne))", "linear", false},
      // law 7: classical guards distribute over parallel bodies
      {7, "((!c0) -> tell(!d0)) | ((!c0) -> tell(!e0))", "(!c0) -> (tell(!d0) | tell(!e0))", "nullary", true},
      {7, "((!c1) -> tell(!d1)) | ((!c1) -> tell(!e0))", "(!c1) -> (tell(!d1) | tell(!e0))", "derived guard",
       true},
      {7, "((!uc(k)) -> tell(!d0)) | ((!uc(k)) -> tell(!e0))", "(!uc(k)) -> (tell(!d0) | tell(!e0))",
       "quantified family", true},
      {7, "(nc -> tell(nd)) | (nc -> tell(ne))", "nc -> (tell(nd) | tell(ne))", "linear", false},
      // law 8: classical guards distribute over sums
      {8, "((!c0) -> ((!d0) -> tell(!e0))) + ((!c0) -> ((!e0) -> tell(!d0)))",
       "(!c0) -> (((!d0) -> tell(!e0)) + ((!e0) -> tell(!d0)))", "two-branch", true},
      {8, "((!c1) -> ((!d0) -> tell(!e0))) + ((!c1) -> ((!d1) -> tell(!e0)))",
       "(!c1) -> (((!d0) -> tell(!e0)) + ((!d1) -> tell(!e0)))", "derived guards", true},
      {8, "((!uc(k)) -> ((!d0) -> tell(!e0))) + ((!uc(k)) -> ((!e0) -> tell(!d0)))",
       "(!uc(k)) -> (((!d0) -> tell(!e0)) + ((!e0) -> tell(!d0)))", "quantified family", true},
      {8, "(nc -> (nd -> tell(ne))) + (nc -> (ne -> tell(nd)))",
       "nc -> ((nd -> tell(ne)) + (ne -> tell(nd)))", "linear", false},
  };

  LawEnv env;
  LawReport report;
  report.scope = env.sc;
  for (const LawCase& lc : cases) {
    RunBudget rb = b;
    if (!lc.classical) rb.input_repeat = std::max<size_t>(rb.input_repeat, 2);
    LawOutcome o;
    o.law = lc.law;
    o.instance = lc.instance + ": " + lc.lhs + "  vs  " + lc.rhs;
    o.classical = lc.classical;
    o.verdict = bisim(env.P(lc.lhs), env.P(lc.rhs), Filters{}, env.sys, rb);
    report.outcomes.push_back(std::move(o));
  }
  return report;
}

}  // namespace lcc
