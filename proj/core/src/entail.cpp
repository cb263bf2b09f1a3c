#include "lcc/entail.hpp"

#include <algorithm>
#include <deque>

namespace lcc {

System System::compile(std::shared_ptr<SymbolScope> scope, const SystemDecl& decl, int axiom_depth) {
  std::vector<Axiom> axioms;
  for (const AxiomDecl& a : decl.axioms) {
    Axiom ax;
    ax.lhs = flatten_constraint(a.lhs);
    ax.rhs = flatten_constraint(a.rhs);
    if (!ax.lhs.binders.empty())
      throw std::runtime_error("axiom left-hand sides must be quantifier free");
    std::set<VarId> lhs_vars = flat_vars(ax.lhs);
    std::set<VarId> rhs_vars = flat_vars(ax.rhs);
    ax.pattern_vars = lhs_vars;
    for (VarId v : rhs_vars)
      if (!lhs_vars.count(v)) ax.rhs_fresh.push_back(v);
    axioms.push_back(std::move(ax));
  }
  return System(std::move(scope), std::move(axioms), axiom_depth);
}

namespace {

// Enumerates all ways of matching the axiom lhs inside the store: linear lhs
// atoms consume distinct linear store atoms, banged lhs atoms require banged
// store atoms and are kept.
void apply_axiom(const Flat& store, const Axiom& ax, VarId* fresh, std::vector<Flat>& out) {
  struct Rec {
    const Flat& store;
    const Axiom& ax;
    VarId* fresh;
    std::vector<Flat>& out;
    std::vector<bool> used;
    Subst theta;

    void match_bang(size_t bi) {
      if (bi == ax.lhs.bang.size()) {
        emit();
        return;
      }
      for (const Atom& target : store.bang) {
        Subst saved = theta;
        if (match_atom(ax.lhs.bang[bi], target, ax.pattern_vars, theta)) match_bang(bi + 1);
        theta = std::move(saved);
      }
    }

    void match_lin(size_t li) {
      if (li == ax.lhs.lin.size()) {
        match_bang(0);
        return;
      }
      for (size_t t = 0; t < store.lin.size(); ++t) {
        if (used[t]) continue;
        Subst saved = theta;
        if (match_atom(ax.lhs.lin[li], store.lin[t], ax.pattern_vars, theta)) {
          used[t] = true;
          match_lin(li + 1);
          used[t] = false;
        }
        theta = std::move(saved);
      }
    }

    void emit() {
      Subst full = theta;
      Flat next;
      next.binders = store.binders;
      for (VarId v : ax.rhs_fresh) {
        VarId nv = (*fresh)++;
        full[v] = Term::var(nv);
        next.binders.push_back(nv);  // rhs existentials open as fresh hidden names
      }
      for (size_t t = 0; t < store.lin.size(); ++t)
        if (!used[t]) next.lin.push_back(store.lin[t]);
      for (const Atom& a : ax.rhs.lin) next.lin.push_back(apply_subst(a, full));
      next.bang = store.bang;
      for (const Atom& a : ax.rhs.bang) next.bang.push_back(apply_subst(a, full));
      if (ax.rhs.falsity) next.falsity = true;
      std::sort(next.lin.begin(), next.lin.end());
      std::sort(next.bang.begin(), next.bang.end());
      next.bang.erase(std::unique(next.bang.begin(), next.bang.end()), next.bang.end());
      out.push_back(std::move(next));
    }
  };
  Rec rec{store, ax, fresh, out, std::vector<bool>(store.lin.size(), false), {}};
  rec.match_lin(0);
}

}  // namespace

std::vector<Flat> axiom_closure(const Flat& store, const System& sys, int depth) {
  std::vector<Flat> result{store};
  if (sys.axioms().empty() || depth <= 0) return result;
  std::set<std::string> seen{canonical_flat_key(store)};
  std::deque<std::pair<Flat, int>> frontier{{store, 0}};
  VarId fresh = kSyntheticBase + (1u << 20);  // axiom existentials, erased by canonical keys
  while (!frontier.empty()) {
    auto [cur, d] = std::move(frontier.front());
    frontier.pop_front();
    if (d >= depth) continue;
    for (const Axiom& ax : sys.axioms()) {
      std::vector<Flat> nexts;
      apply_axiom(cur, ax, &fresh, nexts);
      for (Flat& n : nexts) {
        std::string k = canonical_flat_key(n);
        if (seen.insert(k).second) {
          result.push_back(n);
          frontier.emplace_back(std::move(n), d + 1);
        }
      }
    }
  }
  return result;
}

namespace {

struct GuardMatcher {
  const Flat& store;
  const std::set<VarId>& univ;
  std::vector<bool> used;
  Subst theta;
  std::vector<Match>& out;
  const Flat* guard;

  void run() {
    used.assign(store.lin.size(), false);
    theta.clear();
    match_bang(0);
  }

  void match_bang(size_t bi) {
    if (bi == guard->bang.size()) {
      match_lin(0);
      return;
    }
    for (const Atom& target : store.bang) {
      Subst saved = theta;
      if (match_atom(guard->bang[bi], target, univ, theta)) match_bang(bi + 1);
      theta = std::move(saved);
    }
  }

  void match_lin(size_t li) {
    if (li == guard->lin.size()) {
      emit();
      return;
    }
    const Atom& g = guard->lin[li];
    for (size_t t = 0; t < store.lin.size(); ++t) {
      if (used[t]) continue;
      Subst saved = theta;
      if (match_atom(g, store.lin[t], univ, theta)) {
        used[t] = true;
        match_lin(li + 1);
        used[t] = false;
      }
      theta = std::move(saved);
    }
    // a banged store atom discharges a linear guard atom without consumption
    for (const Atom& target : store.bang) {
      Subst saved = theta;
      if (match_atom(g, target, univ, theta)) match_lin(li + 1);
      theta = std::move(saved);
    }
  }

  void emit() {
    Match m;
    m.theta = theta;
    for (size_t t = 0; t < store.lin.size(); ++t)
      if (used[t]) m.consumed.push_back(store.lin[t]);
    std::sort(m.consumed.begin(), m.consumed.end());
    m.residual.binders.clear();
    for (size_t t = 0; t < store.lin.size(); ++t)
      if (!used[t]) m.residual.lin.push_back(store.lin[t]);
    m.residual.bang = store.bang;
    std::set<VarId> exposed;
    for (const auto& [v, t] : m.theta) collect_vars(t, exposed);
    for (VarId b : store.binders)
      if (exposed.count(b)) m.opened.push_back(b);
    std::set<VarId> residual_vars;
    for (const Atom& a : m.residual.lin) collect_vars(a, residual_vars);
    for (const Atom& a : m.residual.bang) collect_vars(a, residual_vars);
    for (VarId b : store.binders)
      if (residual_vars.count(b)) m.residual.binders.push_back(b);
    m.rewritten_store = store;
    out.push_back(std::move(m));
  }
};

}  // namespace

std::vector<Match> match_guard(const Flat& store, const Flat& guard, const std::vector<VarId>& univ,
                               const System& sys) {
  std::vector<Match> out;
  if (guard.falsity) {
    // only an inconsistent store matches 0; the store surfaces it as `false`
    Flat g;
    g.bang.push_back(Atom{sys.false_pred(), {}});
    return match_guard(store, g, univ, sys);
  }
  std::set<VarId> univ_set(univ.begin(), univ.end());
  for (const Flat& st : axiom_closure(store, sys, sys.axiom_depth())) {
    if (st.falsity) continue;
    GuardMatcher gm{st, univ_set, {}, {}, out, &guard};
    gm.run();
  }
  // deduplicate on (theta, consumed multiset, residual up to renaming)
  std::vector<Match> dedup;
  std::set<std::string> seen;
  for (Match& m : out) {
    std::string k;
    for (const auto& [v, t] : m.theta) {
      k += std::to_string(v);
      k += '=';
      State probe;
      probe.lin.push_back(Atom{0, {t}});
      k += canonical_key(probe);
    }
    k += '|';
    Flat cons;
    cons.lin = m.consumed;
    k += canonical_flat_key(cons);
    k += '|';
    k += canonical_flat_key(m.residual);
    if (seen.insert(k).second) dedup.push_back(std::move(m));
  }
  return dedup;
}

bool entails(const Flat& c, const Flat& d, const System& sys) {
  // ex falso quodlibet
  if (c.falsity) return true;
  for (const Atom& a : c.bang)
    if (a.pred == sys.false_pred()) return true;
  for (const Atom& a : c.lin)
    if (a.pred == sys.false_pred()) return true;
  if (d.falsity) return false;
  Flat goal = d;
  std::vector<VarId> univ = d.binders;
  goal.binders.clear();
  return !match_guard(c, goal, univ, sys).empty();
}

namespace {

void check_atom_positions(const System& sys, const Flat& f, const std::string& where,
                          std::vector<ClassicalViolation>& out) {
  for (const Atom& a : f.lin)
    if (sys.is_classical(a.pred)) out.push_back({a.pred, where});
}

void check_constraint(const System& sys, const Constraint& c, bool banged, const std::string& where,
                      std::vector<ClassicalViolation>& out) {
  switch (c.kind) {
    case Constraint::Kind::One:
    case Constraint::Kind::Zero:
      return;
    case Constraint::Kind::Atom:
      if (!banged && sys.is_classical(c.atom.pred)) out.push_back({c.atom.pred, where});
      return;
    case Constraint::Kind::Bang:
      check_constraint(sys, c.children[0], true, where, out);
      return;
    case Constraint::Kind::Tensor:
      for (const Constraint& k : c.children) check_constraint(sys, k, banged, where, out);
      return;
    case Constraint::Kind::Exists:
      check_constraint(sys, c.children[0], banged, where, out);
      return;
  }
}

void check_process(const System& sys, const Process& p, const std::string& where,
                   std::vector<ClassicalViolation>& out) {
  switch (p.kind) {
    case Process::Kind::Tell:
      check_constraint(sys, p.tell, false, where, out);
      return;
    case Process::Kind::Hole:
      return;
    case Process::Kind::Par:
      for (const auto& k : p.children) check_process(sys, *k, where, out);
      return;
    case Process::Kind::Exists:
      check_process(sys, *p.children[0], where, out);
      return;
    case Process::Kind::Sum:
    case Process::Kind::Repl:
      for (const AskBranch& b : p.branches) {
        check_constraint(sys, b.guard, false, where, out);
        check_process(sys, *b.body, where, out);
      }
      return;
  }
}

}  // namespace

std::vector<ClassicalViolation> check_classical(const System& sys) {
  std::vector<ClassicalViolation> out;
  for (size_t i = 0; i < sys.axioms().size(); ++i) {
    const Axiom& ax = sys.axioms()[i];
    std::string where = "axiom " + std::to_string(i + 1);
    check_atom_positions(sys, ax.lhs, where + " (lhs)", out);
    check_atom_positions(sys, ax.rhs, where + " (rhs)", out);
  }
  return out;
}

std::vector<ClassicalViolation> check_classical(const System& sys, const std::vector<ProcessDef>& defs) {
  std::vector<ClassicalViolation> out = check_classical(sys);
  for (const ProcessDef& d : defs) check_process(sys, *d.body, "definition " + d.name, out);
  return out;
}

}  // namespace lcc
