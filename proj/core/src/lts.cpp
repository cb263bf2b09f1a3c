#include "lcc/lts.hpp"

#include <algorithm>
#include <deque>

namespace lcc {

std::string action_to_string(const Action& a, const SymbolScope& sc) {
  switch (a.kind) {
    case Action::Kind::Tau:
      return "tau";
    case Action::Kind::In:
      return "in " + print_flat(a.constraint, sc);
    case Action::Kind::Out: {
      std::string s = "out ";
      if (!a.extruded.empty()) {
        s += "<";
        for (size_t i = 0; i < a.extruded.size(); ++i) {
          if (i) s += ",";
          s += var_display_name(sc.vars(), a.extruded[i]);
        }
        s += "> ";
      }
      return s + print_flat(a.constraint, sc);
    }
  }
  return "?";
}

namespace {

Flat state_store(const State& s) {
  Flat f;
  f.binders = s.hidden;
  f.lin = s.lin;
  f.bang = s.bang;
  return f;
}

// Rebuild a state from modified pieces and renormalize; binders capture the
// hidden names occurring in the pieces.
State assemble(const std::vector<VarId>& binders, std::vector<ProcessPtr> parts, const System& sys) {
  if (parts.empty()) parts.push_back(mk_tell(Constraint::one()));
  ProcessPtr open = mk_par(std::move(parts));
  return normalize(mk_exists(binders, open), sys.norm_env());
}

ProcessPtr sum_to_proc(const NSum& ns, bool repl) {
  std::vector<AskBranch> bs;
  for (const NAsk& a : ns.branches) {
    AskBranch b;
    b.univ = a.univ;
    std::vector<Constraint> gs;
    for (const Atom& x : a.guard_lin) gs.push_back(Constraint::mk_atom(x));
    for (const Atom& x : a.guard_bang) gs.push_back(Constraint::bang(Constraint::mk_atom(x)));
    b.guard = gs.empty() ? Constraint::one() : Constraint::tensor(std::move(gs));
    b.body = a.body;
    bs.push_back(std::move(b));
  }
  return repl ? mk_repl(std::move(bs)) : mk_sum(std::move(bs));
}

}  // namespace

std::vector<TauStep> tau_steps(const State& s, const System& sys) {
  std::vector<TauStep> out;
  std::set<std::string> seen;
  Flat store = state_store(s);

  auto fire = [&](bool from_repl, size_t comp_idx, size_t branch_idx) {
    const NSum& ns = from_repl ? s.repls[comp_idx] : s.sums[comp_idx];
    const NAsk& ask = ns.branches[branch_idx];
    Flat guard;
    guard.lin = ask.guard_lin;
    guard.bang = ask.guard_bang;
    for (const Match& m : match_guard(store, guard, ask.univ, sys)) {
      VarId fresh = fresh_base(s);
      for (VarId b : m.rewritten_store.binders)
        if (is_synthetic(b) && b >= fresh) fresh = b + 1;
      for (const auto& [v, t] : m.theta) {
        std::set<VarId> vs;
        collect_vars(t, vs);
        for (VarId x : vs)
          if (is_synthetic(x) && x >= fresh) fresh = x + 1;
      }
      ProcessPtr body = subst_process(ask.body, m.theta, &fresh);
      std::vector<ProcessPtr> parts;
      for (const Atom& a : m.residual.lin) parts.push_back(mk_tell(Constraint::mk_atom(a)));
      for (const Atom& a : m.residual.bang)
        parts.push_back(mk_tell(Constraint::bang(Constraint::mk_atom(a))));
      for (size_t i = 0; i < s.sums.size(); ++i)
        if (from_repl || i != comp_idx) parts.push_back(sum_to_proc(s.sums[i], false));
      for (size_t i = 0; i < s.repls.size(); ++i) parts.push_back(sum_to_proc(s.repls[i], true));
      parts.push_back(body);

      TauStep step;
      step.to = assemble(m.rewritten_store.binders, std::move(parts), sys);
      step.consumed = m.consumed.size();
      size_t kept = s.lin.size() - std::min(s.lin.size(), m.consumed.size());
      step.told = step.to.lin.size() >= kept ? step.to.lin.size() - kept : 0;
      step.from_repl = from_repl;
      step.desc = std::string(from_repl ? "repl " : "sum ") + std::to_string(comp_idx) + " branch " +
                  std::to_string(branch_idx);
      if (!m.theta.empty()) {
        step.desc += " [";
        bool first = true;
        for (const auto& [v, t] : m.theta) {
          if (!first) step.desc += ", ";
          first = false;
          step.desc += var_display_name(sys.scope().vars(), v) + " := " + print_term(t, sys.scope());
        }
        step.desc += "]";
      }
      if (seen.insert(canonical_key(step.to) + "|" + step.desc).second) out.push_back(std::move(step));
    }
  };

  for (size_t i = 0; i < s.sums.size(); ++i)
    for (size_t b = 0; b < s.sums[i].branches.size(); ++b) fire(false, i, b);
  for (size_t i = 0; i < s.repls.size(); ++i)
    for (size_t b = 0; b < s.repls[i].branches.size(); ++b) fire(true, i, b);

  std::sort(out.begin(), out.end(), [](const TauStep& a, const TauStep& b) {
    StateKey ka = canonical_key(a.to), kb = canonical_key(b.to);
    if (ka != kb) return ka < kb;
    return a.desc < b.desc;
  });
  return out;
}

std::vector<State> tau_successors(const State& s, const System& sys) {
  std::vector<State> out;
  std::set<StateKey> seen;
  for (TauStep& st : tau_steps(s, sys))
    if (seen.insert(canonical_key(st.to)).second) out.push_back(std::move(st.to));
  return out;
}

namespace {

template <typename T>
bool multiset_includes(const std::vector<T>& big, const std::vector<T>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

template <typename T>
bool extras_already_present(const std::vector<T>& big, const std::vector<T>& small) {
  std::vector<T> extra;
  std::set_difference(big.begin(), big.end(), small.begin(), small.end(), std::back_inserter(extra));
  for (const T& x : extra)
    if (!std::binary_search(small.begin(), small.end(), x)) return false;
  return true;
}

bool sums_only_duplicated(const std::vector<NSum>& big, const std::vector<NSum>& small) {
  std::vector<bool> used(small.size(), false);
  std::vector<const NSum*> extra;
  for (const NSum& b : big) {
    bool matched = false;
    for (size_t i = 0; i < small.size(); ++i)
      if (!used[i] && small[i] == b) {
        used[i] = true;
        matched = true;
        break;
      }
    if (!matched) extra.push_back(&b);
  }
  for (bool u : used)
    if (!u) return false;  // lost a component
  for (const NSum* e : extra) {
    bool present = false;
    for (const NSum& s2 : small)
      if (s2 == *e) present = true;
    if (!present) return false;
  }
  return true;
}

}  // namespace

bool is_saturation_step(const State& from, const TauStep& step) {
  if (!step.from_repl) return false;
  const State& to = step.to;
  if (to.hidden != from.hidden || to.bang != from.bang) return false;
  if (!multiset_includes(to.lin, from.lin) || !extras_already_present(to.lin, from.lin)) return false;
  return sums_only_duplicated(to.sums, from.sums) && sums_only_duplicated(to.repls, from.repls);
}

uint32_t marker_base_of(const State& s) {
  uint32_t base = 0;
  std::set<VarId> vs = component_free_vars(s);
  for (VarId v : vs)
    if (is_rigid_marker(v) && v - kRigidBase >= base) base = v - kRigidBase + 1;
  return base;
}

std::vector<OutStep> output_actions(const State& s, const Filter& D, const System& sys) {
  return output_actions(s, D, sys, marker_base_of(s));
}

std::vector<OutStep> output_actions(const State& s, const Filter& D, const System& sys,
                                    uint32_t marker_base) {
  std::vector<OutStep> out;
  std::set<std::string> seen;

  const size_t max_lin = D.max_linear();
  const size_t max_bang = D.max_banged();

  // free vars of guarded components never go away on emission
  std::set<VarId> guarded_vars;
  {
    State probe = s;
    probe.lin.clear();
    probe.bang.clear();
    guarded_vars = component_free_vars(probe);
  }

  for (const Flat& st : axiom_closure(state_store(s), sys, sys.axiom_depth())) {
    size_t nl = st.lin.size(), nb = st.bang.size();
    if (std::min(max_lin, nl) + std::min(max_bang, nb) == 0) continue;
    if (nl > 20 || nb > 20) continue;  // enumeration guard; corpus stores are far smaller
    std::set<VarId> hidden(st.binders.begin(), st.binders.end());

    for (uint64_t ml = 0; ml < (1ull << nl); ++ml) {
      if (static_cast<size_t>(__builtin_popcountll(ml)) > max_lin) continue;
      for (uint64_t mb = 0; mb < (1ull << nb); ++mb) {
        if (ml == 0 && mb == 0) continue;
        if (static_cast<size_t>(__builtin_popcountll(mb)) > max_bang) continue;

        Flat c;
        std::vector<Atom> rest_lin;
        for (size_t i = 0; i < nl; ++i)
          (ml >> i & 1 ? c.lin : rest_lin).push_back(st.lin[i]);
        for (size_t i = 0; i < nb; ++i)
          if (mb >> i & 1) c.bang.push_back(st.bang[i]);

        std::set<VarId> cv = flat_vars(c);
        std::vector<VarId> extruded_src;
        for (VarId v : cv)
          if (hidden.count(v)) extruded_src.push_back(v);

        if (!extruded_src.empty()) {
          // names still used elsewhere cannot be extruded; emissions that
          // would leak a hidden name into the label are not offered
          std::set<VarId> rest_vars = guarded_vars;
          for (const Atom& a : rest_lin) collect_vars(a, rest_vars);
          for (const Atom& a : st.bang) collect_vars(a, rest_vars);  // banged atoms are retained
          bool leak = false;
          for (VarId v : extruded_src)
            if (rest_vars.count(v)) leak = true;
          if (leak) continue;
        }

        Flat closed = c;
        closed.binders = extruded_src;
        std::sort(closed.lin.begin(), closed.lin.end());
        std::sort(closed.bang.begin(), closed.bang.end());
        if (!D.contains(closed, sys)) continue;

        std::map<VarId, int> numbering;
        std::string label = canonical_flat_key(closed, &numbering);
        Subst to_marker;
        std::vector<VarId> markers;
        for (VarId v : extruded_src) {
          VarId m = kRigidBase + marker_base + static_cast<uint32_t>(numbering.at(v));
          to_marker[v] = Term::var(m);
          markers.push_back(m);
        }
        std::sort(markers.begin(), markers.end());

        OutStep step;
        step.closed = closed;
        step.label = label;
        step.action.kind = Action::Kind::Out;
        step.action.extruded = markers;
        {
          Flat lbl;
          for (const Atom& a : c.lin) lbl.lin.push_back(apply_subst(a, to_marker));
          for (const Atom& a : c.bang) lbl.bang.push_back(apply_subst(a, to_marker));
          std::sort(lbl.lin.begin(), lbl.lin.end());
          std::sort(lbl.bang.begin(), lbl.bang.end());
          step.action.constraint = std::move(lbl);
        }

        std::vector<ProcessPtr> parts;
        for (const Atom& a : rest_lin) parts.push_back(mk_tell(Constraint::mk_atom(a)));
        for (const Atom& a : st.bang) parts.push_back(mk_tell(Constraint::bang(Constraint::mk_atom(a))));
        for (const NSum& ns : s.sums) parts.push_back(sum_to_proc(ns, false));
        for (const NSum& ns : s.repls) parts.push_back(sum_to_proc(ns, true));
        step.to = assemble(st.binders, std::move(parts), sys);

        std::string dedup = label + "@" + canonical_key(step.to);
        if (seen.insert(dedup).second) out.push_back(std::move(step));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const OutStep& a, const OutStep& b) {
    if (a.label != b.label) return a.label < b.label;
    return canonical_key(a.to) < canonical_key(b.to);
  });
  return out;
}

State input_apply(const State& s, const Flat& c, const System& sys) {
  if (c.is_one()) return s;
  std::vector<ProcessPtr> parts;
  parts.push_back(state_to_process_open(s));
  parts.push_back(mk_tell(flat_to_constraint(c)));
  return assemble(s.hidden, std::move(parts), sys);
}

Closure weak_closure(const State& s, const System& sys, const Budget& budget) {
  Closure result;
  struct Node {
    size_t depth;
    size_t unfolds;
  };
  std::map<StateKey, Node> best;
  std::map<StateKey, State> reps;
  std::deque<std::pair<StateKey, Node>> frontier;

  StateKey k0 = canonical_key(s);
  best[k0] = {0, 0};
  reps.emplace(k0, s);
  frontier.push_back({k0, {0, 0}});

  while (!frontier.empty()) {
    auto [key, node] = frontier.front();
    frontier.pop_front();
    const State& cur = reps.at(key);
    for (TauStep& st : tau_steps(cur, sys)) {
      if (budget.saturate && is_saturation_step(cur, st)) continue;
      Node next{node.depth + 1, node.unfolds + (st.from_repl ? 1 : 0)};
      if (next.depth > budget.max_depth || next.unfolds > budget.max_unfold) {
        result.exhausted = true;
        continue;
      }
      StateKey k = canonical_key(st.to);
      auto it = best.find(k);
      if (it == best.end()) {
        if (best.size() >= budget.max_states) {
          result.exhausted = true;
          continue;
        }
        best.emplace(k, next);
        reps.emplace(k, std::move(st.to));
        frontier.push_back({k, next});
      } else if (next.depth < it->second.depth || next.unfolds < it->second.unfolds) {
        it->second.depth = std::min(it->second.depth, next.depth);
        it->second.unfolds = std::min(it->second.unfolds, next.unfolds);
        frontier.push_back({k, next});
      }
    }
  }
  result.states.reserve(reps.size());
  result.keys.reserve(reps.size());
  for (auto& [k, st] : reps) {
    result.keys.push_back(k);
    result.states.push_back(std::move(st));
  }
  return result;
}

Barbs barbs(const State& s, const Filter& D, const System& sys, const Budget& budget) {
  Barbs out;
  Closure cl = weak_closure(s, sys, budget);
  out.exhausted = cl.exhausted;
  for (const State& st : cl.states)
    for (OutStep& o : output_actions(st, D, sys))
      out.set.emplace(o.label, std::move(o.closed));
  return out;
}

std::string transition_record_json(const StateKey& from, const std::string& action,
                                   const StateKey& to) {
  auto hex = [](const std::string& raw) {
    static const char* digits = "0123456789abcdef";
    std::string h;
    h.reserve(raw.size() * 2);
    for (unsigned char c : raw) {
      h += digits[c >> 4];
      h += digits[c & 15];
    }
    return h;
  };
  auto esc = [](const std::string& t) {
    std::string r;
    for (char c : t) {
      if (c == '"' || c == '\\') r += '\\';
      r += c;
    }
    return r;
  };
  return "{\"from\":\"" + hex(from).substr(0, 16) + "\",\"action\":\"" + esc(action) + "\",\"to\":\"" +
         hex(to).substr(0, 16) + "\"}";
}

}  // namespace lcc
