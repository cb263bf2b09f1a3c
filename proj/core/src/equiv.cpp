#include "lcc/equiv.hpp"

#include <algorithm>

namespace lcc {

const char* verdict_name(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Equivalent: return "equivalent";
    case Verdict::Kind::NotEquivalent: return "not-equivalent";
    case Verdict::Kind::Unknown: return "unknown";
  }
  return "?";
}

namespace {

std::string json_escape(const std::string& s) {
  std::string r;
  for (char c : s) {
    if (c == '"' || c == '\\') r += '\\';
    if (c == '\n') {
      r += "\\n";
      continue;
    }
    r += c;
  }
  return r;
}

std::string short_key(const StateKey& k) {
  static const char* digits = "0123456789abcdef";
  std::string h;
  size_t n = std::min<size_t>(k.size(), 8);
  for (size_t i = 0; i < n; ++i) {
    unsigned char c = k[i];
    h += digits[c >> 4];
    h += digits[c & 15];
  }
  return h;
}

}  // namespace

std::string Witness::to_json(const SymbolScope& sc) const {
  (void)sc;
  std::string s = "{\"reason\":\"" + json_escape(reason) + "\"";
  if (!context.empty()) s += ",\"context\":\"" + json_escape(context) + "\"";
  s += ",\"steps\":[";
  for (size_t i = 0; i < steps.size(); ++i) {
    const WitnessStep& w = steps[i];
    if (i) s += ",";
    s += "{\"side\":\"" + w.side + "\",\"action\":\"" + json_escape(w.action_text) + "\",\"from\":\"" +
         json_escape(w.from_text) + "\",\"to\":\"" + json_escape(w.to_text) + "\",\"from_key\":\"" +
         short_key(w.from_key) + "\",\"to_key\":\"" + short_key(w.to_key) + "\",\"defender\":\"" +
         json_escape(w.defender_text) + "\"}";
  }
  s += "]}";
  return s;
}

std::string Verdict::to_json(const SymbolScope& sc) const {
  std::string s = "{\"verdict\":\"";
  s += verdict_name(kind);
  s += "\",\"relation_size\":" + std::to_string(relation_size) +
       ",\"nodes\":" + std::to_string(nodes_used) + ",\"exhausted\":" + (exhausted ? "true" : "false");
  if (!note.empty()) s += ",\"note\":\"" + json_escape(note) + "\"";
  if (kind == Kind::NotEquivalent) s += ",\"witness\":" + witness.to_json(sc);
  s += "}";
  return s;
}

// ---------------------------------------------------------------------------
// Candidate inputs

namespace {

struct AskSig {
  std::vector<VarId> univ;
  Flat guard;
};

void collect_asks_proc(const ProcessPtr& p, std::vector<AskSig>& out);

void collect_asks_branch(const std::vector<VarId>& univ, const Constraint& guard, const ProcessPtr& body,
                         std::vector<AskSig>& out) {
  AskSig sig;
  sig.univ = univ;
  try {
    Flat g = flatten_constraint(guard);
    for (VarId b : g.binders) sig.univ.push_back(b);
    g.binders.clear();
    sig.guard = std::move(g);
    out.push_back(std::move(sig));
  } catch (const NonFlatError&) {
    // non-flat guard: contributes no instances
  }
  collect_asks_proc(body, out);
}

void collect_asks_proc(const ProcessPtr& p, std::vector<AskSig>& out) {
  switch (p->kind) {
    case Process::Kind::Tell:
    case Process::Kind::Hole:
      return;
    case Process::Kind::Par:
      for (const auto& k : p->children) collect_asks_proc(k, out);
      return;
    case Process::Kind::Exists:
      collect_asks_proc(p->children[0], out);
      return;
    case Process::Kind::Sum:
    case Process::Kind::Repl:
      for (const AskBranch& b : p->branches) collect_asks_branch(b.univ, b.guard, b.body, out);
      return;
  }
}

void collect_asks_state(const State& s, std::vector<AskSig>& out) {
  auto from_sum = [&](const NSum& ns) {
    for (const NAsk& a : ns.branches) {
      AskSig sig;
      sig.univ = a.univ;
      sig.guard.lin = a.guard_lin;
      sig.guard.bang = a.guard_bang;
      out.push_back(std::move(sig));
      collect_asks_proc(a.body, out);
    }
  };
  for (const NSum& ns : s.sums) from_sum(ns);
  for (const NSum& ns : s.repls) from_sum(ns);
}

// terms usable for instantiation: subterms free of hidden and synthetic names
void collect_universe(const State& s, std::vector<Term>& out) {
  std::set<VarId> hidden(s.hidden.begin(), s.hidden.end());
  std::vector<Term> raw;
  auto add_atom = [&](const Atom& a) {
    for (const Term& t : a.args) collect_subterms(t, raw);
  };
  for (const Atom& a : s.lin) add_atom(a);
  for (const Atom& a : s.bang) add_atom(a);
  std::vector<AskSig> asks;
  collect_asks_state(s, asks);
  for (const AskSig& sig : asks) {
    std::set<VarId> univ(sig.univ.begin(), sig.univ.end());
    for (const Atom& a : sig.guard.lin) add_atom(a);
    for (const Atom& a : sig.guard.bang) add_atom(a);
    for (size_t i = raw.size(); i-- > 0;) {
      std::set<VarId> vs;
      collect_vars(raw[i], vs);
      bool drop = false;
      for (VarId v : vs)
        if (univ.count(v)) drop = true;
      if (drop) raw.erase(raw.begin() + i);
    }
  }
  for (const Term& t : raw) {
    std::set<VarId> vs;
    collect_vars(t, vs);
    bool ok = true;
    for (VarId v : vs)
      if (hidden.count(v) || is_synthetic(v)) ok = false;
    if (ok) out.push_back(t);
  }
}

}  // namespace

std::vector<Flat> candidate_inputs(const State& p, const State& q, const Filter& E, const System& sys,
                                   size_t cap, bool* capped) {
  if (capped) *capped = false;
  std::vector<AskSig> asks;
  collect_asks_state(p, asks);
  collect_asks_state(q, asks);

  std::vector<Term> universe;
  collect_universe(p, universe);
  collect_universe(q, universe);
  universe.push_back(Term::var(sys.scope().fresh_input_var()));
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());

  std::map<std::string, Flat> result;
  bool hit_cap = false;
  for (const AskSig& sig : asks) {
    // only universals occurring in the guard need instantiating
    std::set<VarId> gv = flat_vars(sig.guard);
    std::vector<VarId> univ;
    for (VarId u : sig.univ)
      if (gv.count(u)) univ.push_back(u);
    size_t n = univ.size();
    size_t total = 1;
    for (size_t i = 0; i < n; ++i) {
      total *= universe.size();
      if (total > 4096) break;
    }
    if (total > 4096) {
      hit_cap = true;
      continue;
    }
    std::vector<size_t> idx(n, 0);
    for (;;) {
      Subst theta;
      for (size_t i = 0; i < n; ++i) theta[univ[i]] = universe[idx[i]];
      Flat inst;
      for (const Atom& a : sig.guard.lin) inst.lin.push_back(apply_subst(a, theta));
      for (const Atom& a : sig.guard.bang) inst.bang.push_back(apply_subst(a, theta));
      std::sort(inst.lin.begin(), inst.lin.end());
      std::sort(inst.bang.begin(), inst.bang.end());
      inst.bang.erase(std::unique(inst.bang.begin(), inst.bang.end()), inst.bang.end());
      if (!inst.is_one() && E.contains(inst, sys)) {
        if (result.size() >= cap) {
          hit_cap = true;
          break;
        }
        result.emplace(canonical_flat_key(inst), inst);
      }
      size_t i = 0;
      while (i < n && ++idx[i] == universe.size()) idx[i++] = 0;
      if (i == n || n == 0) break;
    }
    if (hit_cap && result.size() >= cap) break;
  }
  if (hit_cap && capped) *capped = true;

  std::vector<Flat> out;
  for (auto& [k, c] : result) out.push_back(std::move(c));
  return out;
}

// ---------------------------------------------------------------------------
// The bisimulation game

namespace {

enum class R3 { Yes, No, Unknown };

struct GameRes {
  R3 r = R3::Unknown;
  size_t mindep = SIZE_MAX;
  Witness w;
};

struct Game {
  const System& sys;
  Filters f;
  RunBudget bud;
  bool barbed = false;  // tau challenges + barb equality instead of labeled moves

  std::map<std::string, int> status;  // 1 proved, 2 disproved
  std::map<std::string, Witness> disproofs;
  std::map<std::string, size_t> on_stack;
  // pairs proved under a still-pending assumption; the value is the stack
  // depth of the shallowest assumption used
  std::map<std::string, size_t> cond_proved;
  std::map<StateKey, Closure> closures;
  std::map<std::string, std::vector<OutStep>> outputs_cache;
  std::map<std::string, std::vector<Flat>> inputs_cache;
  std::map<StateKey, Barbs> barbs_cache;
  size_t nodes = 0;
  bool exhausted = false;
  size_t proved_pairs = 0;

  Game(const System& sys, Filters f, RunBudget bud) : sys(sys), f(std::move(f)), bud(bud) {}

  static std::string pair_key(const StateKey& a, const StateKey& b) { return a + "\x01" + b; }

  const Closure& closure(const State& s, const StateKey& k) {
    auto it = closures.find(k);
    if (it != closures.end()) return it->second;
    Closure c = weak_closure(s, sys, bud.lts);
    if (c.exhausted) exhausted = true;
    return closures.emplace(k, std::move(c)).first->second;
  }

  const std::vector<OutStep>& outputs(const State& s, const StateKey& k, uint32_t base) {
    std::string ck = k + "#" + std::to_string(base);
    auto it = outputs_cache.find(ck);
    if (it != outputs_cache.end()) return it->second;
    return outputs_cache.emplace(ck, output_actions(s, f.D, sys, base)).first->second;
  }

  const Barbs& barb_set(const State& s, const StateKey& k) {
    auto it = barbs_cache.find(k);
    if (it != barbs_cache.end()) return it->second;
    Barbs b = barbs(s, f.D, sys, bud.lts);
    return barbs_cache.emplace(k, std::move(b)).first->second;
  }

  WitnessStep mk_step(bool left, const Action& act, const State& from, const StateKey& fk,
                      const State& to, const State& defender) {
    WitnessStep w;
    w.side = left ? "left" : "right";
    w.action = act;
    w.action_text = action_to_string(act, sys.scope());
    w.from_text = print_state(from, sys.scope());
    w.to_text = print_state(to, sys.scope());
    w.from_key = fk;
    w.to_key = canonical_key(to);
    w.defender_text = print_state(defender, sys.scope());
    return w;
  }

  GameRes game(const State& p, const State& q, size_t depth, std::map<std::string, size_t> input_left) {
    StateKey kp = canonical_key(p), kq = canonical_key(q);
    if (kp == kq) return {R3::Yes, SIZE_MAX, {}};
    std::string key = pair_key(kp, kq), rkey = pair_key(kq, kp);

    if (auto it = status.find(key); it != status.end())
      return it->second == 1 ? GameRes{R3::Yes, SIZE_MAX, {}} : GameRes{R3::No, SIZE_MAX, disproofs[key]};
    if (auto it = status.find(rkey); it != status.end())
      return it->second == 1 ? GameRes{R3::Yes, SIZE_MAX, {}} : GameRes{R3::No, SIZE_MAX, disproofs[rkey]};
    if (auto it = on_stack.find(key); it != on_stack.end()) return {R3::Yes, it->second, {}};
    if (auto it = on_stack.find(rkey); it != on_stack.end()) return {R3::Yes, it->second, {}};
    if (auto it = cond_proved.find(key); it != cond_proved.end()) return {R3::Yes, it->second, {}};
    if (auto it = cond_proved.find(rkey); it != cond_proved.end()) return {R3::Yes, it->second, {}};

    if (++nodes > bud.game_nodes || depth > bud.game_depth) {
      exhausted = true;
      return {R3::Unknown, SIZE_MAX, {}};
    }

    on_stack[key] = depth;
    GameRes out{R3::Yes, SIZE_MAX, {}};
    bool unknown = false;

    if (barbed) {
      const Barbs& bp = barb_set(p, kp);
      const Barbs& bq = barb_set(q, kq);
      const Flat* diff = nullptr;
      for (const auto& [k2, c] : bp.set)
        if (!bq.set.count(k2)) {
          diff = &c;
          break;
        }
      if (!diff)
        for (const auto& [k2, c] : bq.set)
          if (!bp.set.count(k2)) {
            diff = &c;
            break;
          }
      if (diff) {
        if (bp.exhausted || bq.exhausted) {
          unknown = true;
          exhausted = true;
        } else {
          out.r = R3::No;
          out.w.reason = "barb sets differ at " + print_flat(*diff, sys.scope()) + " for " +
                         print_state(p, sys.scope()) + " vs " + print_state(q, sys.scope());
        }
      }
    }

    // challenge/response rounds; left means challenges from p
    auto rounds = [&](bool left) {
      if (out.r == R3::No) return;
      const State& s = left ? p : q;
      const State& t = left ? q : p;
      const StateKey& ks = left ? kp : kq;
      const StateKey& kt = left ? kq : kp;

      auto respond = [&](const State& target, const std::vector<const State*>& candidates,
                         bool resp_exhausted, const Action& act,
                         const std::map<std::string, size_t>& budget) -> R3 {
        bool any_unknown = resp_exhausted;
        Witness last;
        for (const State* cand : candidates) {
          GameRes r = left ? game(target, *cand, depth + 1, budget)
                           : game(*cand, target, depth + 1, budget);
          if (r.r == R3::Yes) {
            out.mindep = std::min(out.mindep, r.mindep);
            return R3::Yes;
          }
          if (r.r == R3::Unknown)
            any_unknown = true;
          else
            last = std::move(r.w);
        }
        if (any_unknown) return R3::Unknown;
        Witness w;
        w.steps.push_back(mk_step(left, act, s, ks, target, t));
        for (WitnessStep& st : last.steps) w.steps.push_back(std::move(st));
        w.reason = last.reason.empty()
                       ? "no weak '" + action_to_string(act, sys.scope()) + "' response from " +
                             print_state(t, sys.scope())
                       : last.reason;
        out.w = std::move(w);
        return R3::No;
      };

      // candidate sets are deduplicated by key, with an exact mirror of the
      // challenger's target tried first
      struct CandSet {
        std::set<StateKey> seen;
        std::vector<const State*> list;
        const State* exact = nullptr;
        void add(const State* s2, const StateKey& k2, const StateKey& target) {
          if (!seen.insert(k2).second) return;
          if (k2 == target)
            exact = s2;
          else
            list.push_back(s2);
        }
        std::vector<const State*> take() {
          std::vector<const State*> out2;
          if (exact) out2.push_back(exact);
          out2.insert(out2.end(), list.begin(), list.end());
          return out2;
        }
      };

      // tau challenges
      for (const TauStep& st : tau_steps(s, sys)) {
        if (out.r == R3::No) return;
        if (bud.lts.saturate && is_saturation_step(s, st)) continue;
        const Closure& ct = closure(t, kt);
        StateKey target = canonical_key(st.to);
        CandSet cs;
        for (size_t i = 0; i < ct.states.size(); ++i) cs.add(&ct.states[i], ct.keys[i], target);
        R3 r = respond(st.to, cs.take(), ct.exhausted, Action::tau(), input_left);
        if (r == R3::No) {
          out.r = R3::No;
          return;
        }
        if (r == R3::Unknown) unknown = true;
      }
      if (barbed) return;

      // output challenges
      uint32_t base = std::max(marker_base_of(p), marker_base_of(q));
      for (const OutStep& o : outputs(s, ks, base)) {
        if (out.r == R3::No) return;
        const Closure& ct = closure(t, kt);
        bool resp_exhausted = ct.exhausted;
        StateKey target = canonical_key(o.to);
        CandSet cs;
        for (const State& t1 : ct.states) {
          StateKey kt1 = canonical_key(t1);
          for (const OutStep& o2 : outputs(t1, kt1, base)) {
            if (o2.label != o.label) continue;
            const Closure& c2 = closure(o2.to, canonical_key(o2.to));
            resp_exhausted = resp_exhausted || c2.exhausted;
            for (size_t i = 0; i < c2.states.size(); ++i) cs.add(&c2.states[i], c2.keys[i], target);
          }
        }
        R3 r = respond(o.to, cs.take(), resp_exhausted, o.action, input_left);
        if (r == R3::No) {
          out.r = R3::No;
          return;
        }
        if (r == R3::Unknown) unknown = true;
      }

      // input challenges
      std::string ikey = pair_key(kp, kq);
      auto iit = inputs_cache.find(ikey);
      if (iit == inputs_cache.end()) {
        bool capped = false;
        auto ins = candidate_inputs(p, q, f.E, sys, bud.max_inputs, &capped);
        if (capped) exhausted = true;
        iit = inputs_cache.emplace(ikey, std::move(ins)).first;
      }
      for (const Flat& c : iit->second) {
        if (out.r == R3::No) return;
        std::string ck = canonical_flat_key(c);
        auto budget_it = input_left.find(ck);
        size_t uses_left = budget_it == input_left.end() ? bud.input_repeat : budget_it->second;
        if (uses_left == 0) continue;
        auto next_budget = input_left;
        next_budget[ck] = uses_left - 1;

        State target_state = input_apply(s, c, sys);
        StateKey target = canonical_key(target_state);
        Action act;
        act.kind = Action::Kind::In;
        act.constraint = c;

        const Closure& ct = closure(t, kt);
        bool resp_exhausted = ct.exhausted;
        CandSet cs;
        for (const State& t1 : ct.states) {
          State t2 = input_apply(t1, c, sys);
          const Closure& c2 = closure(t2, canonical_key(t2));
          resp_exhausted = resp_exhausted || c2.exhausted;
          for (size_t i = 0; i < c2.states.size(); ++i) cs.add(&c2.states[i], c2.keys[i], target);
        }
        R3 r = respond(target_state, cs.take(), resp_exhausted, act, next_budget);
        if (r == R3::No) {
          out.r = R3::No;
          return;
        }
        if (r == R3::Unknown) unknown = true;
      }
    };

    rounds(true);
    rounds(false);
    on_stack.erase(key);

    // resolve conditional results that assumed this frame
    auto settle = [&](bool this_proved, size_t retag) {
      for (auto it = cond_proved.begin(); it != cond_proved.end();) {
        if (it->second >= depth) {
          if (this_proved && it->second == depth) {
            status[it->first] = 1;
            ++proved_pairs;
            it = cond_proved.erase(it);
          } else if (retag != SIZE_MAX && it->second == depth) {
            it->second = retag;
            ++it;
          } else if (it->second >= depth) {
            it = cond_proved.erase(it);
          } else {
            ++it;
          }
        } else {
          ++it;
        }
      }
    };

    if (out.r == R3::No) {
      settle(false, SIZE_MAX);
      status[key] = 2;
      disproofs[key] = out.w;
      return {R3::No, SIZE_MAX, out.w};
    }
    if (unknown) {
      settle(false, SIZE_MAX);
      return {R3::Unknown, SIZE_MAX, {}};
    }
    if (out.mindep >= depth) {
      settle(true, SIZE_MAX);
      status[key] = 1;
      ++proved_pairs;
      return {R3::Yes, SIZE_MAX, {}};
    }
    // conditional: valid while the assumption at out.mindep is pending
    settle(false, out.mindep);
    cond_proved[key] = out.mindep;
    return {R3::Yes, out.mindep, {}};
  }

  Verdict run(const State& p, const State& q) {
    GameRes r = game(p, q, 0, {});
    Verdict v;
    v.nodes_used = nodes;
    v.exhausted = exhausted;
    switch (r.r) {
      case R3::Yes:
        if (exhausted) {
          v.kind = Verdict::Kind::Unknown;
          v.note = "game closed but a budget was exhausted";
        } else {
          v.kind = Verdict::Kind::Equivalent;
          v.relation_size = proved_pairs;
        }
        break;
      case R3::No:
        v.kind = Verdict::Kind::NotEquivalent;
        v.witness = std::move(r.w);
        break;
      case R3::Unknown:
        v.kind = Verdict::Kind::Unknown;
        break;
    }
    return v;
  }
};

}  // namespace

Verdict bisim(const State& p, const State& q, const Filters& f, const System& sys, const RunBudget& b) {
  Game g(sys, f, b);
  return g.run(p, q);
}

Verdict bisim(const ProcessPtr& p, const ProcessPtr& q, const Filters& f, const System& sys,
              const RunBudget& b) {
  return bisim(sys.norm(p), sys.norm(q), f, sys, b);
}

// ---------------------------------------------------------------------------
// Contexts

namespace {

size_t count_holes(const Process& p, bool under_guard, bool* bad_position) {
  switch (p.kind) {
    case Process::Kind::Hole:
      if (under_guard) *bad_position = true;
      return 1;
    case Process::Kind::Tell:
      return 0;
    case Process::Kind::Par: {
      size_t n = 0;
      for (const auto& k : p.children) n += count_holes(*k, under_guard, bad_position);
      return n;
    }
    case Process::Kind::Exists:
      return count_holes(*p.children[0], under_guard, bad_position);
    case Process::Kind::Sum:
    case Process::Kind::Repl: {
      size_t n = 0;
      for (const AskBranch& b : p.branches) n += count_holes(*b.body, true, bad_position);
      return n;
    }
  }
  return 0;
}

ProcessPtr plug_rec(const ProcessPtr& ctx, const ProcessPtr& p) {
  switch (ctx->kind) {
    case Process::Kind::Hole:
      return p;
    case Process::Kind::Tell:
    case Process::Kind::Sum:
    case Process::Kind::Repl:
      return ctx;
    case Process::Kind::Par: {
      std::vector<ProcessPtr> kids;
      for (const auto& k : ctx->children) kids.push_back(plug_rec(k, p));
      return mk_par(std::move(kids));
    }
    case Process::Kind::Exists:
      return mk_exists(ctx->binders, plug_rec(ctx->children[0], p));
  }
  return ctx;
}

}  // namespace

bool valid_evaluation_context(const ProcessPtr& ctx, std::string* why) {
  bool bad = false;
  size_t holes = count_holes(*ctx, false, &bad);
  if (holes != 1) {
    if (why) *why = "context must contain exactly one hole, found " + std::to_string(holes);
    return false;
  }
  if (bad) {
    if (why) *why = "the hole may not occur under a guard or a replication";
    return false;
  }
  return true;
}

ProcessPtr plug(const ProcessPtr& ctx, const ProcessPtr& p) {
  std::string why;
  if (!valid_evaluation_context(ctx, &why)) throw std::runtime_error("malformed context: " + why);
  return plug_rec(ctx, p);
}

Verdict barbed_refute(const ProcessPtr& p, const ProcessPtr& q, const Filters& f,
                      const std::vector<ProcessPtr>& contexts, const System& sys, const RunBudget& b) {
  Verdict out;
  out.kind = Verdict::Kind::Unknown;
  bool any_exhausted = false;
  for (const ProcessPtr& ctx : contexts) {
    ProcessPtr cp = plug(ctx, p);
    ProcessPtr cq = plug(ctx, q);
    Game g(sys, f, b);
    g.barbed = true;
    Verdict v = g.run(sys.norm(cp), sys.norm(cq));
    out.nodes_used += v.nodes_used;
    if (v.kind == Verdict::Kind::NotEquivalent) {
      v.nodes_used = out.nodes_used;
      v.witness.context = print_process(ctx, sys.scope());
      v.note = "refuted in context " + v.witness.context;
      return v;
    }
    if (v.exhausted) any_exhausted = true;
  }
  out.exhausted = any_exhausted;
  out.note = "no refuting context found (refutation only: cannot conclude equivalence)";
  return out;
}

// ---------------------------------------------------------------------------
// Context generation and may-testing

std::vector<ProcessPtr> generate_contexts(const ProcessPtr& p, const ProcessPtr& q, const Filters& f,
                                          const System& sys, const RunBudget& b, size_t count) {
  State sp = sys.norm(p), sq = sys.norm(q);

  // atom alphabet: state-level atoms and ground guard atoms of both sides
  std::vector<Flat> alphabet;
  {
    std::map<std::string, Flat> dedup;
    auto add = [&](const Atom& a, bool banged) {
      std::set<VarId> vs;
      collect_vars(a, vs);
      for (VarId v : vs)
        if (is_synthetic(v)) return;  // hidden names are not observable
      Flat c;
      (banged ? c.bang : c.lin).push_back(a);
      dedup.emplace(canonical_flat_key(c), std::move(c));
    };
    for (const State* s : {&sp, &sq}) {
      for (const Atom& a : s->lin) add(a, false);
      for (const Atom& a : s->bang) add(a, true);
      for (const std::vector<NSum>* group : {&s->sums, &s->repls})
        for (const NSum& ns : *group)
          for (const NAsk& ask : ns.branches) {
            std::set<VarId> univ(ask.univ.begin(), ask.univ.end());
            auto ground = [&](const Atom& a) {
              std::set<VarId> vs;
              collect_vars(a, vs);
              for (VarId v : vs)
                if (univ.count(v)) return false;
              return true;
            };
            for (const Atom& a : ask.guard_lin)
              if (ground(a)) add(a, false);
            for (const Atom& a : ask.guard_bang)
              if (ground(a)) add(a, true);
          }
    }
    for (auto& [k, c] : dedup) alphabet.push_back(std::move(c));
    if (alphabet.size() > 8) alphabet.resize(8);
  }

  bool capped = false;
  std::vector<Flat> inputs = candidate_inputs(sp, sq, f.E, sys, 64, &capped);
  if (inputs.size() > 6) inputs.resize(6);

  std::vector<ProcessPtr> pieces;  // tier 1: tells and simple asks
  for (const Flat& a : alphabet) pieces.push_back(mk_tell(flat_to_constraint(a)));
  std::vector<ProcessPtr> asks1;
  for (const Flat& c : inputs)
    for (size_t ai = 0; ai < std::min<size_t>(alphabet.size(), 4); ++ai) {
      AskBranch br;
      br.guard = flat_to_constraint(c);
      br.body = mk_tell(flat_to_constraint(alphabet[ai]));
      asks1.push_back(mk_sum({br}));
    }
  for (const ProcessPtr& a : asks1) pieces.push_back(a);

  // tier 2: asks with one more piece in the body (nesting two)
  std::vector<ProcessPtr> asks2;
  for (size_t ci = 0; ci < std::min<size_t>(inputs.size(), 3); ++ci)
    for (size_t pi = 0; pi < std::min<size_t>(pieces.size(), 4); ++pi) {
      AskBranch br;
      br.guard = flat_to_constraint(inputs[ci]);
      br.body = pieces[pi];
      asks2.push_back(mk_sum({br}));
    }

  std::vector<ProcessPtr> out;
  out.push_back(mk_hole());
  auto add_ctx = [&](std::vector<ProcessPtr> parts) {
    if (out.size() >= count) return;
    parts.insert(parts.begin(), mk_hole());
    out.push_back(mk_par(std::move(parts)));
  };
  for (const ProcessPtr& x : pieces) add_ctx({x});
  for (const ProcessPtr& x : asks2) add_ctx({x});
  for (size_t i = 0; i < pieces.size(); ++i)
    for (size_t j = i; j < pieces.size(); ++j) add_ctx({pieces[i], pieces[j]});
  // two tells plus an ask
  for (size_t i = 0; i < alphabet.size(); ++i)
    for (size_t j = i; j < alphabet.size(); ++j)
      for (const ProcessPtr& a : asks1)
        add_ctx({mk_tell(flat_to_constraint(alphabet[i])), mk_tell(flat_to_constraint(alphabet[j])), a});
  // hiding of up to two free names
  std::set<VarId> fv = free_vars(*p);
  {
    std::set<VarId> fq = free_vars(*q);
    fv.insert(fq.begin(), fq.end());
  }
  std::vector<VarId> names(fv.begin(), fv.end());
  if (names.size() > 2) names.resize(2);
  for (VarId v : names)
    for (size_t pi = 0; pi < std::min<size_t>(pieces.size(), 3); ++pi)
      if (out.size() < count) out.push_back(mk_exists({v}, mk_par({mk_hole(), pieces[pi]})));
  if (out.size() > count) out.resize(count);
  return out;
}

Verdict may_test(const ProcessPtr& p, const ProcessPtr& q, const Filters& f, size_t context_budget,
                 const System& sys, const RunBudget& b) {
  Verdict out;
  out.kind = Verdict::Kind::Unknown;
  bool any_exhausted = false;
  std::vector<ProcessPtr> contexts = generate_contexts(p, q, f, sys, b, context_budget);
  for (const ProcessPtr& ctx : contexts) {
    State cp = sys.norm(plug(ctx, p));
    State cq = sys.norm(plug(ctx, q));
    Barbs bp = barbs(cp, f.D, sys, b.lts);
    Barbs bq = barbs(cq, f.D, sys, b.lts);
    any_exhausted = any_exhausted || bp.exhausted || bq.exhausted;
    const Flat* diff = nullptr;
    std::string side;
    for (const auto& [k, c] : bp.set)
      if (!bq.set.count(k)) {
        diff = &c;
        side = "left";
        break;
      }
    if (!diff)
      for (const auto& [k, c] : bq.set)
        if (!bp.set.count(k)) {
          diff = &c;
          side = "right";
          break;
        }
    if (diff) {
      if (bp.exhausted || bq.exhausted) continue;  // unreliable difference
      out.kind = Verdict::Kind::NotEquivalent;
      out.witness.context = print_process(ctx, sys.scope());
      out.witness.reason = "barb " + print_flat(*diff, sys.scope()) + " accessible only on the " + side +
                           " side in context " + out.witness.context;
      return out;
    }
  }
  out.exhausted = any_exhausted;
  out.note = "no refutation over " + std::to_string(contexts.size()) + " contexts";
  return out;
}

}  // namespace lcc
