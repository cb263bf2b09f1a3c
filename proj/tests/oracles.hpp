#pragma once

// Independent oracles used by the test suites. These deliberately avoid the
// library's matching and exploration code paths: the matcher below is a
// plain recursive enumeration over assignments, and the barb enumerator
// works directly on unnormalized process trees.

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lcc/entail.hpp"

namespace testing {

using namespace lcc;

namespace detail {

inline bool o_match_term(const Term& pat, const Term& val, const std::set<VarId>& open,
                         std::map<VarId, Term>& bind) {
  if (pat.is_var() && open.count(pat.var_id())) {
    auto it = bind.find(pat.var_id());
    if (it != bind.end()) return it->second == val;
    bind.emplace(pat.var_id(), val);
    return true;
  }
  if (pat.is_var()) return val.is_var() && val.var_id() == pat.var_id();
  if (val.is_var() || val.fn() != pat.fn() || val.args().size() != pat.args().size()) return false;
  for (size_t i = 0; i < pat.args().size(); ++i)
    if (!o_match_term(pat.args()[i], val.args()[i], open, bind)) return false;
  return true;
}

inline bool o_match_atom(const Atom& pat, const Atom& val, const std::set<VarId>& open,
                         std::map<VarId, Term>& bind) {
  if (pat.pred != val.pred || pat.args.size() != val.args.size()) return false;
  for (size_t i = 0; i < pat.args.size(); ++i)
    if (!o_match_term(pat.args[i], val.args[i], open, bind)) return false;
  return true;
}

}  // namespace detail

// Every injective assignment of linear guard atoms to distinct linear store
// atoms (or, non-consumptively, banged ones) plus assignments of banged
// guard atoms to banged store atoms, instantiating only `univ`.
inline std::vector<Match> brute_force_matches(const Flat& store, const Flat& guard,
                                              const std::vector<VarId>& univ) {
  std::set<VarId> open(univ.begin(), univ.end());
  std::vector<Match> out;
  size_t nl = guard.lin.size(), nb = guard.bang.size();
  // assignment vector: for linear guard atom i, either store-lin index or
  // nl-coded banged index; for banged guard atom, a banged index.
  std::vector<int> assign(nl + nb, 0);
  std::function<void(size_t, std::map<VarId, Term>, std::vector<bool>)> rec =
      [&](size_t i, std::map<VarId, Term> bind, std::vector<bool> used) {
        if (i == nl + nb) {
          Match m;
          m.theta = Subst(bind.begin(), bind.end());
          for (size_t t = 0; t < store.lin.size(); ++t)
            if (used[t]) m.consumed.push_back(store.lin[t]);
          std::sort(m.consumed.begin(), m.consumed.end());
          for (size_t t = 0; t < store.lin.size(); ++t)
            if (!used[t]) m.residual.lin.push_back(store.lin[t]);
          m.residual.bang = store.bang;
          std::sort(m.residual.lin.begin(), m.residual.lin.end());
          out.push_back(std::move(m));
          return;
        }
        if (i < nl) {
          for (size_t t = 0; t < store.lin.size(); ++t) {
            if (used[t]) continue;
            auto b2 = bind;
            if (detail::o_match_atom(guard.lin[i], store.lin[t], open, b2)) {
              auto u2 = used;
              u2[t] = true;
              rec(i + 1, std::move(b2), std::move(u2));
            }
          }
          for (const Atom& bg : store.bang) {
            auto b2 = bind;
            if (detail::o_match_atom(guard.lin[i], bg, open, b2)) rec(i + 1, std::move(b2), used);
          }
        } else {
          for (const Atom& bg : store.bang) {
            auto b2 = bind;
            if (detail::o_match_atom(guard.bang[i - nl], bg, open, b2)) rec(i + 1, std::move(b2), used);
          }
        }
      };
  rec(0, {}, std::vector<bool>(store.lin.size(), false));
  return out;
}

inline std::string match_fingerprint(const Match& m) {
  std::string s;
  for (const auto& [v, t] : m.theta) {
    s += std::to_string(v) + "=";
    State probe;
    probe.lin.push_back(Atom{0, {t}});
    s += canonical_key(probe);
    s += ';';
  }
  Flat cons;
  cons.lin = m.consumed;
  s += canonical_flat_key(cons);
  s += '#';
  Flat res;
  res.lin = m.residual.lin;
  res.bang = m.residual.bang;
  s += canonical_flat_key(res);
  return s;
}

inline bool same_match_sets(const std::vector<Match>& a, const std::vector<Match>& b) {
  std::set<std::string> ka, kb;
  for (const Match& m : a) ka.insert(match_fingerprint(m));
  for (const Match& m : b) kb.insert(match_fingerprint(m));
  return ka == kb;
}

// ---------------------------------------------------------------------------
// Naive trace enumerator: explores tau steps and emissions directly on a
// plain flattened form of the process tree, without canonical states, keys,
// memoization or the library's matcher. Suitable for small replication-free
// processes.

struct NaiveProc {
  std::vector<VarId> binders;
  std::vector<Atom> lin, bang;
  struct NaiveAsk {
    std::vector<VarId> univ;
    Flat guard;
    ProcessPtr body;
  };
  std::vector<std::vector<NaiveAsk>> sums;
};

inline void naive_collect(const ProcessPtr& p, NaiveProc& out, VarId* fresh, Subst ren) {
  switch (p->kind) {
    case Process::Kind::Tell: {
      Constraint c = subst_constraint(p->tell, ren, fresh);
      Flat f = flatten_constraint(c, fresh);
      if (f.falsity) throw std::runtime_error("naive oracle: falsity not supported");
      for (VarId b : f.binders) {
        // always rename apart
        VarId nv = (*fresh)++;
        Subst r{{b, Term::var(nv)}};
        for (Atom& a : f.lin) a = apply_subst(a, r);
        for (Atom& a : f.bang) a = apply_subst(a, r);
        out.binders.push_back(nv);
      }
      out.lin.insert(out.lin.end(), f.lin.begin(), f.lin.end());
      out.bang.insert(out.bang.end(), f.bang.begin(), f.bang.end());
      return;
    }
    case Process::Kind::Par:
      for (const auto& k : p->children) naive_collect(k, out, fresh, ren);
      return;
    case Process::Kind::Exists: {
      for (VarId b : p->binders) {
        VarId nv = (*fresh)++;
        ren[b] = Term::var(nv);
        out.binders.push_back(nv);
      }
      naive_collect(p->children[0], out, fresh, ren);
      return;
    }
    case Process::Kind::Sum:
    case Process::Kind::Repl: {
      if (p->kind == Process::Kind::Repl) throw std::runtime_error("naive oracle: no replication");
      std::vector<NaiveProc::NaiveAsk> sum;
      for (const AskBranch& b : p->branches) {
        NaiveProc::NaiveAsk na;
        Subst bren = ren;
        for (VarId u : b.univ) {
          VarId nv = (*fresh)++;
          bren[u] = Term::var(nv);
          na.univ.push_back(nv);
        }
        Constraint g = subst_constraint(b.guard, bren, fresh);
        Flat gf = flatten_constraint(g, fresh);
        for (VarId gb : gf.binders) na.univ.push_back(gb);
        gf.binders.clear();
        na.guard = std::move(gf);
        na.body = subst_process(b.body, bren, fresh);
        sum.push_back(std::move(na));
      }
      out.sums.push_back(std::move(sum));
      return;
    }
    case Process::Kind::Hole:
      throw std::runtime_error("naive oracle: hole");
  }
}

// All emissions of a naive store, as canonical keys of the closed labels;
// mirrors the extrusion rule: hidden names still used elsewhere block the
// emission.
inline void naive_emissions(const NaiveProc& n, std::set<std::string>& out) {
  size_t nl = n.lin.size(), nb = n.bang.size();
  std::set<VarId> hidden(n.binders.begin(), n.binders.end());
  std::set<VarId> guarded;
  for (const auto& sum : n.sums)
    for (const auto& a : sum) {
      for (const Atom& x : a.guard.lin) collect_vars(x, guarded);
      for (const Atom& x : a.guard.bang) collect_vars(x, guarded);
      std::set<VarId> bf = free_vars(*a.body);
      guarded.insert(bf.begin(), bf.end());
      for (VarId u : a.univ) guarded.erase(u);
    }
  for (uint64_t ml = 0; ml < (1ull << nl); ++ml)
    for (uint64_t mb = 0; mb < (1ull << nb); ++mb) {
      if (!ml && !mb) continue;
      Flat c;
      std::set<VarId> rest = guarded;
      for (size_t i = 0; i < nl; ++i) {
        if (ml >> i & 1)
          c.lin.push_back(n.lin[i]);
        else
          collect_vars(n.lin[i], rest);
      }
      for (size_t i = 0; i < nb; ++i) {
        collect_vars(n.bang[i], rest);  // banged atoms are always retained
        if (mb >> i & 1) c.bang.push_back(n.bang[i]);
      }
      std::set<VarId> cv = flat_vars(c);
      bool leak = false;
      for (VarId v : cv)
        if (hidden.count(v) && rest.count(v)) leak = true;
      if (leak) continue;
      for (VarId v : cv)
        if (hidden.count(v)) c.binders.push_back(v);
      std::sort(c.lin.begin(), c.lin.end());
      std::sort(c.bang.begin(), c.bang.end());
      c.bang.erase(std::unique(c.bang.begin(), c.bang.end()), c.bang.end());
      out.insert(canonical_flat_key(c));
    }
}

inline void naive_explore(const NaiveProc& n, int depth, VarId* fresh, std::set<std::string>& barbs) {
  naive_emissions(n, barbs);
  if (depth <= 0) throw std::runtime_error("naive oracle: depth exhausted");
  Flat store;
  store.lin = n.lin;
  store.bang = n.bang;
  for (size_t si = 0; si < n.sums.size(); ++si) {
    for (const auto& ask : n.sums[si]) {
      for (const Match& m : brute_force_matches(store, ask.guard, ask.univ)) {
        NaiveProc next;
        next.binders = n.binders;
        // consumed: remove by multiset difference
        std::vector<Atom> lin = n.lin;
        for (const Atom& c : m.consumed) {
          auto it = std::find(lin.begin(), lin.end(), c);
          lin.erase(it);
        }
        next.lin = std::move(lin);
        next.bang = n.bang;
        for (size_t sj = 0; sj < n.sums.size(); ++sj)
          if (sj != si) next.sums.push_back(n.sums[sj]);
        ProcessPtr body = subst_process(ask.body, m.theta, fresh);
        naive_collect(body, next, fresh, {});
        naive_explore(next, depth - 1, fresh, barbs);
      }
    }
  }
}

// D-accessible constraints of an unnormalized process tree, restricted to
// an all-pass filter; returns canonical label keys.
inline std::set<std::string> naive_barbs(const ProcessPtr& p, int depth = 64) {
  NaiveProc n;
  VarId fresh = kSyntheticBase + (1u << 24);
  naive_collect(p, n, &fresh, {});
  std::set<std::string> out;
  naive_explore(n, depth, &fresh, out);
  return out;
}

}  // namespace testing
