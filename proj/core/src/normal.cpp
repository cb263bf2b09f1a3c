#include "lcc/normal.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>

namespace lcc {

// ---------------------------------------------------------------------------
// Flattening

namespace {

void flatten_into(const Constraint& c, Flat& out, std::set<VarId>& used, Subst& ren, VarId* fresh) {
  switch (c.kind) {
    case Constraint::Kind::One:
      return;
    case Constraint::Kind::Zero:
      out.falsity = true;
      return;
    case Constraint::Kind::Atom:
      out.lin.push_back(apply_subst(c.atom, ren));
      return;
    case Constraint::Kind::Bang: {
      const Constraint& k = c.children[0];
      if (k.kind != Constraint::Kind::Atom)
        throw NonFlatError("bang over a non-atomic constraint is outside the flat fragment");
      out.bang.push_back(apply_subst(k.atom, ren));
      return;
    }
    case Constraint::Kind::Tensor:
      for (const Constraint& k : c.children) flatten_into(k, out, used, ren, fresh);
      return;
    case Constraint::Kind::Exists: {
      Subst saved = ren;
      for (VarId b : c.binders) {
        if (used.count(b)) {
          VarId nv = (*fresh)++;
          ren[b] = Term::var(nv);
          used.insert(nv);
          out.binders.push_back(nv);
        } else {
          used.insert(b);
          ren.erase(b);
          out.binders.push_back(b);
        }
      }
      flatten_into(c.children[0], out, used, ren, fresh);
      ren = std::move(saved);
      return;
    }
  }
}

}  // namespace

Flat flatten_constraint(const Constraint& c, VarId* fresh) {
  Flat out;
  std::set<VarId> used;
  free_vars(c, used);
  Subst ren;
  flatten_into(c, out, used, ren, fresh);
  if (out.falsity) {
    out.binders.clear();
    out.lin.clear();
    out.bang.clear();
    return out;
  }
  std::sort(out.lin.begin(), out.lin.end());
  std::sort(out.bang.begin(), out.bang.end());
  out.bang.erase(std::unique(out.bang.begin(), out.bang.end()), out.bang.end());
  // binders must occur in some atom
  std::set<VarId> occ;
  for (const Atom& a : out.lin) collect_vars(a, occ);
  for (const Atom& a : out.bang) collect_vars(a, occ);
  std::vector<VarId> kept;
  for (VarId b : out.binders)
    if (occ.count(b)) kept.push_back(b);
  out.binders = std::move(kept);
  return out;
}

namespace {
void collect_all_vars_c(const Constraint& c, std::set<VarId>& out);
}

Flat flatten_constraint(const Constraint& c) {
  std::set<VarId> all;
  collect_all_vars_c(c, all);
  VarId counter = kSyntheticBase;
  for (VarId v : all)
    if (is_synthetic(v) && v >= counter) counter = v + 1;
  return flatten_constraint(c, &counter);
}

Constraint flat_to_constraint(const Flat& f) {
  if (f.falsity) return Constraint::zero();
  std::vector<Constraint> parts;
  for (const Atom& a : f.lin) parts.push_back(Constraint::mk_atom(a));
  for (const Atom& a : f.bang) parts.push_back(Constraint::bang(Constraint::mk_atom(a)));
  if (parts.empty()) return Constraint::one();
  return Constraint::exists(f.binders, Constraint::tensor(std::move(parts)));
}

std::set<VarId> flat_vars(const Flat& f) {
  std::set<VarId> vs;
  for (const Atom& a : f.lin) collect_vars(a, vs);
  for (const Atom& a : f.bang) collect_vars(a, vs);
  return vs;
}

std::string print_flat(const Flat& f, const SymbolScope& sc) {
  return print_constraint(flat_to_constraint(f), sc);
}

// ---------------------------------------------------------------------------
// Canonical encoding
//
// Component encodings come in three passes: first with hidden names erased
// (used to sort the component multiset), then collecting hidden names in
// first-occurrence order, then with hidden names numbered. Ties between
// components with equal erased encodings are resolved by trying their
// permutations and keeping the lexicographically least full encoding.

namespace {

struct Enc {
  enum class Mode { Erased, Collect, Final };
  Mode mode = Mode::Erased;
  const std::set<VarId>* hidden = nullptr;
  std::vector<VarId>* order = nullptr;       // Collect
  const std::map<VarId, int>* number = nullptr;  // Final
  std::map<VarId, int> locals;
  int next_local = 0;

  void var(std::string& out, VarId v) {
    auto it = locals.find(v);
    if (it != locals.end()) {
      out += 'b';
      append_num(out, it->second);
      return;
    }
    if (hidden && hidden->count(v)) {
      switch (mode) {
        case Mode::Erased:
          out += 'H';
          return;
        case Mode::Collect:
          if (std::find(order->begin(), order->end(), v) == order->end()) order->push_back(v);
          out += 'H';
          return;
        case Mode::Final:
          out += 'h';
          append_num(out, number->at(v));
          return;
      }
    }
    if (is_rigid_marker(v)) {
      out += 'r';
      append_num(out, v - kRigidBase);
      return;
    }
    out += 'f';
    append_num(out, v);
  }

  void bind_local(VarId v) { locals[v] = next_local++; }

  static void append_num(std::string& out, uint64_t n) {
    while (n >= 0x80) {
      out += static_cast<char>(0x80 | (n & 0x7f));
      n >>= 7;
    }
    out += static_cast<char>(n);
  }
};

void enc_term(std::string& out, const Term& t, Enc& e) {
  if (t.is_var()) {
    e.var(out, t.var_id());
    return;
  }
  out += 'a';
  Enc::append_num(out, t.fn());
  Enc::append_num(out, t.args().size());
  for (const Term& a : t.args()) enc_term(out, a, e);
}

void enc_atom(std::string& out, const Atom& a, Enc& e) {
  out += 'p';
  Enc::append_num(out, a.pred);
  Enc::append_num(out, a.args.size());
  for (const Term& t : a.args) enc_term(out, t, e);
}

void enc_constraint(std::string& out, const Constraint& c, Enc& e) {
  switch (c.kind) {
    case Constraint::Kind::One:
      out += '1';
      return;
    case Constraint::Kind::Zero:
      out += '0';
      return;
    case Constraint::Kind::Atom:
      enc_atom(out, c.atom, e);
      return;
    case Constraint::Kind::Bang:
      out += '!';
      enc_constraint(out, c.children[0], e);
      return;
    case Constraint::Kind::Tensor:
      out += '*';
      Enc::append_num(out, c.children.size());
      for (const Constraint& k : c.children) enc_constraint(out, k, e);
      return;
    case Constraint::Kind::Exists: {
      out += 'E';
      Enc::append_num(out, c.binders.size());
      auto saved_locals = e.locals;
      int saved_next = e.next_local;
      for (VarId b : c.binders) e.bind_local(b);
      enc_constraint(out, c.children[0], e);
      e.locals = std::move(saved_locals);
      e.next_local = saved_next;
      return;
    }
  }
}

void enc_process(std::string& out, const Process& p, Enc& e) {
  switch (p.kind) {
    case Process::Kind::Tell:
      out += 'T';
      enc_constraint(out, p.tell, e);
      return;
    case Process::Kind::Hole:
      out += '_';
      return;
    case Process::Kind::Par:
      out += 'P';
      Enc::append_num(out, p.children.size());
      for (const auto& k : p.children) enc_process(out, *k, e);
      return;
    case Process::Kind::Exists: {
      out += 'X';
      Enc::append_num(out, p.binders.size());
      auto saved_locals = e.locals;
      int saved_next = e.next_local;
      for (VarId b : p.binders) e.bind_local(b);
      enc_process(out, *p.children[0], e);
      e.locals = std::move(saved_locals);
      e.next_local = saved_next;
      return;
    }
    case Process::Kind::Sum:
    case Process::Kind::Repl:
      out += (p.kind == Process::Kind::Sum ? 'S' : 'R');
      Enc::append_num(out, p.branches.size());
      for (const AskBranch& b : p.branches) {
        auto saved_locals = e.locals;
        int saved_next = e.next_local;
        Enc::append_num(out, b.univ.size());
        for (VarId v : b.univ) e.bind_local(v);
        enc_constraint(out, b.guard, e);
        enc_process(out, *b.body, e);
        e.locals = std::move(saved_locals);
        e.next_local = saved_next;
      }
      return;
  }
}

// Guard atoms of a normalized ask are sorted by an encoding that erases both
// hidden names and branch-local variables, so the stored order is stable
// under renaming.
std::string guard_sort_key(const Atom& a, const std::set<VarId>* hidden, const std::set<VarId>& local) {
  std::string out;
  Enc e;
  e.mode = Enc::Mode::Erased;
  e.hidden = hidden;
  for (VarId v : local) e.locals.emplace(v, 0);  // all locals collapse together
  enc_atom(out, a, e);
  return out;
}

void enc_nask(std::string& out, const NAsk& a, Enc& e) {
  out += 'A';
  Enc::append_num(out, a.univ.size());
  auto saved_locals = e.locals;
  int saved_next = e.next_local;
  std::set<VarId> univ(a.univ.begin(), a.univ.end());
  // locals are numbered by first occurrence across the sorted guard and body
  std::vector<const Atom*> lin, bang;
  for (const Atom& x : a.guard_lin) lin.push_back(&x);
  for (const Atom& x : a.guard_bang) bang.push_back(&x);
  auto by_key = [&](const Atom* x, const Atom* y) {
    return guard_sort_key(*x, e.hidden, univ) < guard_sort_key(*y, e.hidden, univ);
  };
  std::stable_sort(lin.begin(), lin.end(), by_key);
  std::stable_sort(bang.begin(), bang.end(), by_key);
  auto enc_univ_aware = [&](const Atom& x) {
    // universal vars get local numbers at first occurrence, in guard order
    struct W {
      Enc& e;
      const std::set<VarId>& univ;
      void term(const Term& t) {
        if (t.is_var()) {
          if (univ.count(t.var_id()) && !e.locals.count(t.var_id())) e.bind_local(t.var_id());
          return;
        }
        for (const Term& a : t.args()) term(a);
      }
    } w{e, univ};
    for (const Term& t : x.args) w.term(t);
    enc_atom(out, x, e);
  };
  out += 'l';
  Enc::append_num(out, lin.size());
  for (const Atom* x : lin) enc_univ_aware(*x);
  out += 'g';
  Enc::append_num(out, bang.size());
  for (const Atom* x : bang) enc_univ_aware(*x);
  // remaining universals (not occurring in the guard) bind in list order
  for (VarId v : a.univ)
    if (!e.locals.count(v)) e.bind_local(v);
  enc_process(out, *a.body, e);
  e.locals = std::move(saved_locals);
  e.next_local = saved_next;
}

void enc_nsum(std::string& out, const NSum& s, Enc& e, char tag) {
  out += tag;
  Enc::append_num(out, s.branches.size());
  // branch order: by erased encoding, stable
  std::vector<std::pair<std::string, const NAsk*>> keyed;
  for (const NAsk& b : s.branches) {
    std::string k;
    Enc be;
    be.mode = Enc::Mode::Erased;
    be.hidden = e.hidden;
    enc_nask(k, b, be);
    keyed.emplace_back(std::move(k), &b);
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  for (auto& [k, b] : keyed) enc_nask(out, *b, e);
}

struct CompRef {
  int kind;  // 0 lin, 1 bang, 2 sum, 3 repl
  size_t idx;
};

void enc_comp(std::string& out, const State& s, const CompRef& c, Enc& e) {
  switch (c.kind) {
    case 0:
      out += 'L';
      enc_atom(out, s.lin[c.idx], e);
      break;
    case 1:
      out += 'B';
      enc_atom(out, s.bang[c.idx], e);
      break;
    case 2:
      enc_nsum(out, s.sums[c.idx], e, 'S');
      break;
    case 3:
      enc_nsum(out, s.repls[c.idx], e, 'R');
      break;
  }
}

constexpr int kMaxTiePermutations = 720;

}  // namespace

StateKey canonical_key(const State& s) { return canonical_key(s, nullptr); }

StateKey canonical_key(const State& s, std::map<VarId, int>* numbering) {
  std::set<VarId> hidden(s.hidden.begin(), s.hidden.end());
  std::vector<CompRef> comps;
  for (size_t i = 0; i < s.lin.size(); ++i) comps.push_back({0, i});
  for (size_t i = 0; i < s.bang.size(); ++i) comps.push_back({1, i});
  for (size_t i = 0; i < s.sums.size(); ++i) comps.push_back({2, i});
  for (size_t i = 0; i < s.repls.size(); ++i) comps.push_back({3, i});

  std::vector<std::string> erased(comps.size());
  for (size_t i = 0; i < comps.size(); ++i) {
    Enc e;
    e.mode = Enc::Mode::Erased;
    e.hidden = &hidden;
    enc_comp(erased[i], s, comps[i], e);
  }
  std::vector<size_t> order(comps.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (erased[a] != erased[b]) return erased[a] < erased[b];
    return a < b;
  });

  // group boundaries of equal erased encodings
  std::vector<std::pair<size_t, size_t>> groups;
  size_t start = 0;
  for (size_t i = 1; i <= order.size(); ++i) {
    if (i == order.size() || erased[order[i]] != erased[order[start]]) {
      if (i - start > 1) groups.emplace_back(start, i);
      start = i;
    }
  }

  long perms = 1;
  for (auto [a, b] : groups) {
    for (size_t k = 2; k <= b - a && perms <= kMaxTiePermutations; ++k) perms *= static_cast<long>(k);
    if (perms > kMaxTiePermutations) break;
  }

  auto full_key = [&](const std::vector<size_t>& ord, std::map<VarId, int>* num_out) {
    std::vector<VarId> first_occurrence;
    {
      Enc e;
      e.mode = Enc::Mode::Collect;
      e.hidden = &hidden;
      e.order = &first_occurrence;
      std::string scratch;
      for (size_t i : ord) {
        Enc ei = e;
        ei.order = &first_occurrence;
        enc_comp(scratch, s, comps[i], ei);
      }
    }
    std::map<VarId, int> number;
    for (size_t i = 0; i < first_occurrence.size(); ++i) number[first_occurrence[i]] = static_cast<int>(i);
    std::string key = "k1";
    Enc::append_num(key, s.hidden.size());
    for (size_t i : ord) {
      Enc e;
      e.mode = Enc::Mode::Final;
      e.hidden = &hidden;
      e.number = &number;
      enc_comp(key, s, comps[i], e);
    }
    if (num_out) *num_out = std::move(number);
    return key;
  };

  if (groups.empty() || perms > kMaxTiePermutations) return full_key(order, numbering);

  // try permutations within tie groups, keep the least key
  std::string best;
  std::map<VarId, int> best_num;
  std::vector<size_t> ord = order;
  struct Rec {
    std::vector<std::pair<size_t, size_t>>& groups;
    std::vector<size_t>& ord;
    std::string& best;
    std::map<VarId, int>& best_num;
    std::function<std::string(const std::vector<size_t>&, std::map<VarId, int>*)> keyfn;
    void go(size_t gi) {
      if (gi == groups.size()) {
        std::map<VarId, int> num;
        std::string k = keyfn(ord, &num);
        if (best.empty() || k < best) {
          best = k;
          best_num = std::move(num);
        }
        return;
      }
      auto [a, b] = groups[gi];
      std::vector<size_t> slice(ord.begin() + a, ord.begin() + b);
      std::sort(slice.begin(), slice.end());
      do {
        std::copy(slice.begin(), slice.end(), ord.begin() + a);
        go(gi + 1);
      } while (std::next_permutation(slice.begin(), slice.end()));
    }
  } rec{groups, ord, best, best_num, full_key};
  rec.go(0);
  if (numbering) *numbering = std::move(best_num);
  return best;
}

std::string canonical_flat_key(const Flat& f) { return canonical_flat_key(f, nullptr); }

std::string canonical_flat_key(const Flat& f, std::map<VarId, int>* numbering) {
  State s;
  s.hidden = f.binders;
  s.lin = f.lin;
  s.bang = f.bang;
  std::string key = canonical_key(s, numbering);
  key += f.falsity ? "#0" : "#.";
  return key;
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

struct Collector {
  std::vector<VarId> hidden;
  std::vector<Atom> lin, bang;
  std::vector<NSum> sums, repls;
  bool falsity = false;
  std::set<VarId> used;
};

std::set<VarId> subst_range_vars(const Subst& s) {
  std::set<VarId> vs;
  for (const auto& [v, t] : s) collect_vars(t, vs);
  return vs;
}

void walk(const ProcessPtr& p, Subst ren, Collector& out, VarId* fresh, const NormEnv& env) {
  switch (p->kind) {
    case Process::Kind::Hole:
      throw std::runtime_error("cannot normalize a context hole");
    case Process::Kind::Tell: {
      Constraint c = ren.empty() ? p->tell : subst_constraint(p->tell, ren, fresh);
      Flat f;
      {
        Subst r;
        flatten_into(c, f, out.used, r, fresh);
      }
      if (f.falsity) {
        out.falsity = true;
        return;
      }
      std::set<VarId> occ;
      for (const Atom& a : f.lin) collect_vars(a, occ);
      for (const Atom& a : f.bang) collect_vars(a, occ);
      for (VarId b : f.binders)
        if (occ.count(b)) out.hidden.push_back(b);
      for (Atom& a : f.lin) out.lin.push_back(std::move(a));
      for (Atom& a : f.bang) out.bang.push_back(std::move(a));
      return;
    }
    case Process::Kind::Par:
      for (const auto& k : p->children) walk(k, ren, out, fresh, env);
      return;
    case Process::Kind::Exists: {
      std::set<VarId> rvars = subst_range_vars(ren);
      for (VarId b : p->binders) {
        if (out.used.count(b) || ren.count(b) || rvars.count(b)) {
          VarId nv = (*fresh)++;
          ren[b] = Term::var(nv);
          out.used.insert(nv);
          out.hidden.push_back(nv);
        } else {
          out.used.insert(b);
          ren.erase(b);
          out.hidden.push_back(b);
        }
      }
      walk(p->children[0], ren, out, fresh, env);
      return;
    }
    case Process::Kind::Sum:
    case Process::Kind::Repl: {
      NSum ns;
      std::set<VarId> rvars = subst_range_vars(ren);
      for (const AskBranch& b : p->branches) {
        NAsk na;
        Subst branch_ren = ren;
        for (VarId u : b.univ) {
          if (branch_ren.count(u) || rvars.count(u)) {
            VarId nv = (*fresh)++;
            branch_ren[u] = Term::var(nv);
            na.univ.push_back(nv);
          } else {
            branch_ren.erase(u);
            na.univ.push_back(u);
          }
        }
        Constraint g = branch_ren.empty() ? b.guard : subst_constraint(b.guard, branch_ren, fresh);
        Flat gf;
        {
          Flat tmp;
          std::set<VarId> gused;
          free_vars(g, gused);
          Subst r;
          flatten_into(g, tmp, gused, r, fresh);
          gf = std::move(tmp);
        }
        // guard existentials become additional universals, always fresh
        if (!gf.binders.empty()) {
          Subst open;
          for (VarId b2 : gf.binders) {
            VarId nv = (*fresh)++;
            open[b2] = Term::var(nv);
            na.univ.push_back(nv);
          }
          for (Atom& a : gf.lin) a = apply_subst(a, open);
          for (Atom& a : gf.bang) a = apply_subst(a, open);
        }
        if (gf.falsity) {
          gf.lin.clear();
          gf.bang.clear();
          gf.bang.push_back(Atom{env.false_pred, {}});
        }
        na.guard_lin = std::move(gf.lin);
        na.guard_bang = std::move(gf.bang);
        std::sort(na.guard_lin.begin(), na.guard_lin.end());
        std::sort(na.guard_bang.begin(), na.guard_bang.end());
        na.guard_bang.erase(std::unique(na.guard_bang.begin(), na.guard_bang.end()), na.guard_bang.end());
        na.body = branch_ren.empty() ? b.body : subst_process(b.body, branch_ren, fresh);
        ns.branches.push_back(std::move(na));
      }
      if (p->kind == Process::Kind::Sum)
        out.sums.push_back(std::move(ns));
      else
        out.repls.push_back(std::move(ns));
      return;
    }
  }
}

std::string erased_sum_encoding(const NSum& ns, const std::set<VarId>& hidden) {
  std::string out;
  Enc e;
  e.mode = Enc::Mode::Erased;
  e.hidden = &hidden;
  enc_nsum(out, ns, e, 'S');
  return out;
}

void nask_free_vars(const NAsk& a, std::set<VarId>& out) {
  std::set<VarId> vs;
  for (const Atom& x : a.guard_lin) collect_vars(x, vs);
  for (const Atom& x : a.guard_bang) collect_vars(x, vs);
  std::set<VarId> body_fv = free_vars(*a.body);
  vs.insert(body_fv.begin(), body_fv.end());
  for (VarId u : a.univ) vs.erase(u);
  out.insert(vs.begin(), vs.end());
}

}  // namespace

std::set<VarId> component_free_vars(const State& s) {
  std::set<VarId> vs;
  for (const Atom& a : s.lin) collect_vars(a, vs);
  for (const Atom& a : s.bang) collect_vars(a, vs);
  for (const NSum& ns : s.sums)
    for (const NAsk& a : ns.branches) nask_free_vars(a, vs);
  for (const NSum& ns : s.repls)
    for (const NAsk& a : ns.branches) nask_free_vars(a, vs);
  return vs;
}

std::set<VarId> state_free_vars(const State& s) {
  std::set<VarId> vs = component_free_vars(s);
  for (VarId h : s.hidden) vs.erase(h);
  return vs;
}

State normalize(const ProcessPtr& p, const NormEnv& env, VarId* fresh) {
  Collector col;
  free_vars(*p, col.used);
  walk(p, {}, col, fresh, env);

  State s;
  s.lin = std::move(col.lin);
  s.bang = std::move(col.bang);
  s.sums = std::move(col.sums);
  s.repls = std::move(col.repls);

  // a linear `false` counts as inconsistency too
  bool falsity = col.falsity;
  for (const Atom& a : s.lin)
    if (a.pred == env.false_pred) falsity = true;
  for (const Atom& a : s.bang)
    if (a.pred == env.false_pred) falsity = true;

  if (!falsity && env.theory) {
    std::vector<Atom> theory_atoms, rest;
    for (Atom& a : s.bang) {
      if (env.theory->is_theory_pred(a.pred))
        theory_atoms.push_back(std::move(a));
      else
        rest.push_back(std::move(a));
    }
    if (!theory_atoms.empty()) {
      bool inconsistent = false;
      std::vector<Atom> solved = env.theory->solve(theory_atoms, &inconsistent);
      if (inconsistent) {
        falsity = true;
      } else {
        rest.insert(rest.end(), solved.begin(), solved.end());
      }
    }
    s.bang = std::move(rest);
  }

  if (falsity) {
    // the store collapses to the inconsistent constraint
    s.lin.clear();
    s.bang.clear();
    s.bang.push_back(Atom{env.false_pred, {}});
  }

  std::sort(s.lin.begin(), s.lin.end());
  std::sort(s.bang.begin(), s.bang.end());
  s.bang.erase(std::unique(s.bang.begin(), s.bang.end()), s.bang.end());

  // stable component order for sums/repls
  std::set<VarId> hidden_probe(col.hidden.begin(), col.hidden.end());
  auto sort_sums = [&](std::vector<NSum>& v) {
    std::stable_sort(v.begin(), v.end(), [&](const NSum& a, const NSum& b) {
      return erased_sum_encoding(a, hidden_probe) < erased_sum_encoding(b, hidden_probe);
    });
  };
  sort_sums(s.sums);
  sort_sums(s.repls);

  // a sum duplicating a replicated sum is absorbed by it
  if (!s.repls.empty() && !s.sums.empty()) {
    std::vector<NSum> kept;
    for (NSum& ns : s.sums) {
      bool dup = false;
      for (const NSum& r : s.repls)
        if (r == ns) {
          dup = true;
          break;
        }
      if (!dup) kept.push_back(std::move(ns));
    }
    s.sums = std::move(kept);
  }

  // hidden names restricted to those actually occurring
  std::set<VarId> occ = component_free_vars(s);
  for (VarId h : col.hidden)
    if (occ.count(h)) s.hidden.push_back(h);
  std::sort(s.hidden.begin(), s.hidden.end());
  s.hidden.erase(std::unique(s.hidden.begin(), s.hidden.end()), s.hidden.end());
  return s;
}

State normalize(const ProcessPtr& p, const NormEnv& env) {
  VarId fresh = fresh_base(p);
  return normalize(p, env, &fresh);
}

// ---------------------------------------------------------------------------

namespace {

void collect_all_vars_c(const Constraint& c, std::set<VarId>& out) {
  switch (c.kind) {
    case Constraint::Kind::One:
    case Constraint::Kind::Zero:
      return;
    case Constraint::Kind::Atom:
      collect_vars(c.atom, out);
      return;
    case Constraint::Kind::Bang:
    case Constraint::Kind::Tensor:
      for (const Constraint& k : c.children) collect_all_vars_c(k, out);
      return;
    case Constraint::Kind::Exists:
      out.insert(c.binders.begin(), c.binders.end());
      collect_all_vars_c(c.children[0], out);
      return;
  }
}

void collect_all_vars_p(const Process& p, std::set<VarId>& out) {
  switch (p.kind) {
    case Process::Kind::Tell:
      collect_all_vars_c(p.tell, out);
      return;
    case Process::Kind::Hole:
      return;
    case Process::Kind::Par:
      for (const auto& k : p.children) collect_all_vars_p(*k, out);
      return;
    case Process::Kind::Exists:
      out.insert(p.binders.begin(), p.binders.end());
      collect_all_vars_p(*p.children[0], out);
      return;
    case Process::Kind::Sum:
    case Process::Kind::Repl:
      for (const AskBranch& b : p.branches) {
        out.insert(b.univ.begin(), b.univ.end());
        collect_all_vars_c(b.guard, out);
        collect_all_vars_p(*b.body, out);
      }
      return;
  }
}

VarId max_synth(const std::set<VarId>& vs) {
  VarId base = kSyntheticBase;
  for (VarId v : vs)
    if (is_synthetic(v) && v >= base) base = v + 1;
  return base;
}

}  // namespace

VarId fresh_base(const ProcessPtr& p) {
  std::set<VarId> vs;
  collect_all_vars_p(*p, vs);
  return max_synth(vs);
}

VarId fresh_base(const State& s) {
  std::set<VarId> vs = component_free_vars(s);
  vs.insert(s.hidden.begin(), s.hidden.end());
  for (const NSum& ns : s.sums)
    for (const NAsk& a : ns.branches) {
      vs.insert(a.univ.begin(), a.univ.end());
      collect_all_vars_p(*a.body, vs);
    }
  for (const NSum& ns : s.repls)
    for (const NAsk& a : ns.branches) {
      vs.insert(a.univ.begin(), a.univ.end());
      collect_all_vars_p(*a.body, vs);
    }
  return max_synth(vs);
}

ProcessPtr state_to_process_open(const State& s) {
  std::vector<ProcessPtr> parts;
  for (const Atom& a : s.lin) parts.push_back(mk_tell(Constraint::mk_atom(a)));
  for (const Atom& a : s.bang) parts.push_back(mk_tell(Constraint::bang(Constraint::mk_atom(a))));
  auto sum_to_branches = [](const NSum& ns) {
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
    return bs;
  };
  for (const NSum& ns : s.sums) parts.push_back(mk_sum(sum_to_branches(ns)));
  for (const NSum& ns : s.repls) parts.push_back(mk_repl(sum_to_branches(ns)));
  if (parts.empty()) return mk_tell(Constraint::one());
  return mk_par(std::move(parts));
}

ProcessPtr state_to_process(const State& s) { return mk_exists(s.hidden, state_to_process_open(s)); }

std::string print_state(const State& s, const SymbolScope& sc) {
  return print_process(*state_to_process(s), sc);
}

}  // namespace lcc
