#include "lcc/term.hpp"

namespace lcc {

std::string var_display_name(const Interner& vars, VarId v) {
  if (is_rigid_marker(v)) return "_r" + std::to_string(v - kRigidBase);
  if (is_synthetic(v)) return "_x" + std::to_string(v - kSyntheticBase);
  return vars.name(v);
}

Term apply_subst(const Term& t, const Subst& s) {
  if (t.is_var()) {
    auto it = s.find(t.var_id());
    return it == s.end() ? t : it->second;
  }
  if (t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(apply_subst(a, s));
  return Term::app(t.fn(), std::move(args));
}

Atom apply_subst(const Atom& a, const Subst& s) {
  Atom r;
  r.pred = a.pred;
  r.args.reserve(a.args.size());
  for (const Term& t : a.args) r.args.push_back(apply_subst(t, s));
  return r;
}

void collect_vars(const Term& t, std::set<VarId>& out) {
  if (t.is_var()) {
    out.insert(t.var_id());
    return;
  }
  for (const Term& a : t.args()) collect_vars(a, out);
}

void collect_vars(const Atom& a, std::set<VarId>& out) {
  for (const Term& t : a.args) collect_vars(t, out);
}

void collect_subterms(const Term& t, std::vector<Term>& out) {
  out.push_back(t);
  if (!t.is_var())
    for (const Term& a : t.args()) collect_subterms(a, out);
}

bool match_term(const Term& pattern, const Term& value, const std::set<VarId>& open, Subst& binding) {
  if (pattern.is_var() && open.count(pattern.var_id())) {
    auto it = binding.find(pattern.var_id());
    if (it != binding.end()) return it->second == value;
    binding.emplace(pattern.var_id(), value);
    return true;
  }
  if (pattern.is_var()) return value.is_var() && value.var_id() == pattern.var_id();
  if (value.is_var() || value.fn() != pattern.fn() || value.args().size() != pattern.args().size()) return false;
  for (size_t i = 0; i < pattern.args().size(); ++i)
    if (!match_term(pattern.args()[i], value.args()[i], open, binding)) return false;
  return true;
}

bool match_atom(const Atom& pattern, const Atom& value, const std::set<VarId>& open, Subst& binding) {
  if (pattern.pred != value.pred || pattern.args.size() != value.args.size()) return false;
  for (size_t i = 0; i < pattern.args.size(); ++i)
    if (!match_term(pattern.args[i], value.args[i], open, binding)) return false;
  return true;
}

}  // namespace lcc
