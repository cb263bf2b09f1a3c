#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "lcc/symbols.hpp"

namespace lcc {

// First order term: a variable or a function application (constants are
// applications of arity 0).
class Term {
 public:
  Term() = default;
  static Term var(VarId v) {
    Term t;
    t.var_ = v;
    t.is_var_ = true;
    return t;
  }
  static Term app(Sym fn, std::vector<Term> args = {}) {
    Term t;
    t.fn_ = fn;
    t.args_ = std::move(args);
    return t;
  }

  bool is_var() const { return is_var_; }
  VarId var_id() const { return var_; }
  Sym fn() const { return fn_; }
  const std::vector<Term>& args() const { return args_; }

  bool operator==(const Term& o) const {
    if (is_var_ != o.is_var_) return false;
    if (is_var_) return var_ == o.var_;
    return fn_ == o.fn_ && args_ == o.args_;
  }
  std::strong_ordering operator<=>(const Term& o) const {
    if (is_var_ != o.is_var_) return is_var_ ? std::strong_ordering::less : std::strong_ordering::greater;
    if (is_var_) return var_ <=> o.var_;
    if (auto c = fn_ <=> o.fn_; c != 0) return c;
    return compare_vec(args_, o.args_);
  }

 private:
  static std::strong_ordering compare_vec(const std::vector<Term>& a, const std::vector<Term>& b) {
    size_t n = a.size() < b.size() ? a.size() : b.size();
    for (size_t i = 0; i < n; ++i)
      if (auto c = a[i] <=> b[i]; c != 0) return c;
    return a.size() <=> b.size();
  }

  VarId var_ = 0;
  Sym fn_ = 0;
  bool is_var_ = false;
  std::vector<Term> args_;
};

struct Atom {
  Sym pred = 0;
  std::vector<Term> args;

  bool operator==(const Atom&) const = default;
  std::strong_ordering operator<=>(const Atom& o) const {
    if (auto c = pred <=> o.pred; c != 0) return c;
    size_t n = args.size() < o.args.size() ? args.size() : o.args.size();
    for (size_t i = 0; i < n; ++i)
      if (auto c = args[i] <=> o.args[i]; c != 0) return c;
    return args.size() <=> o.args.size();
  }
};

using Subst = std::map<VarId, Term>;

Term apply_subst(const Term& t, const Subst& s);
Atom apply_subst(const Atom& a, const Subst& s);

void collect_vars(const Term& t, std::set<VarId>& out);
void collect_vars(const Atom& a, std::set<VarId>& out);

// All subterms of t, including t itself.
void collect_subterms(const Term& t, std::vector<Term>& out);

// Plain pattern matching: extends binding so that pattern[binding] == value,
// instantiating only variables in `open`. Returns false if impossible.
bool match_term(const Term& pattern, const Term& value, const std::set<VarId>& open, Subst& binding);
bool match_atom(const Atom& pattern, const Atom& value, const std::set<VarId>& open, Subst& binding);

}  // namespace lcc
