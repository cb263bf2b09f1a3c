#include "lcc/filters.hpp"

#include <limits>

namespace lcc {

Filter Filter::finite(std::vector<Flat> list) {
  Filter f(Kind::Finite);
  for (const Flat& c : list) f.list_keys_.insert(canonical_flat_key(c));
  f.list_ = std::move(list);
  return f;
}

namespace {

// gamma(x,y) with both arguments variables
bool is_gamma_atom(const Flat& c, Sym gamma, VarId* a0, VarId* a1) {
  if (c.lin.size() != 1 || !c.bang.empty() || c.falsity) return false;
  const Atom& a = c.lin[0];
  if (a.pred != gamma || a.args.size() != 2) return false;
  if (!a.args[0].is_var() || !a.args[1].is_var()) return false;
  if (a0) *a0 = a.args[0].var_id();
  if (a1) *a1 = a.args[1].var_id();
  return true;
}

}  // namespace

bool Filter::contains(const Flat& closed, const System& sys) const {
  switch (kind_) {
    case Kind::All:
      return true;
    case Kind::Classical: {
      if (closed.falsity) return true;
      if (!closed.lin.empty()) return false;
      for (const Atom& a : closed.bang)
        if (!sys.is_classical(a.pred)) return false;
      return true;
    }
    case Kind::ClassicalPlus: {
      if (Filter::classical().contains(closed, sys)) return true;
      return closed.binders.empty() && closed.bang.empty() && closed.lin.size() == 1 &&
             closed.lin[0].pred == pred_;
    }
    case Kind::Atoms:
      return !closed.falsity && closed.lin.size() + closed.bang.size() == 1;
    case Kind::PiD: {
      if (closed.is_one()) return true;
      VarId a0, a1;
      if (!is_gamma_atom(closed, pred_, &a0, &a1)) return false;
      return closed.binders.size() == 1 && closed.binders[0] == a1 && a0 != a1;
    }
    case Kind::PiDStar: {
      VarId a0, a1;
      if (is_gamma_atom(closed, pred_, &a0, &a1) && closed.binders.empty()) return true;
      Filter d = Filter::pi_d(pred_);
      return d.contains(closed, sys);
    }
    case Kind::PiE: {
      if (closed.is_one()) return true;
      VarId a0, a1;
      return is_gamma_atom(closed, pred_, &a0, &a1) && closed.binders.empty();
    }
    case Kind::Finite:
      return list_keys_.count(canonical_flat_key(closed)) > 0;
  }
  return false;
}

size_t Filter::max_linear() const {
  constexpr size_t inf = std::numeric_limits<size_t>::max();
  switch (kind_) {
    case Kind::All:
      return inf;
    case Kind::Classical:
      return 0;
    case Kind::ClassicalPlus:
    case Kind::Atoms:
    case Kind::PiD:
    case Kind::PiDStar:
    case Kind::PiE:
      return 1;
    case Kind::Finite: {
      size_t m = 0;
      for (const Flat& c : list_) m = std::max(m, c.lin.size());
      return m;
    }
  }
  return inf;
}

size_t Filter::max_banged() const {
  constexpr size_t inf = std::numeric_limits<size_t>::max();
  switch (kind_) {
    case Kind::All:
    case Kind::Classical:
    case Kind::ClassicalPlus:
      return inf;
    case Kind::Atoms:
      return 1;
    case Kind::PiD:
    case Kind::PiDStar:
    case Kind::PiE:
      return 0;
    case Kind::Finite: {
      size_t m = 0;
      for (const Flat& c : list_) m = std::max(m, c.bang.size());
      return m;
    }
  }
  return inf;
}

std::string Filter::describe(const SymbolScope& sc) const {
  switch (kind_) {
    case Kind::All:
      return "all";
    case Kind::Classical:
      return "classical";
    case Kind::ClassicalPlus:
      return "classical+" + sc.sym_name(pred_);
    case Kind::Atoms:
      return "atoms";
    case Kind::PiD:
      return "pi-d";
    case Kind::PiDStar:
      return "pi-d*";
    case Kind::PiE:
      return "pi-e";
    case Kind::Finite: {
      std::string s = "list:";
      for (size_t i = 0; i < list_.size(); ++i) {
        if (i) s += " ; ";
        s += print_flat(list_[i], sc);
      }
      return s;
    }
  }
  return "?";
}

Filter Filter::parse_spec(const std::string& spec, SymbolScope& scope) {
  auto resolve_gamma = [&]() -> Sym {
    if (auto s = scope.find_sym("gamma"); s && scope.is_pred(*s)) return *s;
    throw std::runtime_error("pi filters need a binary predicate named 'gamma'");
  };
  if (spec == "all") return all();
  if (spec == "classical") return classical();
  if (spec == "atoms") return atoms();
  if (spec == "pi-d") return pi_d(resolve_gamma());
  if (spec == "pi-d*") return pi_d_star(resolve_gamma());
  if (spec == "pi-e") return pi_e(resolve_gamma());
  if (spec.rfind("classical+", 0) == 0) {
    std::string name = spec.substr(10);
    auto s = scope.find_sym(name);
    if (!s || !scope.is_pred(*s)) throw std::runtime_error("unknown predicate in filter: " + name);
    return classical_plus(*s);
  }
  if (spec.rfind("list:", 0) == 0) {
    std::vector<Flat> cs;
    std::string rest = spec.substr(5);
    size_t pos = 0;
    while (pos < rest.size()) {
      size_t semi = rest.find(';', pos);
      std::string piece = rest.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
      if (piece.find_first_not_of(" \t") != std::string::npos)
        cs.push_back(flatten_constraint(parse_constraint(piece, scope)));
      if (semi == std::string::npos) break;
      pos = semi + 1;
    }
    return finite(std::move(cs));
  }
  throw std::runtime_error("unknown filter spec: " + spec);
}

}  // namespace lcc
