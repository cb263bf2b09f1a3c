#pragma once

#include "lcc/filters.hpp"

namespace lcc {

// tau | c^in | <x>c^out. Extruded names are canonical rigid markers, so the
// labels of alpha-equivalent states coincide.
struct Action {
  enum class Kind { Tau, In, Out };
  Kind kind = Kind::Tau;
  Flat constraint;              // In, Out
  std::vector<VarId> extruded;  // Out: marker ids, ascending

  static Action tau() { return {}; }
};

std::string action_to_string(const Action& a, const SymbolScope& sc);

struct Budget {
  size_t max_states = 20000;
  size_t max_depth = 500;
  size_t max_unfold = 64;  // replication unfoldings per exploration branch
  // Skip replicated firings that only duplicate components already present.
  // An exploration device for saturating rule programs; never treated as
  // budget exhaustion.
  bool saturate = false;
};

struct TauStep {
  State to;
  size_t consumed = 0;  // linear atoms consumed by the guard
  size_t told = 0;      // linear atoms told by the continuation
  bool from_repl = false;
  std::string desc;
};

// One successor per (sum, branch, match), with replicated sums contributing
// through a single lazy unfolding. Deduplicated by state key.
std::vector<TauStep> tau_steps(const State& s, const System& sys);
std::vector<State> tau_successors(const State& s, const System& sys);

// Pruning rule behind Budget::saturate.
bool is_saturation_step(const State& from, const TauStep& step);

struct OutStep {
  Action action;
  Flat closed;        // exists-closed label, original binder names
  std::string label;  // canonical label key
  State to;
};

// Every nonempty sub-multiset of linear atoms plus subset of banged atoms
// (banged emissions are retained), over the axiom-rewritten stores, filtered
// by D. Hidden names occurring in the emission and nowhere else are
// extruded; emissions that would leak a still-hidden name are not offered.
// `marker_base` is the first rigid marker index to use for extruded names.
std::vector<OutStep> output_actions(const State& s, const Filter& D, const System& sys,
                                    uint32_t marker_base);
std::vector<OutStep> output_actions(const State& s, const Filter& D, const System& sys);

uint32_t marker_base_of(const State& s);

// The asynchronous input rule: never blocks.
State input_apply(const State& s, const Flat& c, const System& sys);

struct Closure {
  std::vector<State> states;  // reachable by tau*, including the start state
  std::vector<StateKey> keys; // canonical key of each state
  bool exhausted = false;
};

Closure weak_closure(const State& s, const System& sys, const Budget& budget);

struct Barbs {
  // canonical key of the closed label -> representative constraint
  std::map<std::string, Flat> set;
  bool exhausted = false;

  bool contains(const Flat& closed) const { return set.count(canonical_flat_key(closed)) > 0; }
};

Barbs barbs(const State& s, const Filter& D, const System& sys, const Budget& budget);

// JSON record {"from": .., "action": .., "to": ..} for trace export.
std::string transition_record_json(const StateKey& from, const std::string& action,
                                   const StateKey& to);

}  // namespace lcc
