#pragma once

#include "lcc/lts.hpp"

namespace lcc {

struct RunBudget {
  Budget lts{20000, 500, 64, /*saturate=*/true};
  size_t game_nodes = 200000;
  size_t game_depth = 400;
  size_t input_repeat = 1;   // per-path injections of each candidate input
  size_t max_inputs = 400;   // cap on candidate inputs, exceeding counts as exhaustion
  size_t contexts = 60;      // context enumeration budget for may-testing
  uint64_t seed = 0xC0FFEEu;
};

struct WitnessStep {
  std::string side;  // "left" | "right"
  Action action;
  std::string action_text;
  std::string from_text, to_text;  // printed challenger states
  StateKey from_key, to_key;
  std::string defender_text;  // the partner state at this node
};

struct Witness {
  std::vector<WitnessStep> steps;
  std::string reason;
  std::string context;  // refuting context, when one is involved
  std::string to_json(const SymbolScope& sc) const;
};

struct Verdict {
  enum class Kind { Equivalent, NotEquivalent, Unknown };
  Kind kind = Kind::Unknown;
  size_t relation_size = 0;  // proved pairs backing an Equivalent verdict
  size_t nodes_used = 0;
  bool exhausted = false;
  Witness witness;
  std::string note;

  std::string to_json(const SymbolScope& sc) const;
};

const char* verdict_name(Verdict::Kind k);

// Guard instances of the asks occurring anywhere in p or q, with universal
// variables instantiated over the terms occurring in p and q plus one fresh
// rigid name, intersected with E.
std::vector<Flat> candidate_inputs(const State& p, const State& q, const Filter& E, const System& sys,
                                   size_t cap, bool* capped);

// On-the-fly weak bisimulation game with a coinductive assumption table.
// Equivalent is reported only when the game closes without exhaustion; by
// the coincidence of the labeled and barbed congruences this verdict carries
// over to barbed congruence.
Verdict bisim(const State& p, const State& q, const Filters& f, const System& sys, const RunBudget& b);
Verdict bisim(const ProcessPtr& p, const ProcessPtr& q, const Filters& f, const System& sys,
              const RunBudget& b);

// Evaluation contexts: exactly one hole, not under a guard or a replication.
bool valid_evaluation_context(const ProcessPtr& ctx, std::string* why = nullptr);
ProcessPtr plug(const ProcessPtr& ctx, const ProcessPtr& p);

// Barbed-bisimulation refutation over an explicit family of evaluation
// contexts: tau challenges plus barb-set equality. Can only refute.
Verdict barbed_refute(const ProcessPtr& p, const ProcessPtr& q, const Filters& f,
                      const std::vector<ProcessPtr>& contexts, const System& sys, const RunBudget& b);

// Deterministic evaluation-context family used by may-testing and the
// refutation cross-checks: parallel tells over the atom alphabet of p and q,
// asks from the candidate inputs (nesting at most 2), and hiding of at most
// two names.
std::vector<ProcessPtr> generate_contexts(const ProcessPtr& p, const ProcessPtr& q, const Filters& f,
                                          const System& sys, const RunBudget& b, size_t count);

// Bounded may-testing: compares D-accessible constraints of C[p] and C[q]
// over the generated context family. Refutation-complete only in the limit,
// so the positive outcome is Unknown.
Verdict may_test(const ProcessPtr& p, const ProcessPtr& q, const Filters& f, size_t context_budget,
                 const System& sys, const RunBudget& b);

// Linear-logic translation of a process, in a prover-oriented text syntax.
std::string logical_translate(const ProcessPtr& p, const SymbolScope& sc);

// The law suite over classical constraints: each distinct law checked as a
// bisimilarity on classical instantiations (expected Equivalent) and one
// designed linear instantiation (expected NotEquivalent).
struct LawOutcome {
  int law = 0;  // 1,2,4,5,6,7,8 (2 and 3 coincide)
  std::string instance;
  bool classical = false;
  Verdict verdict;
};

struct LawReport {
  std::shared_ptr<SymbolScope> scope;
  std::vector<LawOutcome> outcomes;
  bool all_expected() const;
};

LawReport law_suite(const RunBudget& b);

}  // namespace lcc
