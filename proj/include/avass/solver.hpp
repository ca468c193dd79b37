// solver.hpp -- exact Z-VASS reachability, the afmp pipeline, reset
// specialization, and existential formula export
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "avass/core.hpp"
#include "avass/monoid.hpp"
#include "avass/vass.hpp"

namespace avass {

/// Transition multiplicities satisfying flow balance and the effect equation,
/// together with an Euler-style run realizing them.
struct ParikhWitness {
  std::map<int, Int> counts;
  Run run;
};

/// Instantiation data for export_formula: which monoid element disjunct the
/// witness lives in and the lifted transition counts on the from-origin
/// system.
struct FormulaHint {
  int elem = -1;
  std::map<int, Int> origin_counts;
};

struct Verdict {
  enum class Kind { reachable, unreachable, unknown };
  Kind kind = Kind::unknown;
  std::optional<ParikhWitness> witness;  // replays on the queried system
  std::string note;
  std::optional<FormulaHint> hint;

  // statistics for result documents
  Int monoid_size{0};
  Int monoid_norm{0};
  long particulars_checked = 0;
  long levels = -1;  // C1 level iterations, when that route ran

  bool reachable() const { return kind == Kind::reachable; }
  bool unreachable() const { return kind == Kind::unreachable; }
};

/// Complete decision for identity-matrix systems: Parikh flow balance plus
/// the effect equation over the pruned transition set, solved exactly via the
/// Diophantine engine; realizable supports are found by a closure over the
/// minimal-solution supports and witnesses are rebuilt as Euler paths. Never
/// returns Unknown.
Verdict reach_zvass(const AffineVass& v, StateId p, const IntVector& u, StateId q,
                    const IntVector& v_target);

struct SolveCaps {
  std::optional<SearchBounds> oracle;    // enables the bfs fallback on Unknown
  std::optional<MonoidCaps> monoid_cap;  // cap for negative-entry generators
  int c1_depth = 48;
};

/// Dispatch: identity-only systems solve directly; finite-monoid systems go
/// through the from-origin reduction (one Z-VASS query per monoid element,
/// witness mapped back to an original run); the all-ones monogenic class goes
/// to the C1 decision; anything else is Unknown, with an optional bounded
/// oracle attempt when caps are given.
Verdict reach_affine(const AffineVass& v, StateId p, const IntVector& u, StateId q,
                     const IntVector& v_target, const SolveCaps& caps = {});

/// Reset specialization: descending chains over the meet-closure of the
/// generator diagonal supports, one chain-restricted reduction per chain.
Verdict reach_reset(const AffineVass& v, StateId p, const IntVector& u, StateId q,
                    const IntVector& v_target);

/// Existential LIA formula phi(u, v), true iff p(u) ->* q(v); SMT-LIB 2 text.
/// Throws on an infinite or undecided monoid.
std::string export_formula(const AffineVass& v, StateId p, StateId q);

/// All edge subsets whose induced undirected graph is connected and touches
/// root; edges are (src, tgt) pairs, results are index lists in canonical
/// order. must_touch additionally filters to supports covering that state.
std::vector<std::vector<int>> connected_supports(
    const std::vector<std::pair<StateId, StateId>>& edges, StateId root,
    std::optional<StateId> must_touch);

// --- SMT-LIB term evaluator (used to validate exported formulas) ---

struct SmtNode {
  std::string atom;  // empty for lists
  std::vector<SmtNode> kids;
};

/// Parses SMT-LIB 2 text into top-level s-expressions.
std::vector<SmtNode> parse_smt(const std::string& text);

/// Evaluates the asserted formula under env. Existentially bound variables
/// take their values from env when present; a disjunct whose binders are not
/// all in env evaluates to false (it is simply not witnessed).
bool eval_smt_formula(const std::vector<SmtNode>& doc,
                      const std::map<std::string, Int>& env);

}  // namespace avass
