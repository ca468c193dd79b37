// c1.hpp -- reachability for the monogenic all-ones matrix class
#pragma once

#include <optional>
#include <vector>

#include "avass/solver.hpp"
#include "avass/upset.hpp"
#include "avass/vass.hpp"

namespace avass {

/// Normalized system: every matrix is I or the all-ones matrix, and ones
/// transitions carry zero vectors. t_identity/t_ones partition the indices.
struct C1System {
  AffineVass base;
  std::vector<int> t_identity;
  std::vector<int> t_ones;
  std::vector<int> source_transition;  // per transition: original index
};

/// True iff every transition matrix is I or a power of the all-ones matrix
/// (that is, d^{n-1}·1_d for some n >= 1).
bool is_c1(const AffineVass& v);

/// Splits combined (A, b) transitions through a fresh state and expands
/// higher ones-powers into chains of single all-ones steps;
/// reachability-equivalent to the input.
C1System normalize_c1(const AffineVass& v);

struct NetTransition {
  StateId src = -1;
  StateId tgt = -1;
  bool mul = false;  // multiply by c, else add c
  Int c;
};

/// One integer counter with additive and multiplicative updates.
struct OneCounterNet {
  std::vector<std::string> states;
  std::vector<NetTransition> transitions;
};

/// Collapse each configuration to the sum of its entries: identity
/// transitions become Add(sum of b), all-ones transitions become Mul(d).
OneCounterNet delta_abstract(const C1System& sys);

/// Exact set { d·n : r(n, ..., n) ->*_{T_I} q(v) } as a UPSet.
UPSet compute_S(const C1System& sys, StateId q, const IntVector& v, StateId r);

/// Per-state accumulated level sets of the counter values obtainable right
/// after the k-th multiplicative step.
struct LevelSets {
  std::vector<std::vector<UPSet>> levels;  // levels[k-1][state]
  enum class Status { fixpoint_reached, depth_capped } status =
      Status::depth_capped;
  int fixpoint_level = -1;
};

/// Runs the level iteration from p(u) until the accumulated union stabilizes
/// or depth_cap is hit.
LevelSets compute_levels(const C1System& sys, StateId p, const IntVector& u,
                         int depth_cap);

/// Decides p(u) ->* q(v): condition (1) is Z-VASS reachability over the
/// identity transitions; condition (2) intersects the level sets with the
/// per-state S sets. Reachable answers carry a reconstructed, replay-verified
/// run; Unreachable requires the accumulated level union to reach a fixpoint;
/// the depth cap yields Unknown.
Verdict decide_c1(const C1System& sys, StateId p, const IntVector& u, StateId q,
                  const IntVector& v, int depth_cap);

/// Bounded exploration helper for one-counter nets.
bool net_bounded_reach(const OneCounterNet& net, StateId from, const Int& from_value,
                       StateId to, const Int& to_value, long max_steps,
                       const Int& max_abs);

/// Fig-8-style cross-check gadget: every Mul edge into r gets a parallel copy
/// into a gadget that nondeterministically subtracts an element of S and
/// exits to a fresh state (returned via exit_state).
OneCounterNet attach_gadget(const OneCounterNet& net, const UPSet& S, StateId r,
                            StateId* exit_state);

}  // namespace avass
