// core.hpp -- operational semantics, matrix classification, bounded search oracle
#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "avass/vass.hpp"

namespace avass {

/// One step p(x) -> q(A·x + b). Throws on state or dimension mismatch.
Configuration apply_transition(const Transition& t, const Configuration& c);

/// Effect of a transition word on u, ignoring path validity:
/// returns (M(w), w(u)) with M(wt) = M(t)·M(w).
std::pair<IntMatrix, IntVector> word_effect(std::span<const Transition> w,
                                            const IntVector& u);

/// Row/column counting rules over {0,1} matrices; all flags false for
/// matrices with entries outside {0,1}.
MatrixClassSet classify_matrix(const IntMatrix& m);

/// Intersection of classify_matrix over all transition matrices.
MatrixClassSet classify_vass(const AffineVass& v);

/// d + |Q| + (d^2 + d) · |T| · max(1, ceil(log2(||T|| + 1))).
Int vass_size(const AffineVass& v);

struct ReplayResult {
  std::vector<Configuration> configs;  // start plus one per successful step
  bool ok = true;
  std::size_t failed_step = 0;  // index of first invalid step when !ok

  const Configuration& final_config() const { return configs.back(); }
};

/// Replays a run; reports the first invalid step instead of throwing.
ReplayResult replay(const AffineVass& v, const Run& r);

struct SearchBounds {
  long max_steps = 64;
  Int max_abs_value = 1 << 20;
  long max_visited = 1 << 20;
};

struct SearchStats {
  long visited = 0;
  bool pruned = false;  // some configuration exceeded max_abs_value
  bool hit_visit_cap = false;
};

struct BfsResult {
  bool found = false;
  Run run;            // valid when found
  SearchStats stats;

  /// Exhausted without pruning: the bounded state space was fully explored.
  bool exhaustive() const { return !found && !stats.pruned && !stats.hit_visit_cap; }
};

/// Breadth-first semi-decision oracle. Found runs replay to `to`;
/// Exhausted means no run within the bounds, and stats record whether
/// pruning occurred (bounded-completeness, not unreachability).
BfsResult bfs_reach(const AffineVass& v, const Configuration& from,
                    const Configuration& to, const SearchBounds& bounds);

/// All configurations reachable from `from` within the bounds, BFS order.
std::vector<Configuration> bfs_explore(const AffineVass& v, const Configuration& from,
                                       const SearchBounds& bounds,
                                       SearchStats* stats = nullptr);

}  // namespace avass
