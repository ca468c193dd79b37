// reduce.hpp -- afmp-to-Z-VASS constructions and cover/reach inter-reductions
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "avass/monoid.hpp"
#include "avass/vass.hpp"

namespace avass {

enum class StageTag { simul, end_guess, mult, final_guess };

struct StateLabel {
  enum class Kind { plain, pair, marked };
  Kind kind = Kind::plain;
  StateId base = -1;  // original state
  int elem = -1;      // monoid element index (pair/marked)
};

/// The from-origin system: states Q × M, transitions
///   ((tgt t, A), I, A·b(t), (src t, A·M(t))).
/// Simulates paths of the source system backwards; (q, I)(0) reaches
/// (p, A)(w(0)) exactly for words w from p to q with M(w) = A.
struct FromOriginVass {
  AffineVass vass;  // identity matrices only, dimension d
  std::vector<StateLabel> labels;
  std::vector<int> source_transition;  // per transition: index in the source system
  int monoid_size = 0;

  StateId pair_state(StateId base, int elem) const {
    return base * monoid_size + elem;
  }
};

/// Requires a finite monoid containing every product A·M(t); with
/// drop_missing_products, transitions whose product lies outside the element
/// set are dropped instead (used for chain-restricted reset solving).
FromOriginVass reduce_from_origin(const AffineVass& v, const MatrixMonoid& monoid,
                                  bool drop_missing_products = false);

/// The full simulation system over 2d counters with its four stages.
struct ReducedVass {
  AffineVass inner;  // identity matrices only, dimension 2d
  StateId start = -1;  // (q, I)
  StateId end = -1;    // plain p
  std::vector<StageTag> stage;         // per transition
  std::vector<StateLabel> labels;      // per state
  std::vector<int> source_transition;  // per transition; -1 outside T_simul
};

ReducedVass build_reduced(const AffineVass& v, const MatrixMonoid& monoid, StateId p,
                          StateId q, bool drop_missing_products = false);

struct ReduceOutcome {
  enum class Kind { ok, infinite_monoid, unknown_finiteness };
  Kind kind = Kind::unknown_finiteness;
  std::optional<ReducedVass> reduced;
  std::vector<int> witness_word;  // generator word breaching the monoid cap
};

/// Decides monoid finiteness internally; p(u) →* q(v) in V iff
/// start(u, 0) →* end(0, v) in the result.
ReduceOutcome reduce_afmp(const AffineVass& v, StateId p, StateId q,
                          const std::optional<MonoidCaps>& user_cap = {});

struct Thm31Bounds {
  bool states_ok = false;       // |Q''| <= 3·|M|·|Q|
  bool transitions_ok = false;  // |T''| <= 4d·|M|·(|Q|+|T|)
  bool norm_ok = false;         // ||T''|| <= ||M||·||T|| (rows of M single-entry)
  bool norm_corrected_ok = false;  // ||T''|| <= d·||M||·max(||T||,1)
};

Thm31Bounds check_thm31_bounds(const ReducedVass& r, const AffineVass& src,
                               const MatrixMonoid& monoid);

/// Fresh sink q_f with a zero move from q and d decrement loops;
/// some v' >= v reachable at q iff the returned reach query holds.
std::pair<AffineVass, ReachQuery> cover_to_reach(const AffineVass& v, StateId p,
                                                 const IntVector& u, StateId q,
                                                 const IntVector& v_target);

/// Doubles the counters, mirroring every effect: reach holds iff the returned
/// cover query holds (covering (v, -v) forces equality).
std::pair<AffineVass, ReachQuery> reach_to_cover(const AffineVass& v, StateId p,
                                                 const IntVector& u, StateId q,
                                                 const IntVector& v_target);

}  // namespace avass
