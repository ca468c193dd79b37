// vass.hpp -- affine integer VASS data model
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "avass/matrix.hpp"

namespace avass {

using StateId = int;

struct Transition {
  StateId src = -1;
  StateId tgt = -1;
  IntMatrix mat;
  IntVector vec;
};

/// A tuple (d, Q, T): dimension, ordered control-states, ordered transitions.
/// Transition identity is the index in declaration order.
struct AffineVass {
  int dim = 0;
  std::vector<std::string> states;
  std::vector<Transition> transitions;

  explicit AffineVass(int d = 0) : dim(d) {}

  StateId add_state(const std::string& name) {
    states.push_back(name);
    return static_cast<StateId>(states.size()) - 1;
  }

  std::optional<StateId> find_state(const std::string& name) const {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i] == name) return static_cast<StateId>(i);
    return std::nullopt;
  }

  int add_transition(StateId src, StateId tgt, IntMatrix mat, IntVector vec) {
    check_state(src);
    check_state(tgt);
    if (mat.dim() != dim || vec.dim() != dim)
      throw dimension_error("transition dimension differs from system dimension");
    transitions.push_back(Transition{src, tgt, std::move(mat), std::move(vec)});
    return static_cast<int>(transitions.size()) - 1;
  }

  int add_transition(StateId src, StateId tgt, const IntVector& vec) {
    return add_transition(src, tgt, IntMatrix::identity(dim), vec);
  }

  int num_states() const { return static_cast<int>(states.size()); }
  int num_transitions() const { return static_cast<int>(transitions.size()); }

  /// ||T||: max over all |b(t)| entries and ||M(t)||; 0 for empty T.
  Int transition_norm() const {
    Int n = 0;
    for (const Transition& t : transitions) {
      Int a = t.vec.norm();
      if (a > n) n = a;
      Int b = t.mat.norm();
      if (b > n) n = b;
    }
    return n;
  }

  bool all_identity() const {
    for (const Transition& t : transitions)
      if (!t.mat.is_identity()) return false;
    return true;
  }

  void check_state(StateId s) const {
    if (s < 0 || s >= num_states())
      throw state_mismatch_error("undeclared state id " + std::to_string(s));
  }
};

struct Configuration {
  StateId state = -1;
  IntVector values;

  bool operator==(const Configuration& o) const {
    return state == o.state && values == o.values;
  }
  bool operator<(const Configuration& o) const {
    if (state != o.state) return state < o.state;
    return values < o.values;
  }
};

/// A start configuration plus transition indices; valid iff replay succeeds.
struct Run {
  Configuration start;
  std::vector<int> steps;
};

struct MatrixClassSet {
  bool reset = false;
  bool permutation = false;
  bool transfer = false;
  bool copyless = false;
  bool copy = false;
  bool identity = false;

  bool operator==(const MatrixClassSet& o) const {
    return reset == o.reset && permutation == o.permutation && transfer == o.transfer &&
           copyless == o.copyless && copy == o.copy && identity == o.identity;
  }
};

struct ReachQuery {
  StateId from_state = -1;
  IntVector from_values;
  StateId to_state = -1;
  IntVector to_values;
};

}  // namespace avass
