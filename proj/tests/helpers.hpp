// helpers.hpp -- shared fixtures and independent oracles for the test suites
#pragma once

#include <functional>
#include <random>
#include <set>
#include <vector>

#include "avass/core.hpp"

namespace avass::testing {

using Rng = std::mt19937_64;

inline int rand_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Transfer + copy system with p -> q copy and q -> p transfer; its matrix
/// monoid is infinite and from p(1,1) only q(2^n, 2^n) is reachable at q.
inline AffineVass make_fig2() {
  AffineVass v(2);
  StateId p = v.add_state("p");
  StateId q = v.add_state("q");
  v.add_transition(p, q, IntMatrix::from_rows({{1, 0}, {1, 0}}), IntVector::zero(2));
  v.add_transition(q, p, IntMatrix::from_rows({{1, 1}, {0, 0}}), IntVector::zero(2));
  return v;
}

/// Single state with an all-ones-matrix loop and the four unit-vector loops;
/// infinite monoid, every configuration reaches every other.
inline AffineVass make_fig3_v1() {
  AffineVass v(2);
  StateId p = v.add_state("p");
  v.add_transition(p, p, IntMatrix::ones(2), IntVector::zero(2));
  v.add_transition(p, p, IntVector{1, 0});
  v.add_transition(p, p, IntVector{0, 1});
  v.add_transition(p, p, IntVector{-1, 0});
  v.add_transition(p, p, IntVector{0, -1});
  return v;
}

/// Two states exchanging the all-ones matrix and the zero matrix; infinite
/// monoid but only finitely many reachable vectors from any start.
inline AffineVass make_fig3_v2() {
  AffineVass v(2);
  StateId p = v.add_state("p");
  StateId q = v.add_state("q");
  v.add_transition(p, q, IntMatrix::ones(2), IntVector::zero(2));
  v.add_transition(q, p, IntMatrix::zero(2), IntVector::zero(2));
  return v;
}

/// Exhaustive DFS over all runs of length <= max_len starting at `from`.
/// Independent of bfs_reach; calls visit on every reached configuration
/// (including the start). Stops early if visit returns false.
inline void enumerate_runs(const AffineVass& v, const Configuration& from, int max_len,
                           const std::function<bool(const Configuration&, int)>& visit) {
  struct Walker {
    const AffineVass& v;
    const std::function<bool(const Configuration&, int)>& visit;
    bool stopped = false;

    void go(const Configuration& c, int depth, int max_len) {
      if (stopped) return;
      if (!visit(c, depth)) {
        stopped = true;
        return;
      }
      if (depth == max_len) return;
      for (const Transition& t : v.transitions) {
        if (t.src != c.state) continue;
        go(apply_transition(t, c), depth + 1, max_len);
      }
    }
  } w{v, visit};
  w.go(from, 0, max_len);
}

/// True iff some run of length <= max_len goes from `from` to `to`.
inline bool exhaustive_reach(const AffineVass& v, const Configuration& from,
                             const Configuration& to, int max_len) {
  bool found = false;
  enumerate_runs(v, from, max_len, [&](const Configuration& c, int) {
    if (c == to) {
      found = true;
      return false;
    }
    return true;
  });
  return found;
}

inline IntVector rand_vector(Rng& rng, int d, int lo, int hi) {
  IntVector x(d);
  for (int i = 0; i < d; ++i) x[i] = rand_int(rng, lo, hi);
  return x;
}

inline IntMatrix rand_reset_matrix(Rng& rng, int d) {
  IntMatrix m(d);
  for (int i = 0; i < d; ++i) m.at(i, i) = rand_int(rng, 0, 1);
  return m;
}

inline IntMatrix rand_permutation_matrix(Rng& rng, int d) {
  std::vector<int> perm(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  IntMatrix m(d);
  for (int i = 0; i < d; ++i) m.at(i, perm[static_cast<std::size_t>(i)]) = 1;
  return m;
}

inline IntMatrix rand_01_matrix(Rng& rng, int d) {
  IntMatrix m(d);
  for (Int& x : m.a) x = rand_int(rng, 0, 1);
  return m;
}

/// Random afmp system over reset/permutation matrices (acceptance-3 shape).
inline AffineVass rand_afmp_system(Rng& rng, int max_d = 3, int max_q = 3,
                                   int max_t = 4) {
  int d = rand_int(rng, 1, max_d);
  int nq = rand_int(rng, 1, max_q);
  int nt = rand_int(rng, 1, max_t);
  AffineVass v(d);
  for (int i = 0; i < nq; ++i) v.add_state("q" + std::to_string(i));
  for (int i = 0; i < nt; ++i) {
    IntMatrix m = rand_int(rng, 0, 1) ? rand_reset_matrix(rng, d)
                                      : rand_permutation_matrix(rng, d);
    v.add_transition(rand_int(rng, 0, nq - 1), rand_int(rng, 0, nq - 1), std::move(m),
                     rand_vector(rng, d, -1, 1));
  }
  return v;
}

/// Random plain Z-VASS (identity matrices only).
inline AffineVass rand_zvass(Rng& rng, int max_d = 3, int max_q = 3, int max_t = 5,
                             int max_entry = 2) {
  int d = rand_int(rng, 1, max_d);
  int nq = rand_int(rng, 1, max_q);
  int nt = rand_int(rng, 1, max_t);
  AffineVass v(d);
  for (int i = 0; i < nq; ++i) v.add_state("q" + std::to_string(i));
  for (int i = 0; i < nt; ++i)
    v.add_transition(rand_int(rng, 0, nq - 1), rand_int(rng, 0, nq - 1),
                     rand_vector(rng, d, -max_entry, max_entry));
  return v;
}

}  // namespace avass::testing
