#include "avass/reduce.hpp"

#include "avass/core.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace avass;
using namespace avass::testing;

namespace {

MatrixMonoid monoid_of(const AffineVass& v) {
  std::vector<IntMatrix> gens;
  for (const Transition& t : v.transitions) gens.push_back(t.mat);
  FinitenessResult fin = decide_finiteness(v.dim, gens);
  REQUIRE(fin.kind == FinitenessResult::Kind::finite);
  return fin.monoid;
}

// Builds the from-origin run of Prop 3.4(a) for a source run w and checks it
// lands on (p, M(w)) carrying w(0).
void check_from_origin_roundtrip(const AffineVass& v, const FromOriginVass& origin,
                                 const MatrixMonoid& monoid, const Run& run) {
  ReplayResult rep = replay(v, run);
  REQUIRE(rep.ok);
  StateId p = run.start.state;
  StateId q = rep.final_config().state;

  std::vector<int> steps;
  int elem = 0;  // I
  for (auto it = run.steps.rbegin(); it != run.steps.rend(); ++it) {
    const Transition& t = v.transitions[static_cast<std::size_t>(*it)];
    StateId from = origin.pair_state(t.tgt, elem);
    // find the lifted copy of *it leaving `from`
    int found = -1;
    for (int ti = 0; ti < origin.vass.num_transitions(); ++ti) {
      if (origin.source_transition[static_cast<std::size_t>(ti)] != *it) continue;
      if (origin.vass.transitions[static_cast<std::size_t>(ti)].src != from) continue;
      found = ti;
      break;
    }
    REQUIRE(found >= 0);
    steps.push_back(found);
    elem = origin.labels[static_cast<std::size_t>(
                             origin.vass.transitions[static_cast<std::size_t>(found)].tgt)]
               .elem;
  }

  Run lifted{Configuration{origin.pair_state(q, 0), IntVector::zero(v.dim)}, steps};
  ReplayResult lifted_rep = replay(origin.vass, lifted);
  REQUIRE(lifted_rep.ok);

  // end state is (p, M(w)) and the value is w(0)
  std::vector<Transition> word;
  for (int s : run.steps) word.push_back(v.transitions[static_cast<std::size_t>(s)]);
  auto [mw, w0] = word_effect(word, IntVector::zero(v.dim));
  std::optional<int> mw_idx = monoid.index_of(mw);
  REQUIRE(mw_idx.has_value());
  CHECK(lifted_rep.final_config().state == origin.pair_state(p, *mw_idx));
  CHECK(lifted_rep.final_config().values == w0);
}

Run random_walk(Rng& rng, const AffineVass& v, StateId from, const IntVector& u,
                int len) {
  Run run{Configuration{from, u}, {}};
  Configuration cur = run.start;
  for (int i = 0; i < len; ++i) {
    std::vector<int> avail;
    for (int ti = 0; ti < v.num_transitions(); ++ti)
      if (v.transitions[static_cast<std::size_t>(ti)].src == cur.state)
        avail.push_back(ti);
    if (avail.empty()) break;
    int pick = avail[static_cast<std::size_t>(
        rand_int(rng, 0, static_cast<int>(avail.size()) - 1))];
    run.steps.push_back(pick);
    cur = apply_transition(v.transitions[static_cast<std::size_t>(pick)], cur);
  }
  return run;
}

}  // namespace

TEST_CASE("reduce_from_origin on a plain Z-VASS reverses the arrows") {
  Rng rng(8401);
  AffineVass v = rand_zvass(rng, 2, 3, 4);
  MatrixMonoid m = monoid_of(v);
  REQUIRE(m.size() == 1);
  FromOriginVass origin = reduce_from_origin(v, m);
  REQUIRE(origin.vass.num_transitions() == v.num_transitions());
  for (int ti = 0; ti < v.num_transitions(); ++ti) {
    const Transition& t = v.transitions[static_cast<std::size_t>(ti)];
    const Transition& r = origin.vass.transitions[static_cast<std::size_t>(ti)];
    CHECK(r.src == origin.pair_state(t.tgt, 0));
    CHECK(r.tgt == origin.pair_state(t.src, 0));
    CHECK(r.vec == t.vec);
    CHECK(r.mat.is_identity());
  }
}

TEST_CASE("reduce_from_origin on the one-state reset example") {
  AffineVass v(1);
  v.add_state("p");
  v.add_transition(0, 0, IntMatrix::zero(1), IntVector{3});
  MatrixMonoid m = monoid_of(v);
  REQUIRE(m.size() == 2);  // {I, [0]}

  FromOriginVass origin = reduce_from_origin(v, m);
  CHECK(origin.vass.num_states() == 2);
  REQUIRE(origin.vass.num_transitions() == 2);
  std::set<IntVector> vecs;
  for (const Transition& t : origin.vass.transitions) vecs.insert(t.vec);
  CHECK(vecs == std::set<IntVector>{IntVector{0}, IntVector{3}});
}

TEST_CASE("Prop 3.4(a) round-trip on random afmp runs") {
  Rng rng(8402);
  for (int iter = 0; iter < 40; ++iter) {
    AffineVass v = rand_afmp_system(rng);
    MatrixMonoid m = monoid_of(v);
    FromOriginVass origin = reduce_from_origin(v, m);
    Run run = random_walk(rng, v, rand_int(rng, 0, v.num_states() - 1),
                          IntVector::zero(v.dim), rand_int(rng, 0, 5));
    check_from_origin_roundtrip(v, origin, m, run);
  }
}

TEST_CASE("reduce_afmp: empty system reaches end via end+final stages") {
  AffineVass v(2);
  v.add_state("p");
  ReduceOutcome out = reduce_afmp(v, 0, 0);
  REQUIRE(out.kind == ReduceOutcome::Kind::ok);
  const ReducedVass& r = *out.reduced;

  BfsResult res = bfs_reach(r.inner, Configuration{r.start, IntVector::zero(4)},
                            Configuration{r.end, IntVector::zero(4)}, SearchBounds{});
  REQUIRE(res.found);
  REQUIRE(res.run.steps.size() == 2);
  CHECK(r.stage[static_cast<std::size_t>(res.run.steps[0])] == StageTag::end_guess);
  CHECK(r.stage[static_cast<std::size_t>(res.run.steps[1])] == StageTag::final_guess);
}

TEST_CASE("reduce_afmp rejects the infinite-monoid Fig 3 right system") {
  AffineVass v2 = make_fig3_v2();
  ReduceOutcome out = reduce_afmp(v2, 0, 1);
  CHECK(out.kind == ReduceOutcome::Kind::infinite_monoid);
}

TEST_CASE("Thm 3.1 bounds and bounded oracle equivalence on random systems") {
  Rng rng(8403);
  int agreed = 0;
  for (int iter = 0; iter < 15; ++iter) {
    AffineVass v = rand_afmp_system(rng, 3, 3, 4);
    StateId p = rand_int(rng, 0, v.num_states() - 1);
    StateId q = rand_int(rng, 0, v.num_states() - 1);
    IntVector u = rand_vector(rng, v.dim, -2, 2);
    IntVector w = rand_vector(rng, v.dim, -2, 2);

    ReduceOutcome out = reduce_afmp(v, p, q);
    REQUIRE(out.kind == ReduceOutcome::Kind::ok);
    const ReducedVass& r = *out.reduced;

    MatrixMonoid m = monoid_of(v);
    Thm31Bounds bounds = check_thm31_bounds(r, v, m);
    CHECK(bounds.states_ok);
    CHECK(bounds.transitions_ok);
    CHECK(bounds.norm_ok);  // reset/permutation rows have single entries
    CHECK(bounds.norm_corrected_ok);
    CHECK(r.inner.all_identity());
    CHECK(r.inner.dim == 2 * v.dim);

    // forward: a source-side witness implies a reduced-side witness
    SearchBounds src_bounds{6, 32, 60000};
    BfsResult src_res =
        bfs_reach(v, Configuration{p, u}, Configuration{q, w}, src_bounds);
    IntVector start_vals(2 * v.dim), end_vals(2 * v.dim);
    for (int i = 0; i < v.dim; ++i) {
      start_vals[i] = u[i];
      end_vals[v.dim + i] = w[i];
    }
    if (src_res.found) {
      long mult_steps = 0;
      for (int i = 0; i < v.dim; ++i)
        mult_steps += std::abs(static_cast<int>(to_long(u[i])));
      SearchBounds red_bounds{static_cast<long>(src_res.run.steps.size()) + 2 +
                                  mult_steps,
                              Int(1000), 4000000};
      BfsResult red_res =
          bfs_reach(r.inner, Configuration{r.start, start_vals},
                    Configuration{r.end, end_vals}, red_bounds);
      CHECK(red_res.found);
      ++agreed;

      // stage discipline on the reduced witness
      if (red_res.found) {
        int phase = 0;  // 0 simul, 1 after end, 2 after final
        for (int s : red_res.run.steps) {
          StageTag tag = r.stage[static_cast<std::size_t>(s)];
          if (tag == StageTag::simul) CHECK(phase == 0);
          if (tag == StageTag::end_guess) {
            CHECK(phase == 0);
            phase = 1;
          }
          if (tag == StageTag::mult) CHECK(phase == 1);
          if (tag == StageTag::final_guess) {
            CHECK(phase == 1);
            phase = 2;
          }
        }
        CHECK(phase == 2);
      }
    }

    // backward: a reduced-side witness implies a source-side witness
    SearchBounds red_probe{8, 16, 60000};
    BfsResult red_found = bfs_reach(r.inner, Configuration{r.start, start_vals},
                                    Configuration{r.end, end_vals}, red_probe);
    if (red_found.found) {
      SearchBounds wide{12, 4000, 4000000};
      BfsResult src_check =
          bfs_reach(v, Configuration{p, u}, Configuration{q, w}, wide);
      CHECK(src_check.found);
    }
  }
  CHECK(agreed > 0);
}

TEST_CASE("cover_to_reach on the worked examples") {
  // single loop adding e1 at p: covering (5) from (0)
  AffineVass v(1);
  v.add_state("p");
  v.add_transition(0, 0, IntVector{1});
  auto [v2, query] = cover_to_reach(v, 0, IntVector{0}, 0, IntVector{5});
  BfsResult res = bfs_reach(v2, Configuration{query.from_state, query.from_values},
                            Configuration{query.to_state, query.to_values},
                            SearchBounds{20, 100, 100000});
  CHECK(res.found);

  // v = u with no transitions: coverable via the zero move alone
  AffineVass w(2);
  w.add_state("p");
  auto [w2, wq] = cover_to_reach(w, 0, IntVector{1, -1}, 0, IntVector{1, -1});
  res = bfs_reach(w2, Configuration{wq.from_state, wq.from_values},
                  Configuration{wq.to_state, wq.to_values}, SearchBounds{});
  CHECK(res.found);

  // decreasing-only system, target above the start: both sides false
  AffineVass dec(1);
  dec.add_state("p");
  dec.add_transition(0, 0, IntVector{-1});
  auto [d2, dq] = cover_to_reach(dec, 0, IntVector{0}, 0, IntVector{3});
  res = bfs_reach(d2, Configuration{dq.from_state, dq.from_values},
                  Configuration{dq.to_state, dq.to_values}, SearchBounds{30, 50, 50000});
  CHECK(!res.found);
}

TEST_CASE("cover_to_reach agrees with direct cover semantics") {
  Rng rng(8404);
  for (int iter = 0; iter < 25; ++iter) {
    AffineVass v = rand_afmp_system(rng, 2, 2, 3);
    StateId p = rand_int(rng, 0, v.num_states() - 1);
    StateId q = rand_int(rng, 0, v.num_states() - 1);
    IntVector u = rand_vector(rng, v.dim, -1, 1);
    IntVector tgt = rand_vector(rng, v.dim, -1, 1);

    // oracle: explore v, look for any configuration at q dominating tgt
    SearchBounds b{5, 8, 40000};
    std::vector<Configuration> seen = bfs_explore(v, Configuration{p, u}, b);
    bool coverable = false;
    for (const Configuration& c : seen) {
      if (c.state != q) continue;
      bool ge = true;
      for (int i = 0; i < v.dim; ++i)
        if (c.values[i] < tgt[i]) ge = false;
      if (ge) coverable = true;
    }

    auto [v2, query] = cover_to_reach(v, p, u, q, tgt);
    // reach needs extra steps to drain the excess above tgt
    SearchBounds rb{5 + 1 + 60, 70, 3000000};
    BfsResult res = bfs_reach(v2, Configuration{query.from_state, query.from_values},
                              Configuration{query.to_state, query.to_values}, rb);
    if (coverable) CHECK(res.found);
    if (res.found) {
      ReplayResult rep = replay(v2, res.run);
      REQUIRE(rep.ok);
      CHECK(rep.final_config().state == query.to_state);
    }
  }
}

TEST_CASE("reach_to_cover preserves matrix classes and mirrors effects") {
  IntMatrix transfer = IntMatrix::from_rows({{1, 1}, {0, 0}});
  AffineVass v(2);
  v.add_state("p");
  v.add_transition(0, 0, transfer, IntVector{1, 0});
  auto [v2, query] = reach_to_cover(v, 0, IntVector{1, 2}, 0, IntVector{3, 0});

  MatrixClassSet cls = classify_matrix(v2.transitions[0].mat);
  CHECK(cls.transfer);  // blockdiag of a transfer matrix is a transfer matrix
  CHECK(query.from_values == IntVector{1, 2, -1, -2});
  CHECK(query.to_values == IntVector{3, 0, -3, 0});

  // u = v with empty T: reach and cover both hold
  AffineVass w(1);
  w.add_state("p");
  auto [w2, wq] = reach_to_cover(w, 0, IntVector{7}, 0, IntVector{7});
  CHECK(wq.from_values == wq.to_values);

  // mirrored pair invariant: second half is the negation of the first
  Rng rng(8405);
  for (int iter = 0; iter < 20; ++iter) {
    AffineVass sys = rand_afmp_system(rng, 2, 2, 3);
    auto [sys2, q2] = reach_to_cover(sys, 0, rand_vector(rng, sys.dim, -2, 2), 0,
                                     IntVector::zero(sys.dim));
    std::vector<Configuration> seen =
        bfs_explore(sys2, Configuration{q2.from_state, q2.from_values},
                    SearchBounds{4, 20, 20000});
    for (const Configuration& c : seen)
      for (int i = 0; i < sys.dim; ++i)
        CHECK(c.values[i] == -c.values[sys.dim + i]);
  }
}
