#include "avass/monoid.hpp"

#include <set>

#include "doctest.h"
#include "helpers.hpp"

using namespace avass;
using namespace avass::testing;

namespace {

// Independent closure oracle: saturate under pairwise products.
std::set<IntMatrix> naive_closure(int dim, const std::vector<IntMatrix>& gens,
                                  std::size_t cap) {
  std::set<IntMatrix> cl;
  cl.insert(IntMatrix::identity(dim));
  for (const IntMatrix& g : gens) cl.insert(g);
  bool changed = true;
  while (changed && cl.size() <= cap) {
    changed = false;
    std::vector<IntMatrix> cur(cl.begin(), cl.end());
    for (const IntMatrix& a : cur)
      for (const IntMatrix& b : cur)
        if (cl.insert(a * b).second) changed = true;
  }
  return cl;
}

IntMatrix product_of_word(int dim, const std::vector<IntMatrix>& gens,
                          const std::vector<int>& word) {
  IntMatrix m = IntMatrix::identity(dim);
  for (int gi : word) m = m * gens[static_cast<std::size_t>(gi)];
  return m;
}

}  // namespace

TEST_CASE("ws91_bounds exact evaluation") {
  // d = 1, ||G|| = 1: norm bound ceil(sqrt(5)) = 3
  std::vector<IntMatrix> gens{IntMatrix::identity(1)};
  MonoidBounds b = ws91_bounds(1, gens);
  CHECK(b.norm_bound == 3);
  CHECK(b.count_bound >= 1);
  CHECK(b.count_bound == 3);  // same product at d = 1

  // d = 2, ||G|| = 1: ceil(sqrt(1 · 25 · 16)) = 20
  std::vector<IntMatrix> gens2{IntMatrix::identity(2)};
  b = ws91_bounds(2, gens2);
  CHECK(b.norm_bound == 20);

  IntMatrix neg(2);
  neg.at(0, 0) = -1;
  CHECK_THROWS_AS(ws91_bounds(2, {neg}), not_nonnegative_error);
}

TEST_CASE("generate_monoid on the worked examples") {
  // {I} saturates immediately
  MatrixMonoid m = generate_monoid(2, {IntMatrix::identity(2)}, MonoidCaps{});
  CHECK(m.status == MatrixMonoid::Status::finite);
  CHECK(m.size() == 1);

  // Fig 2 generators with a norm cap of 100: (A·B)^8 has entries 2^7 = 128
  IntMatrix copy = IntMatrix::from_rows({{1, 0}, {1, 0}});
  IntMatrix transfer = IntMatrix::from_rows({{1, 1}, {0, 0}});
  IntMatrix ab_8 = IntMatrix::identity(2);
  for (int i = 0; i < 8; ++i) ab_8 = ab_8 * (copy * transfer);
  for (const Int& e : ab_8.a) CHECK(e == 128);

  MonoidCaps caps;
  caps.max_norm = 100;
  m = generate_monoid(2, {copy, transfer}, caps);
  REQUIRE(m.status == MatrixMonoid::Status::cap_exceeded);
  IntMatrix witness = product_of_word(2, {copy, transfer}, m.witness_word);
  CHECK(witness.norm() > 100);

  // reset generators close into {I, diag(0,1), diag(1,0), 0}
  IntMatrix d01(2), d10(2);
  d01.at(1, 1) = 1;
  d10.at(0, 0) = 1;
  m = generate_monoid(2, {d01, d10}, MonoidCaps{});
  REQUIRE(m.status == MatrixMonoid::Status::finite);
  std::set<IntMatrix> got(m.elements.begin(), m.elements.end());
  CHECK(got == naive_closure(2, {d01, d10}, 100));
  CHECK(m.size() == 4);
}

TEST_CASE("monoid elements record shortest producing words") {
  IntMatrix copy = IntMatrix::from_rows({{1, 0}, {1, 0}});
  IntMatrix transfer = IntMatrix::from_rows({{1, 1}, {0, 0}});
  MonoidCaps caps;
  caps.max_norm = 1000;
  MatrixMonoid m = generate_monoid(2, {copy, transfer}, caps);
  for (int i = 0; i < m.size() && i < 20; ++i) {
    CHECK(product_of_word(2, {copy, transfer},
                          m.words[static_cast<std::size_t>(i)]) ==
          m.elements[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("decide_finiteness: permutations, Fig 2, and a negative generator") {
  Rng rng(8301);

  // permutation generators close into at most d! elements
  for (int iter = 0; iter < 20; ++iter) {
    std::vector<IntMatrix> gens;
    int n = rand_int(rng, 1, 3);
    for (int i = 0; i < n; ++i) gens.push_back(rand_permutation_matrix(rng, 3));
    FinitenessResult res = decide_finiteness(3, gens);
    REQUIRE(res.kind == FinitenessResult::Kind::finite);
    CHECK(res.monoid.size() <= 6);
  }

  IntMatrix copy = IntMatrix::from_rows({{1, 0}, {1, 0}});
  IntMatrix transfer = IntMatrix::from_rows({{1, 1}, {0, 0}});
  FinitenessResult fig2 = decide_finiteness(2, {copy, transfer});
  CHECK(fig2.kind == FinitenessResult::Kind::infinite);

  // {-I} with a user cap of 10 elements: finite period-2 monoid
  IntMatrix minus_id(2);
  minus_id.at(0, 0) = -1;
  minus_id.at(1, 1) = -1;
  MonoidCaps cap;
  cap.max_count = 10;
  FinitenessResult neg = decide_finiteness(2, {minus_id}, cap);
  REQUIRE(neg.kind == FinitenessResult::Kind::finite);
  CHECK(neg.monoid.size() == 2);

  // negative generator with growing powers: Unknown under a user cap
  IntMatrix grow = IntMatrix::from_rows({{-2}});
  MonoidCaps cap2;
  cap2.max_count = 16;
  FinitenessResult unk = decide_finiteness(1, {grow}, cap2);
  CHECK(unk.kind == FinitenessResult::Kind::unknown);
}

TEST_CASE("closure equals naive pairwise saturation on random 0/1 generators") {
  Rng rng(8302);
  for (int iter = 0; iter < 40; ++iter) {
    int d = rand_int(rng, 1, 3);
    int n = rand_int(rng, 1, 2);
    std::vector<IntMatrix> gens;
    for (int i = 0; i < n; ++i) gens.push_back(rand_01_matrix(rng, d));

    FinitenessResult res = decide_finiteness(d, gens);
    if (res.kind != FinitenessResult::Kind::finite) continue;

    std::set<IntMatrix> got(res.monoid.elements.begin(), res.monoid.elements.end());
    CHECK(got == naive_closure(d, gens, 4096));

    // finite verdict: closure is product-closed under every generator
    for (const IntMatrix& e : res.monoid.elements)
      for (const IntMatrix& g : gens) CHECK(got.count(e * g) == 1);
  }
}

TEST_CASE("class cardinality caps: 2^d, d!, d^d, (d+1)^d, d^d") {
  Rng rng(8303);
  for (int iter = 0; iter < 60; ++iter) {
    int d = rand_int(rng, 1, 3);
    int n = rand_int(rng, 1, 3);
    int cls = rand_int(rng, 0, 2);
    std::vector<IntMatrix> gens;
    for (int i = 0; i < n; ++i) {
      if (cls == 0)
        gens.push_back(rand_reset_matrix(rng, d));
      else if (cls == 1)
        gens.push_back(rand_permutation_matrix(rng, d));
      else {
        // transfer: exactly one 1 per column
        IntMatrix m(d);
        for (int j = 0; j < d; ++j) m.at(rand_int(rng, 0, d - 1), j) = 1;
        gens.push_back(m);
      }
    }
    FinitenessResult res = decide_finiteness(d, gens);
    REQUIRE(res.kind == FinitenessResult::Kind::finite);
    long cap = 1;
    if (cls == 0)
      cap = 1L << d;
    else if (cls == 1)
      for (int i = 2; i <= d; ++i) cap *= i;
    else
      for (int i = 0; i < d; ++i) cap *= d;
    CHECK(res.monoid.size() <= cap);  // I belongs to every class
  }
}

TEST_CASE("infinite verdicts carry a norm-breaching witness") {
  Rng rng(8304);
  int infinite_seen = 0;
  for (int iter = 0; iter < 200 && infinite_seen < 8; ++iter) {
    int d = rand_int(rng, 2, 3);
    std::vector<IntMatrix> gens;
    int n = rand_int(rng, 1, 2);
    for (int i = 0; i < n; ++i) {
      IntMatrix m(d);
      for (Int& x : m.a) x = rand_int(rng, 0, 2);
      gens.push_back(m);
    }
    FinitenessResult res = decide_finiteness(d, gens);
    if (res.kind != FinitenessResult::Kind::infinite) continue;
    ++infinite_seen;
    MonoidBounds bounds = ws91_bounds(d, gens);
    IntMatrix witness = product_of_word(d, gens, res.witness_word);
    CHECK(witness.norm() > bounds.norm_bound);
  }
  CHECK(infinite_seen > 0);
}
