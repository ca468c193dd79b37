#include "avass/upset.hpp"

#include <functional>
#include <set>

#include "doctest.h"
#include "helpers.hpp"

using namespace avass;
using namespace avass::testing;

namespace {

UPSet rand_upset(Rng& rng) {
  UPSet s;
  int npts = rand_int(rng, 0, 3);
  std::set<Int> pts;
  for (int i = 0; i < npts; ++i) pts.insert(rand_int(rng, -20, 20));
  s = UPSet::finite(pts);
  int nrays = rand_int(rng, 0, 2);
  for (int i = 0; i < nrays; ++i)
    s = s.unite(UPSet::ray(rand_int(rng, -15, 15), rand_int(rng, 1, 6),
                           rand_int(rng, 0, 1) == 1));
  if (rand_int(rng, 0, 3) == 0)
    s = s.unite(UPSet::line(rand_int(rng, -15, 15), rand_int(rng, 1, 6)));
  return s;
}

// N-combination enumeration up to the given depth: the independent oracle for
// project_to_int and the semigroup engine.
std::set<Int> combos_upto(const std::vector<Int>& gens, const Int& offset, int depth) {
  std::set<Int> cur{offset};
  for (int step = 0; step < depth; ++step) {
    std::set<Int> next = cur;
    for (const Int& v : cur)
      for (const Int& g : gens) next.insert(v + g);
    if (next == cur) break;
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

TEST_CASE("membership on the primitive shapes") {
  UPSet r = UPSet::ray(1, 2, true);
  CHECK(r.member(1));
  CHECK(r.member(3));
  CHECK(r.member(101));
  CHECK(!r.member(-1));
  CHECK(!r.member(2));

  UPSet d = UPSet::ray(0, 3, false);
  CHECK(d.member(0));
  CHECK(d.member(-3));
  CHECK(!d.member(3));
  CHECK(!d.member(-1));

  UPSet l = UPSet::line(-1, 3);
  CHECK(l.member(2));
  CHECK(l.member(-1));
  CHECK(l.member(-4));
  CHECK(!l.member(0));
}

TEST_CASE("worked examples: scale, intersect, minkowski") {
  UPSet z = UPSet::line(0, 1);
  UPSet scaled = z.scaled(2);
  CHECK(scaled.equal(UPSet::line(0, 2)));

  // evens vs {3, 9, 15, ...}: empty by parity
  UPSet evens = UPSet::ray(0, 2, true);
  UPSet odd6 = UPSet::ray(3, 6, true);
  CHECK(!evens.intersect_nonempty(odd6).has_value());

  UPSet shifted = UPSet::singleton(1).minkowski(UPSet::ray(0, 3, true));
  CHECK(shifted.equal(UPSet::ray(1, 3, true)));
}

TEST_CASE("normalization fuses overlapping +/- rays into a line") {
  UPSet s = UPSet::ray(0, 2, true).unite(UPSet::ray(4, 2, false));
  CHECK(s.equal(UPSet::line(0, 2)));
  CHECK(s.member(-100));
  CHECK(s.member(100));
  CHECK(!s.member(1));
}

TEST_CASE("project_to_int on the worked examples") {
  // periods project to {3, -5}, particular to 0: full line 0 + 1·Z
  SolutionBasis basis;
  basis.particulars.push_back(IntVector{0, 0});
  basis.periods.push_back(IntVector{1, 0});
  basis.periods.push_back(IntVector{0, 1});
  std::vector<Int> weights{3, -5};
  UPSet s = project_to_int(basis, weights);
  CHECK(s.equal(UPSet::line(0, 1)));

  // oracle: N-combinations of {3, -5} to depth 20 cover [-40, 40]
  std::set<Int> combos = combos_upto({3, -5}, 0, 20);
  for (Int n = -40; n <= 40; ++n) CHECK(s.member(n) == (combos.count(n) > 0));

  // periods project to {2}, particular to 1: odd upward ray
  basis.particulars = {IntVector{0, 1}};
  basis.periods = {IntVector{1, 0}};
  s = project_to_int(basis, {Int(2), Int(1)});
  CHECK(s.equal(UPSet::ray(1, 2, true)));

  // no periods, particulars project to {4, 7}
  basis.particulars = {IntVector{4}, IntVector{7}};
  basis.periods = {};
  s = project_to_int(basis, {Int(1)});
  CHECK(s.equal(UPSet::finite({Int(4), Int(7)})));
}

TEST_CASE("numerical_semigroup is exact vs combination enumeration") {
  Rng rng(9201);
  for (int iter = 0; iter < 50; ++iter) {
    int ngen = rand_int(rng, 1, 3);
    std::vector<Int> gens;
    for (int i = 0; i < ngen; ++i) gens.push_back(rand_int(rng, 1, 9));
    UPSet s = numerical_semigroup(gens, 0);
    std::set<Int> oracle = combos_upto(gens, 0, 150);  // depth past the window
    for (Int n = 0; n <= 120; ++n) CHECK(s.member(n) == (oracle.count(n) > 0));
    for (Int n = -5; n < 0; ++n) CHECK(!s.member(n));
  }
}

TEST_CASE("set operations agree with window semantics on random operands") {
  Rng rng(9202);
  for (int iter = 0; iter < 120; ++iter) {
    UPSet a = rand_upset(rng);
    UPSet b = rand_upset(rng);

    UPSet u = a.unite(b);
    UPSet neg = a.negated();
    Int c = rand_int(rng, -10, 10);
    UPSet sh = a.add_constant(c);
    Int f = rand_int(rng, 1, 4);
    UPSet sc = a.scaled(f);

    for (Int n = -200; n <= 200; ++n) {
      bool in_a = a.member(n);
      CHECK(u.member(n) == (in_a || b.member(n)));
      CHECK(neg.member(-n) == in_a);
      CHECK(sh.member(n + c) == in_a);
      if (n % f == 0) CHECK(sc.member(n * f) == a.member(n));
    }

    // scaled sets contain only multiples shifted by nothing: spot check
    if (f > 1)
      for (Int n = -200; n <= 200; ++n)
        if (sc.member(n)) CHECK(n % f == 0);

    // intersect_nonempty against the windowed oracle
    std::optional<Int> w = a.intersect_nonempty(b);
    bool oracle_nonempty = false;
    for (Int n = -300; n <= 300 && !oracle_nonempty; ++n)
      if (a.member(n) && b.member(n)) oracle_nonempty = true;
    if (w.has_value()) {
      CHECK(a.member(*w));
      CHECK(b.member(*w));
    } else {
      CHECK(!oracle_nonempty);
    }

    // union is an upper bound in the subset order
    CHECK(a.is_subset(u));
    CHECK(b.is_subset(u));
    CHECK(u.equal(b.unite(a)));
  }
}

TEST_CASE("minkowski sum agrees with bounded witness search") {
  Rng rng(9203);
  for (int iter = 0; iter < 40; ++iter) {
    UPSet a = rand_upset(rng);
    UPSet b = rand_upset(rng);
    UPSet m = a.minkowski(b);
    for (Int n = -60; n <= 60; ++n) {
      bool witness = false;
      for (Int x = -800; x <= 800 && !witness; ++x)
        if (a.member(x) && b.member(n - x)) witness = true;
      CHECK(m.member(n) == witness);
    }
  }
}

TEST_CASE("equal and subset on semantically equal encodings") {
  // the same odd numbers, encoded as a line vs as two rays
  UPSet odds_line = UPSet::line(1, 2);
  UPSet odds_rays = UPSet::ray(1, 2, true).unite(UPSet::ray(-1, 2, false));
  CHECK(odds_line.equal(odds_rays));
  CHECK(odds_rays.is_subset(odds_line));

  // refined periods: 0+2Z equals (0+4Z) u (2+4Z)
  UPSet evens = UPSet::line(0, 2);
  UPSet split = UPSet::line(0, 4).unite(UPSet::line(2, 4));
  CHECK(evens.equal(split));

  CHECK(!evens.equal(odds_line));
  CHECK(UPSet::empty_set().is_subset(evens));
  CHECK(!evens.is_subset(UPSet::empty_set()));
}
