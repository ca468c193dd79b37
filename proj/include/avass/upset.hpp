// upset.hpp -- exact ultimately periodic subsets of Z
#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "avass/dioph.hpp"
#include "avass/ints.hpp"

namespace avass {

/// One-dimensional semilinear set: finitely many points, one-sided arithmetic
/// rays {base, base±period, ...}, and full lines base + period·Z. Kept
/// normalized (subsumed components removed, line bases reduced mod period,
/// +/- ray pairs over the same residue fused into lines). Equality, subset
/// and intersection are decided exactly: outside the largest base offset,
/// membership only depends on the residue modulo the period lcm, so a finite
/// window check is conclusive.
class UPSet {
 public:
  struct Ray {
    Int base;
    Int period;  // > 0
    bool up;     // direction: base + period·N (up) or base - period·N
    bool operator<(const Ray& o) const;
    bool operator==(const Ray& o) const = default;
  };
  struct Line {
    Int base;    // reduced into [0, period)
    Int period;  // > 0
    bool operator<(const Line& o) const;
    bool operator==(const Line& o) const = default;
  };

  UPSet() = default;

  static UPSet empty_set() { return UPSet(); }
  static UPSet singleton(const Int& n);
  static UPSet finite(const std::set<Int>& points);
  static UPSet ray(const Int& base, const Int& period, bool up);
  static UPSet line(const Int& base, const Int& period);

  bool is_empty() const { return points_.empty() && rays_.empty() && lines_.empty(); }
  bool member(const Int& n) const;

  UPSet unite(const UPSet& o) const;
  UPSet add_constant(const Int& c) const;
  UPSet scaled(const Int& factor) const;  // factor > 0
  UPSet negated() const;
  UPSet minkowski(const UPSet& o) const;
  std::optional<Int> intersect_nonempty(const UPSet& o) const;
  bool equal(const UPSet& o) const;
  bool is_subset(const UPSet& o) const;

  const std::set<Int>& points() const { return points_; }
  const std::vector<Ray>& rays() const { return rays_; }
  const std::vector<Line>& lines() const { return lines_; }

  std::string str() const;
  bool operator==(const UPSet& o) const {
    return points_ == o.points_ && rays_ == o.rays_ && lines_ == o.lines_;
  }

 private:
  void normalize();
  /// Conclusive scan window: beyond it membership is periodic for both sets.
  static std::pair<Int, Int> window(const UPSet& a, const UPSet& b);

  std::set<Int> points_;
  std::vector<Ray> rays_;
  std::vector<Line> lines_;
};

/// Exact description of { offset + Σ n_g·g : n ∈ N^gens } for positive
/// generators: the finite exceptional part plus a gcd-periodic tail. The tail
/// start is found by scanning for a full gcd-window of representables, so the
/// result is self-certifying rather than relying on a Frobenius formula.
UPSet numerical_semigroup(const std::vector<Int>& positive_gens, const Int& offset);

/// { <weights, x> : x solves the system described by `basis` }, exact.
UPSet project_to_int(const SolutionBasis& basis, const std::vector<Int>& weights);

}  // namespace avass
