// monoid.hpp -- matrix monoid closure and finiteness decision
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "avass/matrix.hpp"

namespace avass {

struct MonoidCaps {
  std::optional<Int> max_count;
  std::optional<Int> max_norm;
};

/// Cardinality and norm bounds valid for any finite monoid generated by
/// nonnegative matrices.
struct MonoidBounds {
  Int count_bound;
  Int norm_bound;
};

/// Evaluates ||G||^{d^2(d-1)}·5^{d^3/2}·d^{d^3}·d^2 and ||G||^{d-1}·5^{d/2}·d^d
/// exactly: half exponents are handled by squaring the whole product and
/// taking the integer square root rounded up. ||G|| is clamped to >= 1.
/// Throws not_nonnegative_error on a negative entry.
MonoidBounds ws91_bounds(int dim, const std::vector<IntMatrix>& generators);

struct MatrixMonoid {
  enum class Status { finite, cap_exceeded };

  int dim = 0;
  std::vector<IntMatrix> elements;          // BFS order; elements[0] = I
  std::vector<std::vector<int>> words;      // one shortest generator word each
  Status status = Status::finite;
  std::vector<int> witness_word;            // generator word breaching a cap

  Int norm() const {
    Int n = 0;
    for (const IntMatrix& m : elements) {
      Int v = m.norm();
      if (v > n) n = v;
    }
    return n;
  }

  int size() const { return static_cast<int>(elements.size()); }

  std::optional<int> index_of(const IntMatrix& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // maintained by generate_monoid
  std::map<IntMatrix, int> index_;
};

/// Breadth-first closure under right multiplication by the generators,
/// starting from the identity. Deduplicated by full entry comparison.
/// Saturation within the caps gives Finite; otherwise the first offending
/// product word is recorded.
MatrixMonoid generate_monoid(int dim, const std::vector<IntMatrix>& generators,
                             const MonoidCaps& caps);

struct FinitenessResult {
  enum class Kind { finite, infinite, unknown };
  Kind kind = Kind::unknown;
  MatrixMonoid monoid;            // complete when finite, partial otherwise
  std::vector<int> witness_word;  // cap-breaching product when not finite
};

/// Nonnegative generators: closure capped by ws91_bounds, so a cap breach is
/// a sound Infinite verdict. Generators with negative entries: closure capped
/// by user_cap (default 2^16 elements), breach gives Unknown.
FinitenessResult decide_finiteness(int dim, const std::vector<IntMatrix>& generators,
                                   const std::optional<MonoidCaps>& user_cap = {});

}  // namespace avass
