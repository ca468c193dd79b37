// dioph.hpp -- minimal natural solutions of linear Diophantine systems
#pragma once

#include <vector>

#include "avass/matrix.hpp"

namespace avass {

/// A·x = c over x ∈ N^cols, with exact integer entries.
struct DioSystem {
  int rows = 0;
  int cols = 0;
  std::vector<Int> a;  // row-major rows×cols
  std::vector<Int> c;  // length rows

  DioSystem() = default;
  DioSystem(int m, int k)
      : rows(m), cols(k), a(static_cast<std::size_t>(m) * k), c(static_cast<std::size_t>(m)) {}

  const Int& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
  Int& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }

  /// A·x - c, exact.
  IntVector residual(const IntVector& x) const;
  bool solves(const IntVector& x) const { return residual(x).is_zero(); }
};

/// The solution set of A·x = c equals
///   ∪_{m ∈ particulars} (m + N-combinations of periods).
/// particulars are the minimal solutions (pairwise incomparable under
/// componentwise <=); periods are the Hilbert basis of A·x = 0.
struct SolutionBasis {
  std::vector<IntVector> particulars;
  std::vector<IntVector> periods;
};

/// Contejean–Devie completion on the homogenized system A·x - c·x0 = 0:
/// particulars are the minimal solutions with x0 = 1 (projected), periods the
/// minimal solutions with x0 = 0.
SolutionBasis minimal_solutions(const DioSystem& sys);

/// True iff some natural solution exists. Asserts every minimal solution
/// found respects ch16_bound.
bool feasible(const DioSystem& sys);

/// ((k+1) · max|A_ij| + ||c|| + 1)^rows — a bound on the max-norm of minimal
/// solutions, evaluated exactly.
Int ch16_bound(const DioSystem& sys);

/// Hilbert basis of the homogeneous system A·x = 0 (c is ignored).
std::vector<IntVector> hilbert_basis(const DioSystem& sys);

}  // namespace avass
