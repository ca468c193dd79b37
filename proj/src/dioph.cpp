#include "avass/dioph.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <set>

#include "avass/errors.hpp"

namespace avass {

IntVector DioSystem::residual(const IntVector& x) const {
  if (x.dim() != cols) throw dimension_error("residual: wrong solution arity");
  IntVector r(rows);
  for (int i = 0; i < rows; ++i) {
    Int s = 0;
    for (int j = 0; j < cols; ++j)
      if (at(i, j) != 0) s += at(i, j) * x[j];
    r[i] = s - c[static_cast<std::size_t>(i)];
  }
  return r;
}

namespace {

// Completion procedure of Contejean and Devie for A·x = 0 over N^k.
// Frontier candidates grow one unit at a time; a candidate t is extended in
// direction j only when <A·t, A·e_j> < 0, and dropped as soon as it dominates
// a known minimal solution. Scalar is long (fast path, guarded) or Int.
template <typename Scalar>
class Completion {
 public:
  // capped_var (when >= 0) bounds one coordinate to capped_at; every minimal
  // solution below that bound is still found, since the completion reaches it
  // through componentwise-smaller candidates only.
  Completion(int rows, int cols, std::vector<Scalar> matrix, Scalar entry_cap,
             int capped_var = -1, Scalar capped_at = Scalar(0))
      : rows_(rows),
        cols_(cols),
        a_(std::move(matrix)),
        entry_cap_(entry_cap),
        capped_var_(capped_var),
        capped_at_(capped_at) {}

  std::vector<std::vector<Scalar>> run() {
    std::vector<std::vector<Scalar>> minimal;
    std::vector<std::vector<Scalar>> col(static_cast<std::size_t>(cols_));
    for (int j = 0; j < cols_; ++j) {
      std::vector<Scalar> cj(static_cast<std::size_t>(rows_));
      for (int i = 0; i < rows_; ++i) cj[static_cast<std::size_t>(i)] = at(i, j);
      col[static_cast<std::size_t>(j)] = std::move(cj);
    }

    struct Node {
      std::vector<Scalar> x;
      std::vector<Scalar> val;  // A·x cached
    };
    std::vector<Node> frontier;
    for (int j = 0; j < cols_; ++j) {
      std::vector<Scalar> x(static_cast<std::size_t>(cols_), Scalar(0));
      x[static_cast<std::size_t>(j)] = Scalar(1);
      frontier.push_back(Node{std::move(x), col[static_cast<std::size_t>(j)]});
    }

    const bool debug = std::getenv("AVASS_DIOPH_DEBUG") != nullptr;
    long level = 0;
    while (!frontier.empty()) {
      if (debug)
        std::fprintf(stderr, "dioph level %ld: frontier %zu, minimal %zu\n",
                     ++level, frontier.size(), minimal.size());
      // harvest solutions of this level; same-level vectors have equal
      // coordinate sums so they cannot dominate one another
      std::vector<Node> rest;
      for (Node& n : frontier) {
        if (is_zero(n.val))
          minimal.push_back(std::move(n.x));
        else
          rest.push_back(std::move(n));
      }
      std::vector<Node> next;
      std::set<std::vector<Scalar>> next_seen;
      for (const Node& n : rest) {
        for (int j = 0; j < cols_; ++j) {
          if (!descends(n.val, col[static_cast<std::size_t>(j)])) continue;
          if (j == capped_var_ && n.x[static_cast<std::size_t>(j)] >= capped_at_)
            continue;
          std::vector<Scalar> x = n.x;
          Scalar& xj = x[static_cast<std::size_t>(j)];
          xj += 1;
          if (xj > entry_cap_) throw precondition_error("dioph: entry cap exceeded");
          if (next_seen.count(x)) continue;
          if (dominates_any(x, minimal)) continue;
          std::vector<Scalar> val = n.val;
          for (int i = 0; i < rows_; ++i)
            val[static_cast<std::size_t>(i)] +=
                col[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
          next_seen.insert(x);
          next.push_back(Node{std::move(x), std::move(val)});
        }
      }
      frontier = std::move(next);
    }
    return minimal;
  }

 private:
  const Scalar& at(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * cols_ + j];
  }

  static bool is_zero(const std::vector<Scalar>& v) {
    for (const Scalar& x : v)
      if (x != 0) return false;
    return true;
  }

  // <u, w> < 0 — the frontier-pruning inner product test
  static bool descends(const std::vector<Scalar>& u, const std::vector<Scalar>& w) {
    Scalar s(0);
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * w[i];
    return s < 0;
  }

  static bool dominates_any(const std::vector<Scalar>& x,
                            const std::vector<std::vector<Scalar>>& minimal) {
    for (const std::vector<Scalar>& m : minimal) {
      bool ge = true;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < m[i]) {
          ge = false;
          break;
        }
      if (ge) return true;
    }
    return false;
  }

  int rows_;
  int cols_;
  std::vector<Scalar> a_;
  Scalar entry_cap_;
  int capped_var_;
  Scalar capped_at_;
};

// Guards keeping every intermediate long value well under 2^62:
// |A·x| <= cols·2^10·2^18 <= 2^39 and inner products <= rows·2^39·2^10 <= 2^58.
constexpr long kLongMatrixCap = 1 << 10;
constexpr long kLongEntryCap = 1 << 18;
constexpr int kLongRowCap = 512;
constexpr int kLongColCap = 2048;

// Minimal nonzero solutions of H·x = 0 with H given row-major; capped_var
// (when >= 0) restricts that coordinate to at most 1.
std::vector<IntVector> complete_homogeneous(int rows, int cols,
                                            const std::vector<Int>& h,
                                            int capped_var = -1) {
  bool longs_ok = rows <= kLongRowCap && cols <= kLongColCap;
  for (const Int& x : h)
    if (!(int_abs(x) < kLongMatrixCap)) {
      longs_ok = false;
      break;
    }
  if (longs_ok) {
    std::vector<long> hl(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) hl[i] = to_long(h[i]);
    try {
      Completion<long> comp(rows, cols, std::move(hl), kLongEntryCap, capped_var, 1);
      std::vector<std::vector<long>> sols = comp.run();
      std::vector<IntVector> out;
      out.reserve(sols.size());
      for (const std::vector<long>& s : sols) {
        IntVector v(cols);
        for (int j = 0; j < cols; ++j) v[j] = s[static_cast<std::size_t>(j)];
        out.push_back(std::move(v));
      }
      return out;
    } catch (const precondition_error&) {
      // candidate outgrew the long guard; redo exactly
    }
  }
  Completion<Int> comp(rows, cols, h, Int(1) << 512, capped_var, Int(1));
  std::vector<std::vector<Int>> sols = comp.run();
  std::vector<IntVector> out;
  out.reserve(sols.size());
  for (std::vector<Int>& s : sols) out.push_back(IntVector(std::move(s)));
  return out;
}

}  // namespace

std::vector<IntVector> hilbert_basis(const DioSystem& sys) {
  return complete_homogeneous(sys.rows, sys.cols, sys.a);
}

SolutionBasis minimal_solutions(const DioSystem& sys) {
  // homogenize: A·x - c·x0 = 0 over N^{cols+1}
  const int k = sys.cols;
  std::vector<Int> h(static_cast<std::size_t>(sys.rows) * (k + 1));
  for (int i = 0; i < sys.rows; ++i) {
    for (int j = 0; j < k; ++j)
      h[static_cast<std::size_t>(i) * (k + 1) + j] = sys.at(i, j);
    h[static_cast<std::size_t>(i) * (k + 1) + k] = -sys.c[static_cast<std::size_t>(i)];
  }
  std::vector<IntVector> sols =
      complete_homogeneous(sys.rows, k + 1, h, /*capped_var=*/k);

  SolutionBasis basis;
  for (const IntVector& s : sols) {
    const Int& x0 = s[k];
    if (x0 > 1) continue;  // solves A·x = n·c for n >= 2, unusable for A·x = c
    IntVector proj(k);
    for (int j = 0; j < k; ++j) proj[j] = s[j];
    if (x0 == 1)
      basis.particulars.push_back(std::move(proj));
    else
      basis.periods.push_back(std::move(proj));
  }
  std::sort(basis.particulars.begin(), basis.particulars.end());
  std::sort(basis.periods.begin(), basis.periods.end());
  return basis;
}

Int ch16_bound(const DioSystem& sys) {
  Int maxcol = 0;
  for (const Int& x : sys.a) {
    Int v = int_abs(x);
    if (v > maxcol) v.swap(maxcol);
  }
  Int cnorm = 0;
  for (const Int& x : sys.c) {
    Int v = int_abs(x);
    if (v > cnorm) v.swap(cnorm);
  }
  Int base = Int(sys.cols + 1) * maxcol + cnorm + 1;
  return int_pow(base, static_cast<unsigned long>(sys.rows));
}

bool feasible(const DioSystem& sys) {
  SolutionBasis basis = minimal_solutions(sys);
  Int bound = ch16_bound(sys);
  for (const IntVector& p : basis.particulars)
    if (p.norm() > bound)
      throw internal_error("feasible: minimal solution above the ch16 bound");
  return !basis.particulars.empty();
}

}  // namespace avass
