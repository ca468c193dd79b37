// matrix.hpp -- exact integer vectors and square matrices
#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "avass/errors.hpp"
#include "avass/ints.hpp"

namespace avass {

struct IntVector {
  std::vector<Int> e;

  IntVector() = default;
  explicit IntVector(int dim) : e(static_cast<std::size_t>(dim)) {}
  IntVector(std::initializer_list<Int> init) : e(init) {}
  explicit IntVector(std::vector<Int> init) : e(std::move(init)) {}

  static IntVector zero(int dim) { return IntVector(dim); }
  static IntVector unit(int dim, int i) {
    IntVector v(dim);
    v.e[static_cast<std::size_t>(i)] = 1;
    return v;
  }

  int dim() const { return static_cast<int>(e.size()); }
  const Int& operator[](int i) const { return e[static_cast<std::size_t>(i)]; }
  Int& operator[](int i) { return e[static_cast<std::size_t>(i)]; }

  /// Max-norm: max |e_i|, 0 for the empty vector.
  Int norm() const {
    Int n = 0;
    for (const Int& x : e) {
      Int a = int_abs(x);
      if (a > n) n = a;
    }
    return n;
  }

  bool is_zero() const {
    for (const Int& x : e)
      if (x != 0) return false;
    return true;
  }

  IntVector operator+(const IntVector& o) const {
    if (dim() != o.dim()) throw dimension_error("vector addition: dimension mismatch");
    IntVector r(dim());
    for (int i = 0; i < dim(); ++i) r[i] = (*this)[i] + o[i];
    return r;
  }

  IntVector operator-(const IntVector& o) const {
    if (dim() != o.dim()) throw dimension_error("vector subtraction: dimension mismatch");
    IntVector r(dim());
    for (int i = 0; i < dim(); ++i) r[i] = (*this)[i] - o[i];
    return r;
  }

  IntVector operator-() const {
    IntVector r(dim());
    for (int i = 0; i < dim(); ++i) r[i] = -(*this)[i];
    return r;
  }

  bool operator==(const IntVector& o) const { return e == o.e; }
  bool operator!=(const IntVector& o) const { return e != o.e; }
  bool operator<(const IntVector& o) const { return e < o.e; }

  std::string str() const {
    std::string s = "[";
    for (int i = 0; i < dim(); ++i) {
      if (i) s += " ";
      s += to_string(e[static_cast<std::size_t>(i)]);
    }
    return s + "]";
  }
};

struct IntMatrix {
  int n = 0;               // square dimension
  std::vector<Int> a;      // row-major, n*n entries

  IntMatrix() = default;
  explicit IntMatrix(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim) {}

  static IntMatrix identity(int dim) {
    IntMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1;
    return m;
  }

  static IntMatrix zero(int dim) { return IntMatrix(dim); }

  /// All entries equal to one (the 1_d matrix).
  static IntMatrix ones(int dim) {
    IntMatrix m(dim);
    for (Int& x : m.a) x = 1;
    return m;
  }

  static IntMatrix from_rows(std::initializer_list<std::initializer_list<Int>> rows) {
    IntMatrix m(static_cast<int>(rows.size()));
    int i = 0;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != m.n)
        throw dimension_error("matrix literal: ragged rows");
      int j = 0;
      for (const Int& x : row) m.at(i, j++) = x;
      ++i;
    }
    return m;
  }

  int dim() const { return n; }
  const Int& at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
  Int& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }

  /// Max-norm: max |a_ij|.
  Int norm() const {
    Int m = 0;
    for (const Int& x : a) {
      Int v = int_abs(x);
      if (v > m) m = v;
    }
    return m;
  }

  bool is_identity() const {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (at(i, j) != (i == j ? 1 : 0)) return false;
    return true;
  }

  bool is_nonnegative() const {
    for (const Int& x : a)
      if (x < 0) return false;
    return true;
  }

  IntMatrix operator*(const IntMatrix& o) const {
    if (n != o.n) throw dimension_error("matrix product: dimension mismatch");
    IntMatrix r(n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const Int& x = at(i, k);
        if (x == 0) continue;
        for (int j = 0; j < n; ++j) r.at(i, j) += x * o.at(k, j);
      }
    return r;
  }

  IntVector operator*(const IntVector& v) const {
    if (n != v.dim()) throw dimension_error("matrix-vector product: dimension mismatch");
    IntVector r(n);
    for (int i = 0; i < n; ++i) {
      Int s = 0;
      for (int j = 0; j < n; ++j)
        if (at(i, j) != 0) s += at(i, j) * v[j];
      r[i] = s;
    }
    return r;
  }

  IntVector column(int j) const {
    IntVector c(n);
    for (int i = 0; i < n; ++i) c[i] = at(i, j);
    return c;
  }

  bool operator==(const IntMatrix& o) const { return n == o.n && a == o.a; }
  bool operator!=(const IntMatrix& o) const { return !(*this == o); }
  bool operator<(const IntMatrix& o) const { return n != o.n ? n < o.n : a < o.a; }

  std::string str() const {
    std::string s = "[";
    for (int i = 0; i < n; ++i) {
      if (i) s += "; ";
      for (int j = 0; j < n; ++j) {
        if (j) s += " ";
        s += to_string(at(i, j));
      }
    }
    return s + "]";
  }
};

}  // namespace avass
