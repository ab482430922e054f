#pragma once

#include "arakelov/rational.hpp"

#include <cstddef>
#include <vector>

namespace arakelov::linalg {

using QVector = std::vector<Rational>;

struct SparseTerm {
  int col;
  Integer value;
};

// Sorted by column, no explicit zeros.
using SparseRow = std::vector<SparseTerm>;

// Fraction-free sparse Gauss-Jordan elimination over Z.
//
// Rows stay integral: eliminating column c from row r against the pivot row
// P uses r <- (a/g) r - (b/g) P with a, b the two entries at c and
// g = gcd(a, b), after which r is divided by its content. Columns
// [0, unknowns) are eliminated; the remaining columns are right-hand sides
// and never carry a pivot. Among candidate rows the pivot is the entry of
// least magnitude, then the shortest row, then the lowest row index, so the
// result is deterministic.
class FractionFreeReducer {
 public:
  FractionFreeReducer(int unknowns, int total_columns);

  void add_row(SparseRow row);
  void reduce();

  int unknowns() const { return unknowns_; }
  int rank() const { return static_cast<int>(pivot_cols_.size()); }
  const std::vector<int>& pivot_columns() const { return pivot_cols_; }
  std::vector<int> free_columns() const;

  // The reduced row whose pivot sits at `col`, or nullptr if `col` is free.
  const SparseRow* pivot_row(int col) const;

  // False if some row reduced to 0 = (nonzero right-hand side).
  bool consistent() const;

  // Requires rank() == unknowns(); returns x with the `rhs_col` column as
  // right-hand side.
  QVector unique_solution(int rhs_col) const;

 private:
  void eliminate(std::size_t target, std::size_t pivot, int col);

  int unknowns_;
  int total_;
  bool reduced_ = false;
  std::vector<SparseRow> rows_;
  std::vector<int> pivot_cols_;
  std::vector<int> pivot_row_of_col_;
};

Integer row_value(const SparseRow& row, int col);

// Dense rational matrix, row-major.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(int rows, int cols);
  static QMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rational& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Rational& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }

  QMatrix operator*(const QMatrix& rhs) const;
  QMatrix operator+(const QMatrix& rhs) const;
  QMatrix operator-(const QMatrix& rhs) const;
  QMatrix scaled(const Rational& c) const;
  QVector apply(const QVector& v) const;
  QMatrix transpose() const;
  QVector column(int j) const;
  Rational trace() const;

  bool operator==(const QMatrix& rhs) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> data_;
};

struct Rref {
  QMatrix reduced;
  std::vector<int> pivots;
};

Rref rref(QMatrix m);
int rank(const QMatrix& m);

// Basis of the right kernel, one basis vector per column. Each vector has a
// 1 at its own free column and 0 at every other free column.
QMatrix kernel_basis(const QMatrix& m);

// Determinant of a square integer matrix (Bareiss).
Integer determinant(std::vector<std::vector<Integer>> m);

// Incrementally maintained span of rational vectors (kept in reduced echelon
// form).
class RationalSpan {
 public:
  explicit RationalSpan(int ambient) : ambient_(ambient) {}
  // Adds v; returns true if the dimension grew.
  bool add(QVector v);
  bool contains(QVector v) const;
  int dimension() const { return static_cast<int>(basis_.size()); }
  const std::vector<QVector>& basis() const { return basis_; }

 private:
  QVector reduce(QVector v) const;

  int ambient_;
  std::vector<QVector> basis_;
  std::vector<int> pivots_;
};

bool is_zero(const QVector& v);

}  // namespace arakelov::linalg
