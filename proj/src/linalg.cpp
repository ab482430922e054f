#include "arakelov/linalg.hpp"

#include "arakelov/error.hpp"

#include <algorithm>
#include <tuple>

namespace arakelov::linalg {

namespace {

const SparseTerm* find_term(const SparseRow& row, int col) {
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const SparseTerm& t, int c) { return t.col < c; });
  if (it != row.end() && it->col == col) return &*it;
  return nullptr;
}

void remove_content(SparseRow& row) {
  if (row.empty()) return;
  Integer g = 0;
  for (const auto& t : row) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.value.get_mpz_t());
    if (g == 1) return;
  }
  if (g > 1) {
    for (auto& t : row) mpz_divexact(t.value.get_mpz_t(), t.value.get_mpz_t(), g.get_mpz_t());
  }
}

// alpha * lhs - beta * rhs
SparseRow combine(const SparseRow& lhs, const Integer& alpha, const SparseRow& rhs,
                  const Integer& beta) {
  SparseRow out;
  out.reserve(lhs.size() + rhs.size());
  std::size_t i = 0, j = 0;
  while (i < lhs.size() || j < rhs.size()) {
    if (j == rhs.size() || (i < lhs.size() && lhs[i].col < rhs[j].col)) {
      out.push_back({lhs[i].col, alpha * lhs[i].value});
      ++i;
    } else if (i == lhs.size() || rhs[j].col < lhs[i].col) {
      out.push_back({rhs[j].col, -beta * rhs[j].value});
      ++j;
    } else {
      Integer v = alpha * lhs[i].value - beta * rhs[j].value;
      if (v != 0) out.push_back({lhs[i].col, std::move(v)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Integer row_value(const SparseRow& row, int col) {
  const SparseTerm* t = find_term(row, col);
  return t ? t->value : Integer(0);
}

FractionFreeReducer::FractionFreeReducer(int unknowns, int total_columns)
    : unknowns_(unknowns), total_(total_columns) {
  if (unknowns < 0 || total_columns < unknowns) {
    throw Error(Errc::InvalidArgument, "bad reducer shape");
  }
}

void FractionFreeReducer::add_row(SparseRow row) {
  std::sort(row.begin(), row.end(), [](const SparseTerm& a, const SparseTerm& b) { return a.col < b.col; });
  SparseRow clean;
  for (auto& t : row) {
    if (t.col < 0 || t.col >= total_) throw Error(Errc::InvalidArgument, "column out of range");
    if (!clean.empty() && clean.back().col == t.col) {
      clean.back().value += t.value;
      if (clean.back().value == 0) clean.pop_back();
    } else if (t.value != 0) {
      clean.push_back(std::move(t));
    }
  }
  remove_content(clean);
  rows_.push_back(std::move(clean));
  reduced_ = false;
}

void FractionFreeReducer::eliminate(std::size_t target, std::size_t pivot, int col) {
  const Integer a = row_value(rows_[pivot], col);
  const Integer b = row_value(rows_[target], col);
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  SparseRow next = combine(rows_[target], Integer(a / g), rows_[pivot], Integer(b / g));
  remove_content(next);
  rows_[target] = std::move(next);
}

void FractionFreeReducer::reduce() {
  pivot_cols_.clear();
  pivot_row_of_col_.assign(static_cast<std::size_t>(unknowns_), -1);
  std::vector<char> used(rows_.size(), 0);

  // rows_by_col[c] lists rows that may hold column c; entries go stale when a
  // row loses the column, so membership is re-checked on use.
  std::vector<std::vector<std::size_t>> rows_by_col(static_cast<std::size_t>(unknowns_));
  auto index_row = [&](std::size_t r) {
    for (const auto& t : rows_[r]) {
      if (t.col < unknowns_) rows_by_col[static_cast<std::size_t>(t.col)].push_back(r);
    }
  };
  for (std::size_t r = 0; r < rows_.size(); ++r) index_row(r);

  for (int col = 0; col < unknowns_; ++col) {
    auto& bucket = rows_by_col[static_cast<std::size_t>(col)];
    std::sort(bucket.begin(), bucket.end());
    bucket.erase(std::unique(bucket.begin(), bucket.end()), bucket.end());

    std::ptrdiff_t best = -1;
    for (std::size_t r : bucket) {
      if (used[r]) continue;
      const SparseTerm* t = find_term(rows_[r], col);
      if (!t) continue;
      if (best < 0) {
        best = static_cast<std::ptrdiff_t>(r);
        continue;
      }
      const SparseRow& b = rows_[static_cast<std::size_t>(best)];
      const int cmp = mpz_cmpabs(t->value.get_mpz_t(), find_term(b, col)->value.get_mpz_t());
      if (cmp < 0 || (cmp == 0 && rows_[r].size() < b.size())) best = static_cast<std::ptrdiff_t>(r);
    }
    if (best < 0) continue;

    const auto pivot = static_cast<std::size_t>(best);
    used[pivot] = 1;
    if (find_term(rows_[pivot], col)->value < 0) {
      for (auto& t : rows_[pivot]) t.value = -t.value;
    }
    pivot_cols_.push_back(col);
    pivot_row_of_col_[static_cast<std::size_t>(col)] = static_cast<int>(pivot);

    const std::vector<std::size_t> holders = bucket;
    for (std::size_t r : holders) {
      if (r == pivot || !find_term(rows_[r], col)) continue;
      eliminate(r, pivot, col);
      index_row(r);
    }
  }
  reduced_ = true;
}

std::vector<int> FractionFreeReducer::free_columns() const {
  std::vector<int> out;
  for (int c = 0; c < unknowns_; ++c) {
    if (pivot_row_of_col_.empty() || pivot_row_of_col_[static_cast<std::size_t>(c)] < 0) out.push_back(c);
  }
  return out;
}

const SparseRow* FractionFreeReducer::pivot_row(int col) const {
  if (!reduced_) throw Error(Errc::InternalInvariant, "reducer queried before reduce()");
  if (col < 0 || col >= unknowns_) return nullptr;
  const int r = pivot_row_of_col_[static_cast<std::size_t>(col)];
  return r < 0 ? nullptr : &rows_[static_cast<std::size_t>(r)];
}

bool FractionFreeReducer::consistent() const {
  if (!reduced_) throw Error(Errc::InternalInvariant, "reducer queried before reduce()");
  for (const auto& row : rows_) {
    if (!row.empty() && row.front().col >= unknowns_) return false;
  }
  return true;
}

QVector FractionFreeReducer::unique_solution(int rhs_col) const {
  if (!reduced_) throw Error(Errc::InternalInvariant, "reducer queried before reduce()");
  if (rank() != unknowns_) throw Error(Errc::InternalInvariant, "system is not uniquely solvable");
  if (!consistent()) throw Error(Errc::InternalInvariant, "inconsistent linear system");
  QVector x(static_cast<std::size_t>(unknowns_));
  for (int c = 0; c < unknowns_; ++c) {
    const SparseRow& row = *pivot_row(c);
    Rational v(row_value(row, rhs_col), row_value(row, c));
    v.canonicalize();
    x[static_cast<std::size_t>(c)] = v;
  }
  return x;
}

QMatrix::QMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}

QMatrix QMatrix::identity(int n) {
  QMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::operator*(const QMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw Error(Errc::InvalidArgument, "matrix shape mismatch");
  QMatrix out(rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < rhs.cols_; ++j) {
        if (rhs(k, j) != 0) out(i, j) += a * rhs(k, j);
      }
    }
  }
  return out;
}

QMatrix QMatrix::operator+(const QMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw Error(Errc::InvalidArgument, "matrix shape mismatch");
  QMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

QMatrix QMatrix::operator-(const QMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw Error(Errc::InvalidArgument, "matrix shape mismatch");
  QMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
  return out;
}

QMatrix QMatrix::scaled(const Rational& c) const {
  QMatrix out = *this;
  for (auto& v : out.data_) v *= c;
  return out;
}

QVector QMatrix::apply(const QVector& v) const {
  if (static_cast<int>(v.size()) != cols_) throw Error(Errc::InvalidArgument, "vector length mismatch");
  QVector out(static_cast<std::size_t>(rows_));
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      if (v[static_cast<std::size_t>(j)] != 0 && (*this)(i, j) != 0) {
        out[static_cast<std::size_t>(i)] += (*this)(i, j) * v[static_cast<std::size_t>(j)];
      }
    }
  }
  return out;
}

QMatrix QMatrix::transpose() const {
  QMatrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

QVector QMatrix::column(int j) const {
  QVector out(static_cast<std::size_t>(rows_));
  for (int i = 0; i < rows_; ++i) out[static_cast<std::size_t>(i)] = (*this)(i, j);
  return out;
}

Rational QMatrix::trace() const {
  Rational t = 0;
  for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

bool QMatrix::operator==(const QMatrix& rhs) const {
  return rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_;
}

Rref rref(QMatrix m) {
  Rref out;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int piv = -1;
    for (int i = row; i < m.rows(); ++i) {
      if (m(i, col) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != row) {
      for (int j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
    }
    const Rational inv = 1 / m(row, col);
    for (int j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      const Rational f = m(i, col);
      for (int j = col; j < m.cols(); ++j) {
        if (m(row, j) != 0) m(i, j) -= f * m(row, j);
      }
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.reduced = std::move(m);
  return out;
}

int rank(const QMatrix& m) { return static_cast<int>(rref(m).pivots.size()); }

QMatrix kernel_basis(const QMatrix& m) {
  const Rref r = rref(m);
  std::vector<char> is_pivot(static_cast<std::size_t>(m.cols()), 0);
  for (int c : r.pivots) is_pivot[static_cast<std::size_t>(c)] = 1;
  std::vector<int> free;
  for (int c = 0; c < m.cols(); ++c)
    if (!is_pivot[static_cast<std::size_t>(c)]) free.push_back(c);

  QMatrix k(m.cols(), static_cast<int>(free.size()));
  for (std::size_t idx = 0; idx < free.size(); ++idx) {
    const int f = free[idx];
    const int col = static_cast<int>(idx);
    k(f, col) = 1;
    for (std::size_t i = 0; i < r.pivots.size(); ++i) {
      k(r.pivots[i], col) = -r.reduced(static_cast<int>(i), f);
    }
  }
  return k;
}

Integer determinant(std::vector<std::vector<Integer>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  for (const auto& row : m) {
    if (row.size() != n) throw Error(Errc::InvalidArgument, "determinant of non-square matrix");
  }
  int sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_with = k + 1;
      while (swap_with < n && m[swap_with][k] == 0) ++swap_with;
      if (swap_with == n) return 0;
      std::swap(m[k], m[swap_with]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m[i][j] = std::move(v);
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

bool is_zero(const QVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

QVector RationalSpan::reduce(QVector v) const {
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const auto piv = static_cast<std::size_t>(pivots_[i]);
    if (v[piv] == 0) continue;
    const Rational f = v[piv];
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (basis_[i][j] != 0) v[j] -= f * basis_[i][j];
    }
  }
  return v;
}

bool RationalSpan::add(QVector v) {
  if (static_cast<int>(v.size()) != ambient_) throw Error(Errc::InvalidArgument, "vector length mismatch");
  QVector w = reduce(std::move(v));
  auto it = std::find_if(w.begin(), w.end(), [](const Rational& x) { return x != 0; });
  if (it == w.end()) return false;
  const auto piv = static_cast<std::size_t>(it - w.begin());
  const Rational inv = 1 / w[piv];
  for (auto& x : w) x *= inv;
  for (auto& b : basis_) {
    if (b[piv] == 0) continue;
    const Rational f = b[piv];
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (w[j] != 0) b[j] -= f * w[j];
    }
  }
  basis_.push_back(std::move(w));
  pivots_.push_back(static_cast<int>(piv));
  return true;
}

bool RationalSpan::contains(QVector v) const {
  if (static_cast<int>(v.size()) != ambient_) throw Error(Errc::InvalidArgument, "vector length mismatch");
  return is_zero(reduce(std::move(v)));
}

}  // namespace arakelov::linalg
