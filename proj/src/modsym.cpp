#include "arakelov/modsym.hpp"

#include "arakelov/arith.hpp"
#include "arakelov/error.hpp"
#include "arakelov/fiber.hpp"
#include "arakelov/heights.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <exception>
#include <thread>

namespace arakelov::modsym {

namespace {

using linalg::QMatrix;
using linalg::QVector;

void add_into(QVector& acc, const QVector& v, const Rational& scale = 1) {
  for (std::size_t i = 0; i < acc.size(); ++i)
    if (v[i] != 0) acc[i] += scale * v[i];
}

// Merel's set: [[a, b], [c, d]] with ad - bc = l, a > b >= 0, d > c >= 0.
struct Mat {
  std::int64_t a, b, c, d;
};

std::vector<Mat> merel_set(std::int64_t ell) {
  std::vector<Mat> out;
  for (std::int64_t a = 1; a <= ell; ++a) {
    for (std::int64_t d = 1; a + d <= ell + 1; ++d) {
      const std::int64_t n = a * d - ell;
      if (n < 0) continue;
      if (n == 0) {
        for (std::int64_t c = 0; c < d; ++c) out.push_back({a, 0, c, d});
        for (std::int64_t b = 1; b < a; ++b) out.push_back({a, b, 0, d});
        continue;
      }
      for (std::int64_t b = 1; b < a; ++b) {
        if (n % b != 0) continue;
        const std::int64_t c = n / b;
        if (c < d) out.push_back({a, b, c, d});
      }
    }
  }
  return out;
}

QMatrix operator_from_columns(const std::vector<QVector>& cols) {
  const int n = static_cast<int>(cols.size());
  QMatrix m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  return m;
}

}  // namespace

std::size_t ManinSpace::index(std::int64_t c, std::int64_t d) const {
  const std::int64_t cm = mod(c, p_);
  const std::int64_t dm = mod(d, p_);
  if (cm == 0) {
    if (dm == 0) throw Error(Errc::InvalidArgument, "(0:0) is not a point of P^1(F_p)");
    return static_cast<std::size_t>(p_);
  }
  return static_cast<std::size_t>(mod(dm * inverse_mod(cm, p_), p_));
}

Symbol ManinSpace::symbol(std::size_t i) const {
  if (i > static_cast<std::size_t>(p_)) throw Error(Errc::InvalidArgument, "symbol index out of range");
  if (i == static_cast<std::size_t>(p_)) return {0, 1};
  return {1, static_cast<std::int64_t>(i)};
}

QVector ManinSpace::cuspidal_coordinates(const QVector& x) const {
  if (!linalg::is_zero(boundary(x))) throw Error(Errc::InvalidArgument, "vector is not cuspidal");
  QVector out;
  out.reserve(cuspidal_free_cols_.size());
  for (int c : cuspidal_free_cols_) out.push_back(x[static_cast<std::size_t>(c)]);
  return out;
}

QMatrix ManinSpace::restrict_to_cuspidal(const QMatrix& op) const {
  const int n = cuspidal_dimension();
  QMatrix out(n, n);
  for (int j = 0; j < n; ++j) {
    const QVector image = op.apply(cuspidal_basis_.column(j));
    if (!linalg::is_zero(boundary(image))) {
      throw Error(Errc::InternalInvariant, "operator does not preserve cuspidal symbols");
    }
    for (int i = 0; i < n; ++i) out(i, j) = image[static_cast<std::size_t>(cuspidal_free_cols_[static_cast<std::size_t>(i)])];
  }
  return out;
}

QVector ManinSpace::zero_to(std::int64_t a, std::int64_t b) const {
  if (b == 0) throw Error(Errc::InvalidArgument, "zero_to needs a finite cusp");
  if (b < 0) {
    a = -a;
    b = -b;
  }
  QVector out(static_cast<std::size_t>(dimension()));
  if (a == 0) return out;
  // Convergents p_j/q_j of a/b, starting from q_{-2} = 1, q_{-1} = 0.
  std::int64_t q_prev2 = 1, q_prev1 = 0;
  add_into(out, class_of(0, 1));  // j = -1: {0, inf}
  std::int64_t num = a, den = b;
  int j = 0;
  while (den != 0) {
    std::int64_t quotient = num / den;
    std::int64_t rem = num % den;
    if (rem < 0) {
      quotient -= 1;
      rem += den;
    }
    const std::int64_t q = quotient * q_prev1 + q_prev2;
    const std::int64_t sign = (j % 2 == 0) ? -1 : 1;  // (-1)^(j-1)
    add_into(out, class_of(sign * q, q_prev1));
    q_prev2 = q_prev1;
    q_prev1 = q;
    num = den;
    den = rem;
    ++j;
  }
  return out;
}

ManinSpace build_manin_space(std::int64_t p) {
  if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) {
    throw Error(Errc::NonPrime, std::to_string(p) + " is not prime");
  }
  if (p <= 3) throw Error(Errc::NonPrime, "modular symbols need a prime p > 3");

  ManinSpace s;
  s.p_ = p;
  s.genus_ = fiber::genus_x0(p);
  const int n = static_cast<int>(p + 1);

  linalg::FractionFreeReducer reducer(n, n);
  for (int i = 0; i < n; ++i) {
    const Symbol x = s.symbol(static_cast<std::size_t>(i));
    const int sig = static_cast<int>(s.index(x.d, -x.c));
    if (i <= sig) reducer.add_row({{i, Integer(1)}, {sig, Integer(1)}});
    const int t1 = static_cast<int>(s.index(x.d, -x.c - x.d));
    const int t2 = static_cast<int>(s.index(-x.c - x.d, x.c));
    if (i <= t1 && i <= t2) reducer.add_row({{i, Integer(1)}, {t1, Integer(1)}, {t2, Integer(1)}});
  }
  reducer.reduce();

  const std::vector<int> free = reducer.free_columns();
  std::vector<int> position(static_cast<std::size_t>(n), -1);
  for (std::size_t k = 0; k < free.size(); ++k) {
    position[static_cast<std::size_t>(free[k])] = static_cast<int>(k);
    s.free_symbols_.push_back(static_cast<std::size_t>(free[k]));
  }
  const std::size_t dim = free.size();
  s.classes_.assign(static_cast<std::size_t>(n), QVector(dim));
  for (int i = 0; i < n; ++i) {
    QVector& cls = s.classes_[static_cast<std::size_t>(i)];
    if (position[static_cast<std::size_t>(i)] >= 0) {
      cls[static_cast<std::size_t>(position[static_cast<std::size_t>(i)])] = 1;
      continue;
    }
    const linalg::SparseRow* row = reducer.pivot_row(i);
    const Integer pivot = linalg::row_value(*row, i);
    for (const auto& t : *row) {
      if (t.col == i) continue;
      cls[static_cast<std::size_t>(position[static_cast<std::size_t>(t.col)])] = Rational(-t.value, pivot);
      cls[static_cast<std::size_t>(position[static_cast<std::size_t>(t.col)])].canonicalize();
    }
  }

  // delta(c:d) = [b/d] - [a/c]; a/c is equivalent to inf iff p | c.
  s.boundary_ = QMatrix(2, static_cast<int>(dim));
  for (std::size_t k = 0; k < dim; ++k) {
    const Symbol x = s.symbol(s.free_symbols_[k]);
    const int j = static_cast<int>(k);
    s.boundary_(x.d % p == 0 ? 1 : 0, j) += 1;
    s.boundary_(x.c % p == 0 ? 1 : 0, j) -= 1;
  }
  s.cuspidal_basis_ = linalg::kernel_basis(s.boundary_);
  const linalg::Rref r = linalg::rref(s.boundary_);
  for (int c = 0; c < static_cast<int>(dim); ++c) {
    if (std::find(r.pivots.begin(), r.pivots.end(), c) == r.pivots.end()) s.cuspidal_free_cols_.push_back(c);
  }

  if (static_cast<std::int64_t>(dim) != 2 * s.genus_ + 1 || s.cuspidal_dimension() != 2 * s.genus_) {
    throw Error(Errc::InternalInvariant, "modular symbol dimensions disagree with the genus");
  }
  return s;
}

OperatorMatrix hecke_matrix(const ManinSpace& space, std::int64_t ell) {
  if (ell < 2 || !is_prime(static_cast<std::uint64_t>(ell)) || ell == space.p()) {
    throw Error(Errc::BadPrime, "T_l needs a prime l != p, got " + std::to_string(ell));
  }
  const std::vector<Mat> merel = merel_set(ell);
  std::vector<QVector> cols;
  for (std::size_t idx : space.free_symbols()) {
    const Symbol x = space.symbol(idx);
    QVector col(static_cast<std::size_t>(space.dimension()));
    for (const Mat& m : merel) add_into(col, space.class_of(x.c * m.a + x.d * m.c, x.c * m.b + x.d * m.d));
    cols.push_back(std::move(col));
  }
  OperatorMatrix op;
  op.label = "T_" + std::to_string(ell);
  op.full = operator_from_columns(cols);
  op.cusp = space.restrict_to_cuspidal(op.full);
  return op;
}

OperatorMatrix star_involution(const ManinSpace& space) {
  std::vector<QVector> cols;
  for (std::size_t idx : space.free_symbols()) {
    const Symbol x = space.symbol(idx);
    cols.push_back(space.class_of(-x.c, x.d));
  }
  OperatorMatrix op;
  op.label = "star";
  op.full = operator_from_columns(cols);
  op.cusp = space.restrict_to_cuspidal(op.full);
  return op;
}

AtkinLehner atkin_lehner(const ManinSpace& space) {
  // W = [[0, -1], [p, 0]]: W{0, inf} = {inf, 0}; (1:t) = {-1/t, 0} goes to
  // {t/p, inf} = {0, inf} - {0, t/p}.
  const QVector winding = space.class_of(0, 1);
  std::vector<QVector> cols;
  for (std::size_t idx : space.free_symbols()) {
    const Symbol x = space.symbol(idx);
    QVector col = winding;
    if (x.c == 0) {
      for (auto& v : col) v = -v;
    } else {
      add_into(col, space.zero_to(x.d, space.p()), -1);
    }
    cols.push_back(std::move(col));
  }
  AtkinLehner al;
  al.w.label = "w_p";
  al.w.full = operator_from_columns(cols);
  al.w.cusp = space.restrict_to_cuspidal(al.w.full);
  const int n = space.cuspidal_dimension();
  const QMatrix id = QMatrix::identity(n);
  const int plus = n - linalg::rank(al.w.cusp - id);
  const int minus = n - linalg::rank(al.w.cusp + id);
  if (plus % 2 != 0 || minus % 2 != 0 || plus + minus != n) {
    throw Error(Errc::InternalInvariant, "Atkin-Lehner eigenspaces have unexpected dimensions");
  }
  al.dim_plus = plus / 2;
  al.dim_minus = minus / 2;
  return al;
}

QVector winding_cuspidal_projection(const ManinSpace& space) {
  const QVector e = space.class_of(0, 1);
  const OperatorMatrix t2 = hecke_matrix(space, 2);
  const QMatrix eis = linalg::kernel_basis(t2.full - QMatrix::identity(space.dimension()).scaled(3));
  if (eis.cols() != 1) throw Error(Errc::InternalInvariant, "Eisenstein eigenspace of T_2 is not a line");
  const QVector v = eis.column(0);
  const QVector dv = space.boundary(v);
  const QVector de = space.boundary(e);
  if (dv[0] == 0) throw Error(Errc::InternalInvariant, "Eisenstein vector has zero boundary");
  const Rational lambda = de[0] / dv[0];
  QVector out = e;
  add_into(out, v, -lambda);
  if (!linalg::is_zero(space.boundary(out))) {
    throw Error(Errc::InternalInvariant, "winding projection is not cuspidal");
  }
  return out;
}

std::int64_t sturm_bound(std::int64_t p) { return (p + 1 + 5) / 6; }

int winding_dimension(const ManinSpace& space, const std::vector<std::int64_t>& hecke_primes) {
  const std::int64_t bound = sturm_bound(space.p());
  for (std::int64_t ell : primes_between(2, bound)) {
    if (ell == space.p()) continue;
    if (std::find(hecke_primes.begin(), hecke_primes.end(), ell) == hecke_primes.end()) {
      throw Error(Errc::SturmNotReached,
                  "Hecke primes must cover every l <= " + std::to_string(bound) + "; missing " + std::to_string(ell));
    }
  }
  std::vector<std::int64_t> primes = hecke_primes;
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  std::vector<QMatrix> ops;
  for (std::int64_t ell : primes) ops.push_back(hecke_matrix(space, ell).full);

  linalg::RationalSpan span(space.dimension());
  std::deque<QVector> pending;
  const QVector start = winding_cuspidal_projection(space);
  if (span.add(start)) pending.push_back(start);
  while (!pending.empty()) {
    const QVector v = std::move(pending.front());
    pending.pop_front();
    for (const QMatrix& t : ops) {
      QVector image = t.apply(v);
      if (span.add(image)) pending.push_back(std::move(image));
    }
  }
  return span.dimension();
}

WindingReport winding_report(std::int64_t p) {
  const ManinSpace space = build_manin_space(p);
  const AtkinLehner al = atkin_lehner(space);
  std::vector<std::int64_t> primes;
  for (std::int64_t ell : primes_between(2, sturm_bound(p)))
    if (ell != p) primes.push_back(ell);

  WindingReport r;
  r.p = p;
  r.g = space.genus();
  r.dim_plus = al.dim_plus;
  r.dim_minus = al.dim_minus;
  r.dim_Je = winding_dimension(space, primes);
  r.ratio = r.g > 0 ? make_rational(r.dim_Je, r.g) : Rational(0);
  r.brumer_weak = r.dim_Je >= 1 && heights::brumer_gate(r.g, r.dim_Je).brumer_weak;
  return r;
}

std::vector<WindingReport> brumer_scan(std::int64_t p_min, std::int64_t p_max, int jobs) {
  if (p_min <= 17) throw Error(Errc::PTooSmall, "scan range must start above 17");
  if (p_max < p_min) throw Error(Errc::InvalidArgument, "empty scan range");
  if (jobs < 1) throw Error(Errc::InvalidArgument, "jobs must be >= 1");
  const std::vector<std::int64_t> primes = primes_between(p_min, p_max);
  std::vector<WindingReport> out(primes.size());
  std::vector<std::exception_ptr> errors(primes.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < primes.size(); i = next++) {
      try {
        out[i] = winding_report(primes[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(primes.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace arakelov::modsym
