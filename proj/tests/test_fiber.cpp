#include "arakelov/arith.hpp"
#include "arakelov/error.hpp"
#include "arakelov/fiber.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace arakelov;
using namespace arakelov::fiber;
using linalg::QVector;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::InternalInvariant;
}

// Genus of X_0(p) from the Riemann-Hurwitz count of elliptic points:
// g = 1 + (p + 1)/12 - nu2/4 - nu3/3 - 1.
Rational hurwitz_genus(std::int64_t p) {
  const int nu2 = p % 4 == 1 ? 2 : 0;
  const int nu3 = p % 3 == 1 ? 2 : 0;
  return make_rational(p + 1, 12) - make_rational(nu2, 4) - make_rational(nu3, 3);
}

// Dual graph rebuilt from scratch: vertex 0 = C_inf, last = C_0, chains in
// between. Widths are taken from the fiber under test, everything else
// (adjacency, self-intersections) is recomputed here.
std::vector<std::vector<Rational>> oracle_matrix(const SpecialFiber& f) {
  std::vector<int> lengths;
  for (const auto& b : f.branches()) lengths.push_back(b.width * f.e() - 1);
  std::size_t n = 2;
  for (int l : lengths) n += static_cast<std::size_t>(l);
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
  std::size_t next = 1;
  for (int l : lengths) {
    std::size_t prev = 0;
    for (int k = 0; k < l; ++k) {
      const std::size_t v = next++;
      m[prev][v] += 1;
      m[v][prev] += 1;
      prev = v;
    }
    m[prev][n - 1] += 1;
    m[n - 1][prev] += 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    Rational off = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) off += m[i][j];
    m[i][i] = -off;  // each row of a fiber sums to zero
  }
  return m;
}

// Dense Gauss-Jordan on [M; e_0^T | rhs; 0].
QVector oracle_solve(std::vector<std::vector<Rational>> m, QVector rhs) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) m[i].push_back(rhs[i]);
  std::vector<Rational> norm(n + 1);
  norm[0] = 1;
  m.push_back(norm);
  std::size_t row = 0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = row;
    while (piv < m.size() && m[piv][col] == 0) ++piv;
    REQUIRE(piv < m.size());
    std::swap(m[row], m[piv]);
    const Rational inv = 1 / m[row][col];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      const Rational f = m[r][col];
      for (std::size_t c = col; c <= n; ++c) m[r][c] -= f * m[row][c];
    }
    ++row;
  }
  for (std::size_t r = n; r < m.size(); ++r) REQUIRE(m[r][n] == 0);
  QVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = m[i][n];
  return x;
}

QVector oracle_phi(const SpecialFiber& f, const ComponentId& target) {
  QVector rhs(f.basis_size());
  rhs[f.index_of(target)] += 1;
  rhs[0] -= 1;
  return oracle_solve(oracle_matrix(f), rhs);
}

std::vector<ComponentId> all_components(const SpecialFiber& f) {
  std::vector<ComponentId> out;
  for (std::size_t i = 0; i < f.basis_size(); ++i) out.push_back(f.component_at(i));
  return out;
}

int branch_of_width(const SpecialFiber& f, int w) {
  for (const auto& b : f.branches())
    if (b.width == w) return b.index;
  return 0;
}

}  // namespace

TEST_CASE("supersingular counts follow the mass formula") {
  for (std::int64_t p : primes_between(5, 2000)) {
    const auto d = supersingular_data(p);
    CHECK(Rational(to_integer(d.genus)) == hurwitz_genus(p));
    CHECK(d.width_two == (p % 4 == 3 ? 1 : 0));
    CHECK(d.width_three == (p % 3 == 2 ? 1 : 0));
  }
}

TEST_CASE("fiber examples") {
  SUBCASE("p = 23") {
    const auto f = build_special_fiber({23, 1, 1});
    CHECK(f.s() == 3);
    CHECK(f.genus() == 2);
    std::vector<int> widths;
    for (const auto& b : f.branches()) widths.push_back(b.width);
    CHECK(widths == std::vector<int>{1, 2, 3});
    CHECK(f.eichler_mass() == make_rational(11, 6));
  }
  SUBCASE("p = 37") {
    const auto f = build_special_fiber({37, 1, 1});
    CHECK(f.s() == 3);
    CHECK(f.genus() == 2);
    for (const auto& b : f.branches()) CHECK(b.width == 1);
  }
  SUBCASE("p = 19, e = 2") {
    const auto f = build_special_fiber({19, 2, 1});
    CHECK(f.s() == 2);
    CHECK(f.genus() == 1);
    CHECK(f.branch(1).width == 1);
    CHECK(f.branch(2).width == 2);
    CHECK(f.branch(1).interior_length == 1);
    CHECK(f.branch(2).interior_length == 3);
  }
}

TEST_CASE("fiber construction errors") {
  CHECK(code_of([] { build_special_fiber({21, 1, 1}); }) == Errc::NonPrime);
  CHECK(code_of([] { build_special_fiber({17, 1, 1}); }) == Errc::PTooSmall);
  CHECK(code_of([] { build_special_fiber({13, 1, 1}); }) == Errc::PTooSmall);
  CHECK(code_of([] { build_special_fiber({23, 0, 1}); }) == Errc::InvalidArgument);
  CHECK(code_of([] { build_special_fiber({23, 1, 0}); }) == Errc::InvalidArgument);
}

TEST_CASE("component indexing") {
  const auto f = build_special_fiber({23, 2, 1});
  for (std::size_t i = 0; i < f.basis_size(); ++i) CHECK(f.index_of(f.component_at(i)) == i);
  CHECK(f.index_of(ComponentId::interior(2, 0)) == 0);
  CHECK(f.index_of(ComponentId::interior(3, 6)) == f.basis_size() - 1);
  CHECK(f.resolve(1, 2) == ComponentId::zero());
  CHECK(code_of([&] { f.index_of(ComponentId::interior(4, 1)); }) == Errc::ComponentOutOfRange);
  CHECK(code_of([&] { f.index_of(ComponentId::interior(1, 3)); }) == Errc::ComponentOutOfRange);
  CHECK(code_of([&] { f.index_of(ComponentId::interior(0, 1)); }) == Errc::ComponentOutOfRange);
  CHECK(ComponentId::interior(2, 1).label() == "C_{2,1}");
}

TEST_CASE("intersection matrix") {
  SUBCASE("chain block determinant") {
    const auto b = chain_block(2);
    CHECK(b == std::vector<std::vector<Integer>>{{-2, 1}, {1, -2}});
    CHECK(linalg::determinant(b) == 3);
  }
  SUBCASE("degenerate branch at e = 1") {
    const auto f = build_special_fiber({23, 1, 1});
    const auto m = intersection_matrix(f);
    CHECK(m.at(0, m.size() - 1) == 1);
    CHECK(m.at(m.size() - 1, 0) == 1);
    CHECK(m.at(0, 0) == -3);
  }
  for (std::int64_t p : {19, 23, 37, 59, 101}) {
    for (int e : {1, 2, 3, 5}) {
      const auto f = build_special_fiber({p, e, 1});
      const auto m = intersection_matrix(f);
      const auto oracle = oracle_matrix(f);
      for (std::size_t i = 0; i < m.size(); ++i) {
        std::int64_t row_sum = 0;
        for (std::size_t j = 0; j < m.size(); ++j) {
          CHECK(m.at(i, j) == m.at(j, i));
          CHECK(Rational(to_integer(m.at(i, j))) == oracle[i][j]);
          row_sum += m.at(i, j);
        }
        CHECK(row_sum == 0);
      }
      CHECK(linalg::is_zero(m.apply(full_fiber(f).coefficients())));
    }
  }
}

TEST_CASE("vertical divisor examples at p = 23") {
  const auto f = build_special_fiber({23, 1, 1});
  const int w2 = branch_of_width(f, 2);
  const int w3 = branch_of_width(f, 3);

  SUBCASE("target C_0") {
    for (const auto& d : {closed_form_phi(f, ComponentId::zero()), solve_vertical_divisor(f, ComponentId::zero())}) {
      CHECK(d.coefficient(ComponentId::interior(w2, 1)) == make_rational(-3, 11));
      CHECK(d.coefficient(ComponentId::interior(w3, 1)) == make_rational(-2, 11));
      CHECK(d.coefficient(ComponentId::interior(w3, 2)) == make_rational(-4, 11));
      CHECK(d.coefficient(ComponentId::zero()) == make_rational(-6, 11));
      CHECK(d.coefficient(ComponentId::infinity()) == 0);
    }
  }
  SUBCASE("interior target on the width-2 branch") {
    const auto t = ComponentId::interior(w2, 1);
    for (const auto& d : {closed_form_phi(f, t), solve_vertical_divisor(f, t)}) {
      CHECK(d.coefficient(t) == make_rational(-7, 11));
      CHECK(d.coefficient(ComponentId::interior(w3, 1)) == make_rational(-1, 11));
      CHECK(d.coefficient(ComponentId::interior(w3, 2)) == make_rational(-2, 11));
      CHECK(d.coefficient(ComponentId::zero()) == make_rational(-3, 11));
    }
  }
  SUBCASE("target C_inf") {
    CHECK(closed_form_phi(f, ComponentId::infinity()).is_zero());
    CHECK(solve_vertical_divisor(f, ComponentId::infinity()).is_zero());
  }
}

TEST_CASE("closed form, elimination and dense oracle agree") {
  std::mt19937 rng(5);
  for (std::int64_t p : {19, 23, 29, 31, 37, 43, 47, 71, 83}) {
    for (int e : {1, 2, 3, 4, 6}) {
      const auto f = build_special_fiber({p, e, 1});
      const auto m = intersection_matrix(f);
      auto comps = all_components(f);
      std::shuffle(comps.begin(), comps.end(), rng);
      if (comps.size() > 8) comps.erase(comps.begin() + 8, comps.end());
      for (const auto& c : comps) {
        const auto closed = closed_form_phi(f, c);
        const auto solved = solve_vertical_divisor(f, c);
        CHECK(closed == solved);
        CHECK(closed.coefficients() == oracle_phi(f, c));
        CHECK(m.apply(closed.coefficients()) == intersection_target(f, c));
      }
    }
  }
}

TEST_CASE("aliases resolve before solving") {
  const auto f = build_special_fiber({23, 2, 1});
  CHECK(closed_form_phi(f, ComponentId::interior(1, 2)) == closed_form_phi(f, ComponentId::zero()));
  CHECK(solve_vertical_divisor(f, ComponentId::interior(3, 0)).is_zero());
}

TEST_CASE("coefficient bounds") {
  for (std::int64_t p : {19, 23, 37, 61, 103, 199}) {
    for (int e : {1, 2, 3}) {
      const auto f = build_special_fiber({p, e, 1});
      for (const auto& c : all_components(f)) {
        for (const auto& a : closed_form_phi(f, c).coefficients()) {
          CHECK(a <= 0);
          CHECK(a >= -3 * e);
        }
      }
      for (const auto& a : closed_form_phi(f, ComponentId::zero()).coefficients()) {
        CHECK(a >= make_rational(-12 * e, p - 1));
      }
      for (const auto& w : phi_omega(f).coefficients()) {
        CHECK(w <= 0);
        CHECK(w >= -e);
      }
    }
  }
}

TEST_CASE("omega") {
  const auto f23 = build_special_fiber({23, 1, 1});
  CHECK(phi_omega(f23).coefficient(ComponentId::interior(branch_of_width(f23, 3), 2)) == make_rational(-4, 11));
  CHECK(phi_omega(build_special_fiber({19, 1, 1})).is_zero());
  const auto f = build_special_fiber({101, 2, 1});
  for (const auto& b : f.branches()) {
    for (int m = 1; m < b.width * f.e(); ++m) {
      CHECK(phi_omega(f).coefficient(ComponentId::interior(b.index, m)) ==
            make_rational(to_integer(12 * (1 - f.genus()) * m), to_integer(100 * b.width)));
    }
  }
}

TEST_CASE("cuspidal divisor class") {
  const auto f23 = build_special_fiber({23, 1, 1});
  const auto c23 = cuspidal_divisor_class(f23);
  CHECK(c23.coefficient(ComponentId::interior(branch_of_width(f23, 3), 1)) == make_rational(1, 11));
  CHECK(c23.normalization() == Normalization::Unpinned);
  for (std::int64_t p : {19, 23, 37, 71, 131}) {
    for (int e : {1, 2, 3, 6}) {
      const auto f = build_special_fiber({p, e, 1});
      const auto c = cuspidal_divisor_class(f);
      CHECK(c.coefficient(ComponentId::infinity()) == make_rational(6 * e, p - 1));
      CHECK(c.coefficient(ComponentId::zero()) == make_rational(-6 * e, p - 1));
      CHECK(c == closed_form_phi(f, ComponentId::zero()) + full_fiber(f).scaled(make_rational(6 * e, p - 1)));
      CHECK(fricke_involution(f, c) == -c);
    }
  }
}

TEST_CASE("Fricke involution") {
  const auto f = build_special_fiber({37, 2, 1});
  const std::vector<int> swap12{2, 1, 3};
  const std::vector<int> cycle{2, 3, 1};
  std::mt19937 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    QVector v(f.basis_size());
    for (auto& x : v) x = make_rational(static_cast<int>(rng() % 21) - 10, 1 + static_cast<int>(rng() % 5));
    const VerticalDivisor d(f, v, Normalization::Unpinned);
    CHECK(fricke_involution(f, fricke_involution(f, d)) == d);
    // An involution only when the permutation itself is one.
    CHECK(fricke_involution(f, fricke_involution(f, d, swap12), swap12) == d);
  }
  CHECK(fricke_involution(f, full_fiber(f)) == full_fiber(f));
  const auto c = cuspidal_divisor_class(f);
  CHECK(fricke_involution(f, c, cycle) == -c);

  const auto f23 = build_special_fiber({23, 1, 1});
  const std::vector<int> bad_width{2, 1, 3};
  const std::vector<int> not_perm{1, 1, 3};
  const std::vector<int> short_perm{1, 2};
  CHECK(code_of([&] { fricke_involution(f23, full_fiber(f23), bad_width); }) == Errc::InvalidPermutation);
  CHECK(code_of([&] { fricke_involution(f23, full_fiber(f23), not_perm); }) == Errc::InvalidPermutation);
  CHECK(code_of([&] { fricke_involution(f23, full_fiber(f23), short_perm); }) == Errc::InvalidPermutation);
}

TEST_CASE("kernel of the intersection matrix is the full-fiber line") {
  for (std::int64_t p : {19, 23, 37, 73}) {
    for (int e : {1, 2, 4}) {
      const auto f = build_special_fiber({p, e, 1});
      const auto m = intersection_matrix(f);
      linalg::QMatrix q(static_cast<int>(m.size()), static_cast<int>(m.size()));
      for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) q(static_cast<int>(i), static_cast<int>(j)) = to_integer(m.at(i, j));
      const auto k = linalg::kernel_basis(q);
      REQUIRE(k.cols() == 1);
      const QVector v = k.column(0);
      for (const auto& x : v) CHECK(x == v[0]);
    }
  }
}

TEST_CASE("divisor arithmetic") {
  const auto f = build_special_fiber({29, 2, 1});
  const auto a = closed_form_phi(f, ComponentId::zero());
  const auto b = closed_form_phi(f, ComponentId::interior(1, 1));
  CHECK((a + b - b) == a);
  CHECK((a + b).normalization() == Normalization::ZeroAtInfinity);
  CHECK((a + full_fiber(f)).normalization() == Normalization::Unpinned);
  CHECK(a.scaled(0).is_zero());
  CHECK(code_of([&] { VerticalDivisor(f, QVector(3)); }) == Errc::InvalidArgument);
  const auto other = build_special_fiber({31, 2, 1});
  CHECK(code_of([&] { (void)(a + closed_form_phi(other, ComponentId::zero())); }) == Errc::InvalidArgument);
}
