#include "arakelov/arith.hpp"
#include "arakelov/bound_expr.hpp"
#include "arakelov/error.hpp"
#include "arakelov/ledger.hpp"
#include "arakelov/linalg.hpp"
#include "arakelov/rational.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace arakelov;
using linalg::QMatrix;
using linalg::QVector;

namespace {

bool trial_division_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Laplace expansion along the first row.
Integer cofactor_det(const std::vector<std::vector<Integer>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  Integer total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<Integer>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Integer> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(row);
    }
    const Integer c = m[0][j] * cofactor_det(minor);
    total += (j % 2 == 0) ? c : Integer(-c);
  }
  return total;
}

template <class E>
Errc code_of(E&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::InternalInvariant;
}

}  // namespace

TEST_CASE("rational text round trip") {
  CHECK(to_string(Rational(0)) == "0/1");
  CHECK(to_string(make_rational(-6, 4)) == "-3/2");
  CHECK(to_string(make_rational(10, -4)) == "-5/2");
  CHECK(parse_rational("7") == 7);
  CHECK(parse_rational("-3/6") == make_rational(-1, 2));
  CHECK(parse_rational("0.088") == make_rational(11, 125));
  CHECK(parse_rational("7.7") == make_rational(77, 10));
  CHECK(parse_rational("-1.25") == make_rational(-5, 4));
  CHECK(code_of([] { parse_rational("1/0"); }) == Errc::InvalidArgument);
  CHECK(code_of([] { parse_rational("abc"); }) == Errc::InvalidArgument);
  CHECK(code_of([] { parse_rational(""); }) == Errc::InvalidArgument);

  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto num = static_cast<std::int64_t>(rng() % 2001) - 1000;
    const auto den = static_cast<std::int64_t>(rng() % 999) + 1;
    const Rational q = make_rational(num, den);
    CHECK(parse_rational(to_string(q)) == q);
  }
}

TEST_CASE("primality agrees with trial division") {
  for (std::uint64_t n = 0; n < 5000; ++n) CHECK(is_prime(n) == trial_division_prime(n));
  CHECK(is_prime(1000000007));
  CHECK(is_prime(1000003));
  CHECK_FALSE(is_prime(1000000));
  CHECK_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
  const auto ps = primes_between(10, 30);
  CHECK(ps == std::vector<std::int64_t>{11, 13, 17, 19, 23, 29});
}

TEST_CASE("modular inverse") {
  for (std::int64_t p : {5, 11, 97}) {
    for (std::int64_t a = 1; a < p; ++a) CHECK(mod(a * inverse_mod(a, p), p) == 1);
  }
  CHECK(mod(-7, 5) == 3);
}

TEST_CASE("Bareiss determinant matches cofactor expansion") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    std::vector<std::vector<Integer>> m(n, std::vector<Integer>(n));
    for (auto& row : m)
      for (auto& x : row) x = static_cast<int>(rng() % 11) - 5;
    CHECK(linalg::determinant(m) == cofactor_det(m));
  }
}

TEST_CASE("fraction-free reducer solves random nonsingular systems") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    QMatrix a(n, n);
    std::vector<std::vector<Integer>> ints(static_cast<std::size_t>(n), std::vector<Integer>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int v = static_cast<int>(rng() % 9) - 4;
        a(i, j) = v;
        ints[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      }
    if (linalg::determinant(ints) == 0) continue;
    QVector b(static_cast<std::size_t>(n));
    for (auto& x : b) x = static_cast<int>(rng() % 7) - 3;

    linalg::FractionFreeReducer r(n, n + 1);
    for (int i = 0; i < n; ++i) {
      linalg::SparseRow row;
      for (int j = 0; j < n; ++j)
        if (a(i, j) != 0) row.push_back({j, a(i, j).get_num()});
      if (b[static_cast<std::size_t>(i)] != 0) row.push_back({n, b[static_cast<std::size_t>(i)].get_num()});
      r.add_row(row);
    }
    r.reduce();
    REQUIRE(r.rank() == n);
    CHECK(r.consistent());
    const QVector x = r.unique_solution(n);
    CHECK(a.apply(x) == b);
  }
}

TEST_CASE("kernel basis and rank") {
  QMatrix m(2, 4);
  // rows (1 2 0 1), (2 4 1 3)
  m(0, 0) = 1; m(0, 1) = 2; m(0, 3) = 1;
  m(1, 0) = 2; m(1, 1) = 4; m(1, 2) = 1; m(1, 3) = 3;
  CHECK(linalg::rank(m) == 2);
  const QMatrix k = linalg::kernel_basis(m);
  CHECK(k.cols() == 2);
  for (int j = 0; j < k.cols(); ++j) CHECK(linalg::is_zero(m.apply(k.column(j))));
}

TEST_CASE("rational span") {
  linalg::RationalSpan s(3);
  CHECK(s.add({1, 2, 3}));
  CHECK_FALSE(s.add({2, 4, 6}));
  CHECK(s.add({0, 1, 1}));
  CHECK(s.contains({1, 3, 4}));
  CHECK_FALSE(s.contains({0, 0, 1}));
  CHECK(s.dimension() == 2);
}

TEST_CASE("log enclosure brackets the natural logarithm") {
  for (long n : {2L, 3L, 10L, 97L, 101L, 1000003L, 1000000007L}) {
    const LogEnclosure e = log_enclosure(Integer(n));
    CHECK(e.lo < e.hi);
    CHECK(e.hi - e.lo < make_rational(1, 1000000000));
    const double v = std::log(static_cast<double>(n));
    CHECK(e.lo.get_d() <= v + 1e-12);
    CHECK(e.hi.get_d() >= v - 1e-12);
  }
  const LogEnclosure one = log_enclosure(Integer(1));
  CHECK(one.lo <= 0);
  CHECK(one.hi >= 0);
}

TEST_CASE("bound expressions") {
  const BoundExpr a = BoundExpr::term(make_rational(3, 2), 2, 0) + BoundExpr(5);
  const BoundExpr b = BoundExpr::log_p().scaled(2);
  CHECK((a - a).is_zero());
  CHECK((a * b).coefficient(2, 1) == 3);
  CHECK((a * b).coefficient(0, 1) == 10);
  CHECK((a * b).max_p_power() == 2);
  CHECK(a.evaluate(10).lower == Rational(155));
  CHECK(a.evaluate(10).upper == Rational(155));
  const Evaluation ev = (a * b).evaluate(101);
  CHECK(ev.lower <= ev.upper);
  CHECK(ev.approx == doctest::Approx(((1.5 * 101 * 101) + 5) * 2 * std::log(101.0)));
  const Evaluation neg = (-b).evaluate(101);
  CHECK(neg.upper <= 0);
  CHECK(neg.lower <= neg.upper);
  CHECK(a.to_string() == "3/2*p^2 + 5/1");
  CHECK(BoundExpr().to_string() == "0/1");
}

TEST_CASE("ledger defaults and provenance") {
  const ConstantLedger l;
  CHECK(l.get("bruin_a") == make_rational(11, 125));
  CHECK(l.get("bruin_b") == make_rational(77, 10));
  CHECK(l.get("bruin_c") == 16000);
  CHECK(l.provenance("bruin_a") == Provenance::PaperPinned);
  CHECK(l.provenance("c_MU") == Provenance::Placeholder);
  for (const auto& e : l.entries()) CHECK(e.value > 0);
  CHECK(code_of([&] { l.get("nope"); }) == Errc::InvalidLedger);
}

TEST_CASE("ledger text format") {
  const ConstantLedger l = ConstantLedger::parse(
      "# tuned constants\n"
      "#provenance: placeholder\n"
      "c_MU = 3/2\n"
      "\n"
      "#provenance: placeholder\n"
      "gamma1 = \"0.25\"\n");
  CHECK(l.get("c_MU") == make_rational(3, 2));
  CHECK(l.get("gamma1") == make_rational(1, 4));
  CHECK(l.get("c_mumford") == 1);
  CHECK(ConstantLedger::parse(l.to_text()).entries().size() == l.entries().size());
  CHECK(ConstantLedger::parse(l.to_text()).get("c_MU") == make_rational(3, 2));

  CHECK(code_of([] { ConstantLedger::parse("c_MU = 2\n"); }) == Errc::InvalidLedger);
  CHECK(code_of([] { ConstantLedger::parse("#provenance: placeholder\nfoo = 2\n"); }) == Errc::InvalidLedger);
  CHECK(code_of([] { ConstantLedger::parse("#provenance: placeholder\nc_MU = -2\n"); }) == Errc::InvalidLedger);
  CHECK(code_of([] { ConstantLedger::parse("#provenance: placeholder\nc_MU = 0\n"); }) == Errc::InvalidLedger);
  CHECK(code_of([] { ConstantLedger::parse("#provenance: guess\nc_MU = 2\n"); }) == Errc::InvalidLedger);
  CHECK(code_of([] {
          ConstantLedger::parse("#provenance: placeholder\nc_MU = 2\n#provenance: placeholder\nc_MU = 3\n");
        }) == Errc::InvalidLedger);
}

TEST_CASE("ledger usage tracking") {
  const ConstantLedger l;
  l.get("c_MU");
  l.get("bruin_a");
  CHECK(l.used_keys() == std::vector<std::string>{"bruin_a", "c_MU"});
  CHECK(l.used_placeholders() == std::vector<std::string>{"c_MU"});
  l.clear_usage();
  CHECK(l.used_keys().empty());
}
