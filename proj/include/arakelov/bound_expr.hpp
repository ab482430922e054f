#pragma once

// Exact expressions sum c_{a,b} p^a (log p)^b with rational coefficients.
// log p stays symbolic; numbers come out only through evaluate(), which
// returns a rational enclosure built from a certified enclosure of ln p.

#include "arakelov/rational.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>

namespace arakelov {

struct LogEnclosure {
  Rational lo;
  Rational hi;
};

// lo <= ln(n) <= hi, both dyadic with denominator 2^128. n >= 1.
LogEnclosure log_enclosure(const Integer& n);

struct Evaluation {
  Rational lower;
  Rational upper;
  double approx = 0.0;
};

class BoundExpr {
 public:
  using Key = std::pair<int, int>;  // (power of p, power of log p)

  BoundExpr() = default;
  BoundExpr(const Rational& constant);  // NOLINT: implicit on purpose
  static BoundExpr term(const Rational& c, int p_power, int log_power);
  static BoundExpr p_power(int a) { return term(1, a, 0); }
  static BoundExpr log_p() { return term(1, 0, 1); }

  const std::map<Key, Rational>& terms() const { return terms_; }
  Rational coefficient(int p_power, int log_power) const;
  bool is_zero() const { return terms_.empty(); }
  bool has_log() const;
  bool is_constant() const;
  // Largest p power carrying a nonzero coefficient; -1 for the zero expression.
  int max_p_power() const;

  BoundExpr operator+(const BoundExpr& rhs) const;
  BoundExpr operator-(const BoundExpr& rhs) const;
  BoundExpr operator*(const BoundExpr& rhs) const;
  BoundExpr operator-() const { return scaled(-1); }
  BoundExpr scaled(const Rational& c) const;
  BoundExpr& operator+=(const BoundExpr& rhs) { return *this = *this + rhs; }

  bool operator==(const BoundExpr& rhs) const { return terms_ == rhs.terms_; }

  // Substitutes p; the result is an expression in log p alone.
  BoundExpr at_p(std::int64_t p) const;

  // Exact when there is no log term; otherwise brackets the value using
  // log_enclosure(p). Requires p >= 2.
  Evaluation evaluate(std::int64_t p) const;

  // "c*p^a*log(p)^b + ..." in decreasing (a, b) order; "0/1" when empty.
  std::string to_string() const;

 private:
  void add_term(const Key& k, const Rational& c);
  std::map<Key, Rational> terms_;
};

}  // namespace arakelov
