#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace arakelov {

using Integer = mpz_class;
using Rational = mpq_class;

// Canonical "num/den" text: lowest terms, positive denominator, the
// denominator is always written (so zero is "0/1").
std::string to_string(const Rational& q);

// Accepts "a", "a/b" and finite decimals "a.bcd" (parsed exactly).
// Throws Error(InvalidArgument) on anything else or a zero denominator.
Rational parse_rational(std::string_view text);

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  Rational q{Integer(static_cast<long>(num)), Integer(static_cast<long>(den))};
  q.canonicalize();
  return q;
}

inline Rational make_rational(const Integer& num, const Integer& den) {
  Rational q{num, den};
  q.canonicalize();
  return q;
}

inline Integer to_integer(std::int64_t v) { return Integer(static_cast<long>(v)); }

}  // namespace arakelov
