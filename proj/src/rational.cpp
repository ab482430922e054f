#include "arakelov/rational.hpp"

#include "arakelov/error.hpp"

#include <cctype>

namespace arakelov {

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw Error(Errc::InvalidArgument, "not a rational: '" + std::string(whole) + "'");
  }
  Integer z(std::string(s), 10);
  return negative ? Integer(-z) : z;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(trim(s.substr(0, slash)), text);
    std::string_view den_text = trim(s.substr(slash + 1));
    if (!den_text.empty() && den_text.front() == '-') {
      throw Error(Errc::InvalidArgument, "negative denominator in '" + std::string(text) + "'");
    }
    Integer den = parse_integer(den_text, text);
    if (den == 0) throw Error(Errc::InvalidArgument, "zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if (!all_digits(frac_part)) {
      throw Error(Errc::InvalidArgument, "not a rational: '" + std::string(text) + "'");
    }
    bool negative = !int_part.empty() && int_part.front() == '-';
    std::string digits(int_part);
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    Integer whole = parse_integer(digits, text);
    Integer frac(std::string(frac_part), 10);
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_part.size());
    Integer num = abs(whole) * scale + frac;
    Rational q(negative ? Integer(-num) : num, scale);
    q.canonicalize();
    return q;
  }
  return Rational(parse_integer(s, text));
}

}  // namespace arakelov
