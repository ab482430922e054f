#include "arakelov/bound_expr.hpp"

#include "arakelov/error.hpp"

#include <cmath>
#include <mutex>
#include <unordered_map>

namespace arakelov {

namespace {

constexpr int kDyadicBits = 128;
constexpr int kSeriesTerms = 60;  // y <= 1/3, so the tail is below 3^-120

// 2 atanh(y) for 0 <= y <= 1/3, enclosed by the partial sum and the
// geometric tail bound 2 y^(2N+1) / ((2N+1)(1 - y^2)).
LogEnclosure two_atanh(const Rational& y) {
  Rational sum = 0;
  const Rational y2 = y * y;
  Rational power = y;
  for (int j = 0; j < kSeriesTerms; ++j) {
    sum += power / (2 * j + 1);
    power *= y2;
  }
  const Rational tail = power / ((2 * kSeriesTerms + 1) * (1 - y2));
  return {2 * sum, 2 * (sum + tail)};
}

Rational round_down(const Rational& q) {
  Integer scaled = q.get_num() << kDyadicBits;
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
  Rational r(f, Integer(1) << kDyadicBits);
  r.canonicalize();
  return r;
}

Rational round_up(const Rational& q) {
  Integer scaled = q.get_num() << kDyadicBits;
  Integer c;
  mpz_cdiv_q(c.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
  Rational r(c, Integer(1) << kDyadicBits);
  r.canonicalize();
  return r;
}

Rational power(const Rational& base, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

const LogEnclosure& cached_log(std::int64_t p) {
  static std::mutex mu;
  static std::unordered_map<std::int64_t, LogEnclosure> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(p);
  if (it == cache.end()) it = cache.emplace(p, log_enclosure(to_integer(p))).first;
  return it->second;
}

}  // namespace

LogEnclosure log_enclosure(const Integer& n) {
  if (n < 1) throw Error(Errc::InvalidArgument, "log_enclosure needs n >= 1");
  // n = 2^k m with 1 <= m < 2, ln n = k ln 2 + 2 atanh((m-1)/(m+1)).
  const long k = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)) - 1;
  Rational m(n, Integer(1) << k);
  m.canonicalize();
  const LogEnclosure ln2 = two_atanh(Rational(1, 3));
  const LogEnclosure lnm = two_atanh((m - 1) / (m + 1));
  return {round_down(k * ln2.lo + lnm.lo), round_up(k * ln2.hi + lnm.hi)};
}

BoundExpr::BoundExpr(const Rational& constant) { add_term({0, 0}, constant); }

BoundExpr BoundExpr::term(const Rational& c, int p_power, int log_power) {
  if (p_power < 0 || log_power < 0) throw Error(Errc::InvalidArgument, "negative exponent");
  BoundExpr e;
  e.add_term({p_power, log_power}, c);
  return e;
}

void BoundExpr::add_term(const Key& k, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational BoundExpr::coefficient(int p_power, int log_power) const {
  auto it = terms_.find({p_power, log_power});
  return it == terms_.end() ? Rational(0) : it->second;
}

bool BoundExpr::has_log() const {
  for (const auto& [k, c] : terms_)
    if (k.second > 0) return true;
  return false;
}

bool BoundExpr::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Key{0, 0});
}

int BoundExpr::max_p_power() const {
  int best = -1;
  for (const auto& [k, c] : terms_) best = std::max(best, k.first);
  return best;
}

BoundExpr BoundExpr::operator+(const BoundExpr& rhs) const {
  BoundExpr out = *this;
  for (const auto& [k, c] : rhs.terms_) out.add_term(k, c);
  return out;
}

BoundExpr BoundExpr::operator-(const BoundExpr& rhs) const { return *this + rhs.scaled(-1); }

BoundExpr BoundExpr::operator*(const BoundExpr& rhs) const {
  BoundExpr out;
  for (const auto& [k1, c1] : terms_)
    for (const auto& [k2, c2] : rhs.terms_) out.add_term({k1.first + k2.first, k1.second + k2.second}, c1 * c2);
  return out;
}

BoundExpr BoundExpr::scaled(const Rational& c) const {
  BoundExpr out;
  if (c == 0) return out;
  for (const auto& [k, v] : terms_) out.terms_.emplace(k, v * c);
  return out;
}

BoundExpr BoundExpr::at_p(std::int64_t p) const {
  BoundExpr out;
  const Rational pq(to_integer(p));
  for (const auto& [k, c] : terms_) out.add_term({0, k.second}, c * power(pq, k.first));
  return out;
}

Evaluation BoundExpr::evaluate(std::int64_t p) const {
  if (p < 2) throw Error(Errc::InvalidArgument, "evaluation needs p >= 2");
  const BoundExpr flat = at_p(p);
  Evaluation ev;
  const double logp = std::log(static_cast<double>(p));
  if (!flat.has_log()) {
    ev.lower = ev.upper = flat.coefficient(0, 0);
    ev.approx = ev.lower.get_d();
    return ev;
  }
  const LogEnclosure& L = cached_log(p);
  for (const auto& [k, c] : flat.terms_) {
    const Rational lo = power(L.lo, k.second);
    const Rational hi = power(L.hi, k.second);
    ev.lower += c * (c > 0 ? lo : hi);
    ev.upper += c * (c > 0 ? hi : lo);
    ev.approx += c.get_d() * std::pow(logp, k.second);
  }
  return ev;
}

std::string BoundExpr::to_string() const {
  if (terms_.empty()) return "0/1";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!out.empty()) out += " + ";
    out += arakelov::to_string(it->second);
    if (it->first.first == 1) out += "*p";
    if (it->first.first > 1) out += "*p^" + std::to_string(it->first.first);
    if (it->first.second == 1) out += "*log(p)";
    if (it->first.second > 1) out += "*log(p)^" + std::to_string(it->first.second);
  }
  return out;
}

}  // namespace arakelov
