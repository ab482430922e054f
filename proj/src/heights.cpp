#include "arakelov/heights.hpp"

#include "arakelov/arith.hpp"
#include "arakelov/error.hpp"
#include "arakelov/fiber.hpp"

namespace arakelov::heights {

namespace {

void require_large_prime(std::int64_t p) {
  if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) {
    throw Error(Errc::NonPrime, std::to_string(p) + " is not prime");
  }
  if (p <= 17) throw Error(Errc::PTooSmall, "p must exceed 17, got " + std::to_string(p));
}

Rational binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

Rational pow_q(const Rational& base, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

Rational genus_q(std::int64_t p) { return Rational(to_integer(fiber::genus_x0(p))); }

}  // namespace

Integer n0(std::int64_t p, std::string* warning) {
  if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) {
    throw Error(Errc::NonPrime, std::to_string(p) + " is not prime");
  }
  if (p <= 17 && warning) *warning = "p = " + std::to_string(p) + " is outside the range p > 17";
  return make_rational(p - 1, 12).get_num();
}

BoundExpr bruin_sup_expr(const ConstantLedger& ledger) {
  return BoundExpr::term(ledger.get("bruin_a"), 2, 0) + BoundExpr::term(ledger.get("bruin_b"), 1, 0) +
         BoundExpr(ledger.get("bruin_c"));
}

Rational bruin_sup(std::int64_t p, const ConstantLedger& ledger) {
  require_large_prime(p);
  return bruin_sup_expr(ledger).evaluate(p).upper;
}

Rational j_from_pairing(std::int64_t p, const Rational& pairing, const ConstantLedger& ledger, PairingMode mode) {
  require_large_prime(p);
  const Rational a = ledger.get(mode == PairingMode::Mu0 ? "a0_integral" : "a0_integral_e");
  return Rational(to_integer(p + 1)) * (pairing + bruin_sup(p, ledger) + a);
}

BoundExpr theta_to_j(std::int64_t p, const BoundExpr& h_theta, const ConstantLedger& ledger, bool shifted) {
  if (p == 13) throw Error(Errc::PDegenerate, "12(p+1)/(p-13) is undefined at p = 13");
  require_large_prime(p);
  const Rational slope = make_rational(12 * (p + 1), p - 13) * (shifted ? 1 : 4);
  const Rational& cubic = ledger.get(shifted ? "gamma" : "gamma1");
  return h_theta.scaled(slope) + BoundExpr::term(cubic, 3, 0);
}

Rational theta_to_j(std::int64_t p, const Rational& h_theta, const ConstantLedger& ledger, bool shifted) {
  return theta_to_j(p, BoundExpr(h_theta), ledger, shifted).evaluate(p).upper;
}

WdEstimate wd_estimate(std::int64_t p, int d, const ConstantLedger& ledger) {
  require_large_prime(p);
  if (d != 1 && d != 2) throw Error(Errc::InvalidArgument, "d must be 1 or 2");
  if (d == 2 && p <= 71) {
    throw Error(Errc::GonalityPrecondition, "X_0(p) has gonality > 2 only for p > 71");
  }
  const Rational g = genus_q(p);
  const Rational& c_mu = ledger.get("c_MU");
  WdEstimate w;
  w.d = d;
  if (d == 1) {
    w.deg_bound = BoundExpr(g);
    w.height_bound = BoundExpr::term(g * c_mu, 0, 1);
  } else {
    w.deg_bound = BoundExpr(8 * g * g);
    w.height_bound = BoundExpr::term(64 * g * g * c_mu, 0, 1);
  }
  return w;
}

SegreBound segre_degree_height(int dV, int dW, const Rational& degV, const Rational& degW, const Rational& hV,
                               const Rational& hW) {
  if (dV < 0 || dW < 0) throw Error(Errc::InvalidArgument, "dimensions must be >= 0");
  if (degV <= 0 || degW <= 0) throw Error(Errc::InvalidArgument, "degrees must be > 0");
  if (hV < 0 || hW < 0) throw Error(Errc::InvalidArgument, "heights must be >= 0");
  SegreBound s;
  s.degree = binomial(dV + dW, dV) * degV * degW;
  s.height = binomial(dV + dW + 1, dV) * degV * hW + binomial(dV + dW + 1, dW) * degW * hV;
  return s;
}

const char* err_mode_name(ErrMode m) { return m == ErrMode::P3 ? "p3" : "autissier"; }

BezoutBound bezout_bound(std::int64_t p, int dV, int dW, const BoundExpr& degV, const BoundExpr& degW,
                         const BoundExpr& hV, const BoundExpr& hW, const ConstantLedger& ledger, ErrMode mode) {
  require_large_prime(p);
  if (dV < 0 || dW < 0) throw Error(Errc::InvalidArgument, "dimensions must be >= 0");
  const int d = dV + dW;
  const std::int64_t g = fiber::genus_x0(p);
  if (d > g) {
    throw Error(Errc::DimensionOverflow,
                "dV + dW = " + std::to_string(d) + " exceeds g = " + std::to_string(g));
  }
  const Rational n0q(n0(p));
  const Rational base = 4 * n0q * n0q;

  BezoutBound b;
  b.main_term = (hW * degV).scaled(Rational(dW + 1) * binomial(d + 1, dV)) +
                (hV * degW).scaled(Rational(dV + 1) * binomial(d + 1, dW));
  b.main_term = b.main_term.scaled(pow_q(base, d) / 2);
  if (d > 0) {
    const BoundExpr err = mode == ErrMode::P3 ? BoundExpr::term(ledger.get("c_bezout_err3"), 3, 0)
                                              : BoundExpr::term(ledger.get("c_bezout_err1"), 1, 1);
    b.error_term = (err * degV * degW).scaled(Rational(d) * pow_q(base, d - 1) / 2 * binomial(d, dV));
  }
  b.total = b.main_term + b.error_term;
  return b;
}

BoundExpr mumford(std::int64_t p, const BoundExpr& hP, const BoundExpr& hQ, const ConstantLedger& ledger) {
  require_large_prime(p);
  const Rational g = genus_q(p);
  return (hP + hQ).scaled((g - 2) / (4 * g)) - BoundExpr::term(ledger.get("c_mumford"), 2, 0);
}

BoundExpr mumford_invert(std::int64_t p, const BoundExpr& B, const ConstantLedger& ledger) {
  require_large_prime(p);
  const Rational g = genus_q(p);
  if (g <= 2) throw Error(Errc::GenusDegenerate, "Mumford inversion needs g >= 3");
  return (B + BoundExpr::term(ledger.get("c_mumford"), 2, 0)).scaled(2 * g / (g - 2));
}

Rational quotient_degree_bound(std::int64_t dimJ, std::int64_t dimA) {
  if (dimA < 2) throw Error(Errc::DimATooSmall, "quotient dimension must be >= 2");
  if (dimJ < dimA) throw Error(Errc::InvalidArgument, "dim J must be >= dim A");
  return make_rational(dimJ - 1, dimA - 1);
}

BrumerGate brumer_gate(std::int64_t g, std::int64_t dimJe) {
  if (dimJe < 1 || g < dimJe) throw Error(Errc::InvalidArgument, "need 1 <= dim J_e <= g");
  BrumerGate b;
  b.brumer_weak = 3 * dimJe >= g + 3;
  if (dimJe >= 2) b.dn_max = (g - 1) / (dimJe - 1);
  b.degree_one = b.dn_max.has_value() && *b.dn_max <= 2;
  return b;
}

AssembledBound assemble_b(std::int64_t p, const ConstantLedger& ledger, ErrMode mode) {
  AssemblyTrace t;
  t.p = p;
  t.err_mode = mode;
  t.wd = wd_estimate(p, 2, ledger);
  t.genus = fiber::genus_x0(p);
  t.n0 = n0(p);
  // X^(2),- and its pseudo-projection share the W_2 bounds.
  t.bezout = bezout_bound(p, 2, 2, t.wd.deg_bound, t.wd.deg_bound, t.wd.height_bound, t.wd.height_bound, ledger,
                          mode);
  t.theta_height = mumford_invert(p, t.bezout.total, ledger);
  const Rational g = Rational(to_integer(t.genus));
  t.theta_height_no_mumford = t.bezout.total.scaled(2 * g / (g - 2));
  t.j_height = theta_to_j(p, t.theta_height, ledger, false);
  t.j_height_no_mumford = theta_to_j(p, t.theta_height_no_mumford, ledger, false);
  for (const char* key : {"c_MU", mode == ErrMode::P3 ? "c_bezout_err3" : "c_bezout_err1", "c_mumford", "gamma1"}) {
    t.constants.push_back({key, ledger.get(key), ledger.provenance(key)});
  }

  AssembledBound out;
  const Evaluation ev = t.j_height.evaluate(p);
  out.bound = ev.upper;
  out.approx = ev.approx;
  out.trace = std::move(t);
  return out;
}

CuspPairing cusp_pairing_relation(std::int64_t p, const BoundExpr& pairing_0_inf) {
  require_large_prime(p);
  const BoundExpr shifted = pairing_0_inf - BoundExpr::term(make_rational(6, p - 1), 0, 1);
  return {shifted, shifted};
}

}  // namespace arakelov::heights
