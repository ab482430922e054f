#pragma once

// Explicit height inequalities for rational points of X_0(p) and their
// assembly into the bound b(p) on the j-height of quadratic points. All
// arithmetic is exact; log p is kept symbolic inside BoundExpr.

#include "arakelov/bound_expr.hpp"
#include "arakelov/ledger.hpp"
#include "arakelov/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace arakelov::heights {

// Numerator of (p - 1)/12 in lowest terms. Primes p <= 17 (e.g. the unit
// test value 13) are accepted; `warning` then receives a note.
Integer n0(std::int64_t p, std::string* warning = nullptr);

// Bruin's bound on sup g_mu: bruin_a p^2 + bruin_b p + bruin_c.
BoundExpr bruin_sup_expr(const ConstantLedger& ledger);
Rational bruin_sup(std::int64_t p, const ConstantLedger& ledger);

enum class PairingMode { Mu0, MuE };

// Upper bound on the j-height from the degree-normalized pairing [P, inf]:
// (p + 1)(pairing + sup g_mu + A), A = a0_integral (Mu0) or a0_integral_e
// (MuE); Bruin's sup bound serves both measures.
Rational j_from_pairing(std::int64_t p, const Rational& pairing, const ConstantLedger& ledger,
                        PairingMode mode = PairingMode::Mu0);

// 12(p+1)/(p-13) h + gamma p^3 (shifted theta divisor) or
// 48(p+1)/(p-13) h + gamma1 p^3 (theta divisor through the cusp).
BoundExpr theta_to_j(std::int64_t p, const BoundExpr& h_theta, const ConstantLedger& ledger, bool shifted);
Rational theta_to_j(std::int64_t p, const Rational& h_theta, const ConstantLedger& ledger, bool shifted);

struct WdEstimate {
  int d = 1;
  BoundExpr deg_bound;     // no log terms
  BoundExpr height_bound;
};

// Degree and normalized Neron-Tate height of the image of X_0(p)^(d) in
// J_0(p): d = 1 gives (g, g c_MU log p); d = 2 gives (8 g^2, 64 g^2 c_MU log p).
WdEstimate wd_estimate(std::int64_t p, int d, const ConstantLedger& ledger);

struct SegreBound {
  Rational degree;
  Rational height;
};

// Degree and height of V x W under the Segre-type product polarization.
SegreBound segre_degree_height(int dV, int dW, const Rational& degV, const Rational& degW, const Rational& hV,
                               const Rational& hW);

enum class ErrMode { P3, Autissier };

const char* err_mode_name(ErrMode m);

struct BezoutBound {
  BoundExpr main_term;
  BoundExpr error_term;
  BoundExpr total;
};

// Height of a point of V n W (components of the intersection in the
// abelian variety) by the arithmetic Bezout theorem with N_0 = n0(p).
BezoutBound bezout_bound(std::int64_t p, int dV, int dW, const BoundExpr& degV, const BoundExpr& degW,
                         const BoundExpr& hV, const BoundExpr& hW, const ConstantLedger& ledger, ErrMode mode);

// Lower bound (g-2)/(4g) (hP + hQ) - c_mumford p^2 on h(P - Q).
BoundExpr mumford(std::int64_t p, const BoundExpr& hP, const BoundExpr& hQ, const ConstantLedger& ledger);
// Largest h with mumford(p, h, h) <= B: 2g/(g-2) (B + c_mumford p^2).
BoundExpr mumford_invert(std::int64_t p, const BoundExpr& B, const ConstantLedger& ledger);

// Degree bound (dimJ - 1)/(dimA - 1) for the normalized image in A.
Rational quotient_degree_bound(std::int64_t dimJ, std::int64_t dimA);

struct BrumerGate {
  bool brumer_weak = false;
  std::optional<std::int64_t> dn_max;  // nullopt stands for infinity
  bool degree_one = false;
};

BrumerGate brumer_gate(std::int64_t g, std::int64_t dimJe);

struct AssemblyTrace {
  std::int64_t p = 0;
  std::int64_t genus = 0;
  Integer n0;
  ErrMode err_mode = ErrMode::P3;
  WdEstimate wd;
  BezoutBound bezout;
  BoundExpr theta_height;             // after Mumford inversion
  BoundExpr theta_height_no_mumford;  // same without the c_mumford p^2 term
  BoundExpr j_height;                 // b(p)
  BoundExpr j_height_no_mumford;
  std::vector<LedgerEntry> constants; // ledger entries consulted
};

struct AssembledBound {
  Rational bound;       // exact rational upper bound for b(p)
  double approx = 0.0;  // floating value of b(p)
  AssemblyTrace trace;
};

// W_2 estimate -> Bezout with dV = dW = 2 -> Mumford inversion ->
// theta-to-j conversion (theta divisor through the cusp).
AssembledBound assemble_b(std::int64_t p, const ConstantLedger& ledger, ErrMode mode);

struct CuspPairing {
  BoundExpr inf_inf;
  BoundExpr zero_zero;
};

// [inf, inf] = [0, 0] = [0, inf] - 6 log p/(p - 1).
CuspPairing cusp_pairing_relation(std::int64_t p, const BoundExpr& pairing_0_inf);

}  // namespace arakelov::heights
