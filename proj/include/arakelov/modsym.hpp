#pragma once

// Weight-2 modular symbols for Gamma_0(p) over Q, presented by Manin
// symbols (c:d) in P^1(F_p). Index t < p is (1:t), index p is (0:1).

#include "arakelov/linalg.hpp"
#include "arakelov/rational.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace arakelov::modsym {

struct Symbol {
  std::int64_t c;
  std::int64_t d;
};

class ManinSpace {
 public:
  std::int64_t p() const { return p_; }
  std::int64_t genus() const { return genus_; }
  std::size_t raw_symbol_count() const { return static_cast<std::size_t>(p_ + 1); }

  // Dimension of the quotient by the two- and three-term relations (2g + 1).
  int dimension() const { return static_cast<int>(free_symbols_.size()); }
  int cuspidal_dimension() const { return cuspidal_basis_.cols(); }

  // Index of (c:d); (c, d) must not both vanish mod p.
  std::size_t index(std::int64_t c, std::int64_t d) const;
  Symbol symbol(std::size_t index) const;

  // Class of a raw symbol in quotient coordinates.
  const linalg::QVector& class_of(std::size_t index) const { return classes_[index]; }
  linalg::QVector class_of(std::int64_t c, std::int64_t d) const { return classes_[index(c, d)]; }

  // Raw symbols whose classes form the quotient basis.
  const std::vector<std::size_t>& free_symbols() const { return free_symbols_; }

  // 2 x dimension matrix to the cusp space with rows ([0], [inf]); the
  // symbol {a, b} maps to [a] - [b], so {0, inf} = (0:1) maps to 0 - inf.
  const linalg::QMatrix& boundary_map() const { return boundary_; }
  linalg::QVector boundary(const linalg::QVector& x) const { return boundary_.apply(x); }

  // Columns span ker(boundary) in quotient coordinates.
  const linalg::QMatrix& cuspidal_basis() const { return cuspidal_basis_; }

  // Coordinates of a cuspidal vector in cuspidal_basis().
  linalg::QVector cuspidal_coordinates(const linalg::QVector& x) const;
  // Restricts an operator on the quotient to the cuspidal subspace.
  linalg::QMatrix restrict_to_cuspidal(const linalg::QMatrix& op) const;

  // Class of the modular symbol {0, a/b} (continued-fraction expansion).
  linalg::QVector zero_to(std::int64_t a, std::int64_t b) const;

  friend ManinSpace build_manin_space(std::int64_t p);

 private:
  std::int64_t p_ = 0;
  std::int64_t genus_ = 0;
  std::vector<std::size_t> free_symbols_;
  std::vector<linalg::QVector> classes_;
  linalg::QMatrix boundary_;
  linalg::QMatrix cuspidal_basis_;
  std::vector<int> cuspidal_free_cols_;
};

ManinSpace build_manin_space(std::int64_t p);

struct OperatorMatrix {
  std::string label;      // "T_l" or "w_p"
  linalg::QMatrix full;   // on the whole quotient
  linalg::QMatrix cusp;   // restricted to cuspidal_basis()
};

// Hecke operator via Merel's set of determinant-l matrices.
OperatorMatrix hecke_matrix(const ManinSpace& space, std::int64_t ell);

// Star involution (c:d) -> (-c:d), i.e. complex conjugation.
OperatorMatrix star_involution(const ManinSpace& space);

struct AtkinLehner {
  OperatorMatrix w;
  int dim_plus = 0;   // abelian-variety dimensions
  int dim_minus = 0;
};

AtkinLehner atkin_lehner(const ManinSpace& space);

// Winding element {0, inf} projected away from the Eisenstein line, in
// quotient coordinates; its boundary is zero.
linalg::QVector winding_cuspidal_projection(const ManinSpace& space);

// ceil((p + 1)/6)
std::int64_t sturm_bound(std::int64_t p);

// Dimension of the Hecke module generated by the winding element (= dim
// J_e). hecke_primes must contain every prime l <= sturm_bound(p), l != p.
int winding_dimension(const ManinSpace& space, const std::vector<std::int64_t>& hecke_primes);

struct WindingReport {
  std::int64_t p = 0;
  std::int64_t g = 0;
  int dim_plus = 0;
  int dim_minus = 0;
  int dim_Je = 0;
  Rational ratio;  // dim_Je / g
  bool brumer_weak = false;
};

WindingReport winding_report(std::int64_t p);

// One report per prime in [p_min, p_max], ordered by p. p_min must exceed 17.
std::vector<WindingReport> brumer_scan(std::int64_t p_min, std::int64_t p_max, int jobs = 1);

}  // namespace arakelov::modsym
