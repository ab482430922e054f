#pragma once

// Special fiber at p of the minimal regular model of X_0(p) over a ring of
// integers: two extremal components C_inf and C_0 joined by s = g + 1
// chains of (w_n e - 1) interior components, one chain per supersingular
// point. Intersection numbers are exact integers/rationals in units of
// log #k(v) = f log p.

#include "arakelov/linalg.hpp"
#include "arakelov/rational.hpp"

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace arakelov::fiber {

struct FiberParams {
  std::int64_t p = 0;
  int e = 1;  // ramification index of v
  int f = 1;  // residual degree of v
};

// Supersingular data of X_0(p) in characteristic p, valid for every prime
// p >= 5. The counts follow from the Eichler mass formula
//   sum 1/w_n = (p - 1)/12,
// with one branch of width 2 iff p = 3 mod 4 and one of width 3 iff
// p = 2 mod 3.
struct SupersingularData {
  std::int64_t s = 0;     // number of supersingular points (= branches)
  int width_two = 0;      // branches with w_n = 2
  int width_three = 0;    // branches with w_n = 3
  std::int64_t genus = 0; // s - 1
};

SupersingularData supersingular_data(std::int64_t p);

// Genus of X_0(p) for any prime p >= 5; used where building the whole fiber
// would be wasteful (p up to 10^9 in the bound pipeline).
std::int64_t genus_x0(std::int64_t p);

struct Branch {
  int index = 0;            // n, 1-based
  int width = 1;            // w_n in {1, 2, 3}
  int interior_length = 0;  // w_n e - 1
};

class ComponentId {
 public:
  enum class Kind { Infinity, Interior, Zero };

  static ComponentId infinity() { return ComponentId(Kind::Infinity, 0, 0); }
  static ComponentId zero() { return ComponentId(Kind::Zero, 0, 0); }
  static ComponentId interior(int n, int m) { return ComponentId(Kind::Interior, n, m); }

  Kind kind() const { return kind_; }
  int branch() const { return n_; }
  int position() const { return m_; }

  std::string label() const;

  auto operator<=>(const ComponentId&) const = default;

 private:
  ComponentId(Kind k, int n, int m) : kind_(k), n_(n), m_(m) {}
  Kind kind_;
  int n_;
  int m_;
};

// Immutable handle; copies share the underlying data.
class SpecialFiber {
 public:
  const FiberParams& params() const { return data_->params; }
  std::int64_t p() const { return data_->params.p; }
  int e() const { return data_->params.e; }
  const std::vector<Branch>& branches() const { return data_->branches; }
  const Branch& branch(int n) const;
  int s() const { return static_cast<int>(data_->branches.size()); }
  std::int64_t genus() const { return data_->genus; }

  // Size of the ordered basis (C_inf, C_{1,1}, ..., C_{s, w_s e - 1}, C_0).
  std::size_t basis_size() const { return data_->basis_size; }
  std::size_t index_of(const ComponentId& c) const;
  ComponentId component_at(std::size_t index) const;

  // Reads C_{n,0} as C_inf and C_{n, w_n e} as C_0.
  ComponentId resolve(int n, int m) const;

  // sum over branches of 1/w_n
  Rational eichler_mass() const;

 private:
  struct Data {
    FiberParams params;
    std::vector<Branch> branches;
    std::vector<std::size_t> offsets;  // basis index of C_{n,1}
    std::size_t basis_size = 0;
    std::int64_t genus = 0;
  };
  explicit SpecialFiber(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
  friend SpecialFiber build_special_fiber(const FiberParams& params);

  std::shared_ptr<const Data> data_;
};

SpecialFiber build_special_fiber(const FiberParams& params);

class IntersectionMatrix {
 public:
  IntersectionMatrix(std::size_t n, std::vector<std::int64_t> entries);

  std::size_t size() const { return n_; }
  std::int64_t at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  linalg::QVector apply(const linalg::QVector& v) const;
  std::vector<std::vector<Integer>> to_integer_rows() const;

 private:
  std::size_t n_;
  std::vector<std::int64_t> entries_;
};

IntersectionMatrix intersection_matrix(const SpecialFiber& fiber);

// The tridiagonal block M_0 of the given order (-2 on the diagonal, 1 next
// to it).
std::vector<std::vector<Integer>> chain_block(int order);

enum class Normalization {
  ZeroAtInfinity,  // coefficient at C_inf is 0
  Unpinned,        // no constraint (cuspidal class, Fricke images, sums)
};

class VerticalDivisor {
 public:
  VerticalDivisor(SpecialFiber fiber, linalg::QVector coeffs,
                  Normalization norm = Normalization::ZeroAtInfinity);

  const SpecialFiber& fiber() const { return fiber_; }
  const linalg::QVector& coefficients() const& { return coeffs_; }
  linalg::QVector coefficients() && { return std::move(coeffs_); }
  Normalization normalization() const { return norm_; }
  const Rational& coefficient(const ComponentId& c) const;
  bool is_zero() const { return linalg::is_zero(coeffs_); }

  VerticalDivisor operator+(const VerticalDivisor& rhs) const;
  VerticalDivisor operator-(const VerticalDivisor& rhs) const;
  VerticalDivisor scaled(const Rational& c) const;
  VerticalDivisor operator-() const { return scaled(-1); }

  // Coefficient-wise equality; normalization tags are not compared.
  bool operator==(const VerticalDivisor& rhs) const;

 private:
  SpecialFiber fiber_;
  linalg::QVector coeffs_;
  Normalization norm_;
};

// Sum of all components of the fiber, numerically trivial.
VerticalDivisor full_fiber(const SpecialFiber& fiber);

// delta_{target} - delta_{C_inf}
linalg::QVector intersection_target(const SpecialFiber& fiber, const ComponentId& target);

// Solves M Phi = delta_target - delta_inf with Phi(C_inf) = 0 by
// fraction-free elimination on the full singular system plus the
// normalization row.
VerticalDivisor solve_vertical_divisor(const SpecialFiber& fiber, const ComponentId& target);

// Branch-by-branch closed form of the same divisor.
VerticalDivisor closed_form_phi(const SpecialFiber& fiber, const ComponentId& target);

// Vertical part of the relative dualizing sheaf: (g - 1) Phi_{C_0}.
VerticalDivisor phi_omega(const SpecialFiber& fiber);

// Class of the cuspidal divisor (0) - (inf): coefficient
// 6/(p-1) (e - 2m/w_n) at C_{n,m}. Unpinned: its C_inf coefficient is
// 6e/(p-1).
VerticalDivisor cuspidal_divisor_class(const SpecialFiber& fiber);

// Pull-back along C_{n,m} -> C_{perm(n), w_n e - m}; perm is 1-based,
// perm[n-1] = perm(n), must preserve widths. Empty means identity.
VerticalDivisor fricke_involution(const SpecialFiber& fiber, const VerticalDivisor& div,
                                  std::span<const int> branch_perm = {});

}  // namespace arakelov::fiber
