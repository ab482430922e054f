#pragma once

// Riemann theta function in genus 1 and 2, double precision.
//
// theta(z) = sum_{m in Z^g} exp(i pi m^T tau m + 2 i pi m^T z).
//
// With Y = Im tau, y = Im z and c = Y^{-1} y, each term has modulus
// exp(-pi (m + c)^T Y (m + c)) exp(pi y^T Y^{-1} y), so the sum is taken in
// the normalized form (the second factor pulled out) over the box
// |m - m0|_inf <= R around m0 = round(-c). Terms with |m - m0|_inf = k
// have modulus at most exp(-pi lambda (k - 1/2)^2) in normalized scale,
// lambda the least eigenvalue of Y, and there are (2k+1)^g - (2k-1)^g of
// them. The tail beyond R is bounded by its first shell divided by
// (1 - r), r the (decreasing) ratio between consecutive shell bounds.

#include <complex>
#include <span>
#include <vector>

namespace arakelov::theta {

using Complex = std::complex<double>;

class PeriodMatrix {
 public:
  // Row-major g x g entries, g in {1, 2}. Throws InvalidArgument for a
  // bad shape or an asymmetric matrix, NotPositiveDefinite when a leading
  // principal minor of Im tau is <= pd_tol.
  PeriodMatrix(std::vector<Complex> entries, double pd_tol = 1e-12);

  int genus() const { return g_; }
  Complex operator()(int i, int j) const { return tau_[static_cast<std::size_t>(i * g_ + j)]; }
  const std::vector<Complex>& entries() const { return tau_; }

  double im(int i, int j) const { return (*this)(i, j).imag(); }
  double det_im() const;
  double min_eigenvalue_im() const;

 private:
  int g_;
  std::vector<Complex> tau_;
};

struct ThetaValue {
  Complex value;
  double norm_an = 0.0;           // det(Y)^{1/4} exp(-pi y^T Y^{-1} y) |theta(z)|
  int truncation_radius = 0;
  double error_estimate = 0.0;    // bound on the error of norm_an (analytic-norm scale)
  double value_error = 0.0;       // the same bound transported to theta(z) itself
};

// Hard cap on the truncation radius.
inline constexpr int kMaxRadius = 200;

// Normalized tail bound sum_{k > R} N_k exp(-pi lambda (k - 1/2)^2).
double tail_bound(int g, double lambda, int R);

ThetaValue theta_eval(const PeriodMatrix& tau, std::span<const Complex> z, double tol);

// |norm_an(z + m + tau n) - norm_an(z)|
double norm_invariance_check(const PeriodMatrix& tau, std::span<const Complex> z, std::span<const int> m,
                             std::span<const int> n, double tol);

}  // namespace arakelov::theta
