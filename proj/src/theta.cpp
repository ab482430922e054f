#include "arakelov/theta.hpp"

#include "arakelov/error.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace arakelov::theta {

namespace {

constexpr double kPi = std::numbers::pi;

double shell_count(int g, int k) {
  return g == 1 ? 2.0 : static_cast<double>((2 * k + 1) * (2 * k + 1) - (2 * k - 1) * (2 * k - 1));
}

// Y^{-1} for the 1x1 or 2x2 symmetric matrix Y.
std::array<double, 4> inverse_im(const PeriodMatrix& tau) {
  if (tau.genus() == 1) return {1.0 / tau.im(0, 0), 0, 0, 0};
  const double det = tau.det_im();
  return {tau.im(1, 1) / det, -tau.im(0, 1) / det, -tau.im(1, 0) / det, tau.im(0, 0) / det};
}

}  // namespace

PeriodMatrix::PeriodMatrix(std::vector<Complex> entries, double pd_tol) : tau_(std::move(entries)) {
  if (tau_.size() == 1) {
    g_ = 1;
  } else if (tau_.size() == 4) {
    g_ = 2;
  } else {
    throw Error(Errc::InvalidArgument, "period matrix must be 1x1 or 2x2");
  }
  for (const Complex& c : tau_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw Error(Errc::InvalidArgument, "period matrix entries must be finite");
    }
  }
  if (g_ == 2) {
    const double scale = std::max({1.0, std::abs(tau_[1]), std::abs(tau_[2])});
    if (std::abs(tau_[1] - tau_[2]) > 1e-12 * scale) throw Error(Errc::InvalidArgument, "period matrix is not symmetric");
  }
  if (im(0, 0) <= pd_tol || (g_ == 2 && det_im() <= pd_tol)) {
    throw Error(Errc::NotPositiveDefinite, "imaginary part of the period matrix is not positive definite");
  }
}

double PeriodMatrix::det_im() const {
  return g_ == 1 ? im(0, 0) : im(0, 0) * im(1, 1) - im(0, 1) * im(1, 0);
}

double PeriodMatrix::min_eigenvalue_im() const {
  if (g_ == 1) return im(0, 0);
  const double a = im(0, 0), d = im(1, 1), b = 0.5 * (im(0, 1) + im(1, 0));
  const double mean = 0.5 * (a + d);
  const double radius = std::hypot(0.5 * (a - d), b);
  // Smaller root via the product of roots, avoiding cancellation.
  return (a * d - b * b) / (mean + radius);
}

double tail_bound(int g, double lambda, int R) {
  const int k = R + 1;
  auto shell = [&](int j) { return shell_count(g, j) * std::exp(-kPi * lambda * (j - 0.5) * (j - 0.5)); };
  const double first = shell(k);
  const double ratio = shell_count(g, k + 1) / shell_count(g, k) * std::exp(-kPi * lambda * 2.0 * k);
  if (ratio >= 1.0) return INFINITY;
  return first / (1.0 - ratio);
}

ThetaValue theta_eval(const PeriodMatrix& tau, std::span<const Complex> z, double tol) {
  const int g = tau.genus();
  if (static_cast<int>(z.size()) != g) throw Error(Errc::InvalidArgument, "z must have g entries");
  if (!(tol > 0)) throw Error(Errc::InvalidArgument, "tolerance must be > 0");

  const double lambda = tau.min_eigenvalue_im();
  const double det_factor = std::pow(tau.det_im(), 0.25);
  int R = 0;
  while (det_factor * tail_bound(g, lambda, R) >= tol) {
    if (++R > kMaxRadius) {
      throw Error(Errc::TailBoundFailure, "truncation radius would exceed " + std::to_string(kMaxRadius));
    }
  }

  const std::array<double, 4> yinv = inverse_im(tau);
  std::array<double, 2> y{}, x{}, c{};
  for (int i = 0; i < g; ++i) {
    y[i] = z[static_cast<std::size_t>(i)].imag();
    x[i] = z[static_cast<std::size_t>(i)].real();
  }
  double quad = 0;  // y^T Y^{-1} y
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) c[i] += yinv[static_cast<std::size_t>(i * 2 + j)] * y[j];
    quad += y[i] * c[i];
  }
  std::array<long, 2> m0{};
  for (int i = 0; i < g; ++i) m0[i] = std::lround(-c[i]);

  Complex sum = 0;
  const int R2 = g == 2 ? R : 0;
  for (int k0 = -R; k0 <= R; ++k0) {
    for (int k1 = -R2; k1 <= R2; ++k1) {
      const std::array<double, 2> m{static_cast<double>(m0[0] + k0), static_cast<double>(m0[1] + k1)};
      double re = 0, im = 0;
      for (int i = 0; i < g; ++i) {
        im += 2 * kPi * m[i] * x[i];
        for (int j = 0; j < g; ++j) {
          re -= kPi * (m[i] + c[i]) * tau.im(i, j) * (m[j] + c[j]);
          im += kPi * m[i] * tau(i, j).real() * m[j];
        }
      }
      sum += std::exp(re) * Complex(std::cos(im), std::sin(im));
    }
  }

  ThetaValue out;
  const double lift = std::exp(kPi * quad);
  out.value = sum * lift;
  out.norm_an = det_factor * std::abs(sum);
  out.truncation_radius = R;
  const double tail = tail_bound(g, lambda, R);
  out.error_estimate = det_factor * tail;
  out.value_error = tail * lift;
  return out;
}

double norm_invariance_check(const PeriodMatrix& tau, std::span<const Complex> z, std::span<const int> m,
                             std::span<const int> n, double tol) {
  const int g = tau.genus();
  if (static_cast<int>(z.size()) != g || static_cast<int>(m.size()) != g || static_cast<int>(n.size()) != g) {
    throw Error(Errc::InvalidArgument, "z, m and n must have g entries");
  }
  std::vector<Complex> shifted(z.begin(), z.end());
  for (int i = 0; i < g; ++i) {
    shifted[static_cast<std::size_t>(i)] += static_cast<double>(m[static_cast<std::size_t>(i)]);
    for (int j = 0; j < g; ++j) shifted[static_cast<std::size_t>(i)] += tau(i, j) * static_cast<double>(n[static_cast<std::size_t>(j)]);
  }
  const double a = theta_eval(tau, z, tol).norm_an;
  const double b = theta_eval(tau, shifted, tol).norm_an;
  return std::abs(a - b);
}

}  // namespace arakelov::theta
