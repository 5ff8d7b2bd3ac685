#pragma once

#include <complex>

namespace blochdiff {

using Complex = std::complex<double>;

/// A point of the open unit disk.
///
/// Construction rejects |z| > 1 - kBoundaryMargin, so every DiskPoint can be
/// fed to the Möbius and weight formulas without hitting a pole.
class DiskPoint {
 public:
  static constexpr double kBoundaryMargin = 1e-12;

  DiskPoint() = default;
  explicit DiskPoint(Complex z);
  DiskPoint(double re, double im) : DiskPoint(Complex{re, im}) {}

  [[nodiscard]] Complex value() const noexcept { return z_; }
  [[nodiscard]] double modulus() const noexcept { return std::abs(z_); }
  [[nodiscard]] double norm() const noexcept { return std::norm(z_); }

  static bool admissible(Complex z) noexcept;

 private:
  Complex z_{0.0, 0.0};
};

/// sigma_lambda(z) = (lambda - z) / (1 - conj(lambda) z).
Complex mobius_sigma(DiskPoint lambda, DiskPoint z);

/// Pseudo-hyperbolic distance |z - w| / |1 - conj(w) z|, i.e. |sigma_w(z)|.
/// The expression is symmetric in (z, w) bit for bit.
double pseudo_hyperbolic(DiskPoint z, DiskPoint w);

/// (1 - |p|^2)(1 - |q|^2) / (1 - conj(p) q)^2.  |tau| = 1 - rho(p, q)^2.
Complex tau(DiskPoint p, DiskPoint q);

/// Principal-branch power tau(p, q)^alpha.  Re(1 - conj(p) q) > 0, so the
/// principal logarithm of (1 - conj(p) q) is continuous on D x D.
Complex tau_pow(DiskPoint p, DiskPoint q, double alpha);

/// |1 - tau^alpha(p, q)| / rho(p, q).  Throws DegenerateInput when
/// rho(p, q) < 1e-14.
double remark21_ratio(DiskPoint p, DiskPoint q, double alpha);

// Raw complex variants used by the grid sweeps.  Callers guarantee |p|,|q| < 1.
namespace detail {

/// Uses |1 - conj(q) p|^2 = |p - q|^2 + (1 - |p|^2)(1 - |q|^2), which avoids
/// the cancellation in 1 - conj(q) p near the boundary.
inline double pseudo_hyperbolic(Complex p, Complex q) noexcept {
  const double d = std::norm(p - q);
  return std::sqrt(d / (d + (1.0 - std::norm(p)) * (1.0 - std::norm(q))));
}

/// (1 - conj(a) z)^(-m) for a non-negative integer m, by repeated squaring.
Complex inverse_integer_power(Complex base, int m) noexcept;

/// base^(-2 alpha) on the principal branch, with an exact integer fast path
/// when 2 alpha is a small integer.  Re(base) > 0 is assumed.
Complex principal_inverse_power(Complex base, double two_alpha) noexcept;

/// z^n by repeated squaring.
Complex integer_power(Complex z, unsigned n) noexcept;

}  // namespace detail

}  // namespace blochdiff
