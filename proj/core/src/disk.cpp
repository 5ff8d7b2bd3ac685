#include "blochdiff/disk.hpp"

#include <cmath>
#include <sstream>

#include "blochdiff/errors.hpp"

namespace blochdiff {

bool DiskPoint::admissible(Complex z) noexcept {
  const double m = std::abs(z);
  return std::isfinite(m) && m <= 1.0 - kBoundaryMargin;
}

DiskPoint::DiskPoint(Complex z) : z_(z) {
  if (!admissible(z)) {
    std::ostringstream os;
    os.precision(17);
    os << "point " << z << " is not inside the unit disk (|z| = " << std::abs(z)
       << ")";
    throw DomainError(os.str());
  }
}

Complex mobius_sigma(DiskPoint lambda, DiskPoint z) {
  const Complex l = lambda.value();
  const Complex w = z.value();
  return (l - w) / (1.0 - std::conj(l) * w);
}

double pseudo_hyperbolic(DiskPoint z, DiskPoint w) {
  return detail::pseudo_hyperbolic(z.value(), w.value());
}

Complex tau(DiskPoint p, DiskPoint q) {
  const Complex d = 1.0 - std::conj(p.value()) * q.value();
  return (1.0 - p.norm()) * (1.0 - q.norm()) / (d * d);
}

Complex tau_pow(DiskPoint p, DiskPoint q, double alpha) {
  const Complex d = 1.0 - std::conj(p.value()) * q.value();
  const double log_modulus = std::log1p(-p.norm()) + std::log1p(-q.norm());
  return std::exp(Complex{alpha * log_modulus, 0.0} - 2.0 * alpha * std::log(d));
}

double remark21_ratio(DiskPoint p, DiskPoint q, double alpha) {
  const double rho = pseudo_hyperbolic(p, q);
  if (rho < 1e-14) {
    throw DegenerateInput("remark21_ratio: points coincide (rho < 1e-14)");
  }
  return std::abs(1.0 - tau_pow(p, q, alpha)) / rho;
}

namespace detail {

Complex integer_power(Complex z, unsigned n) noexcept {
  Complex result{1.0, 0.0};
  while (n != 0) {
    if (n & 1U) result *= z;
    n >>= 1U;
    if (n != 0) z *= z;
  }
  return result;
}

Complex inverse_integer_power(Complex base, int m) noexcept {
  return 1.0 / integer_power(base, static_cast<unsigned>(m));
}

Complex principal_inverse_power(Complex base, double two_alpha) noexcept {
  const double rounded = std::nearbyint(two_alpha);
  if (rounded == two_alpha && rounded >= 0.0 && rounded <= 16.0) {
    return inverse_integer_power(base, static_cast<int>(rounded));
  }
  return std::exp(-two_alpha * std::log(base));
}

}  // namespace detail

}  // namespace blochdiff
