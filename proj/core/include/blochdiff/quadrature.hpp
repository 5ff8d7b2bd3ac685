#pragma once

#include <functional>

#include "blochdiff/disk.hpp"

namespace blochdiff {

struct QuadratureResult {
  Complex value;
  double error_estimate = 0.0;
  int subintervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) for a complex integrand on [lo, hi].
/// Bisects the worst interval until the summed Kronrod-Gauss error estimate
/// is <= abs_tol.  Throws QuadratureNonConvergence past max_subintervals.
QuadratureResult integrate_gk15(const std::function<Complex(double)>& f, double lo, double hi,
                                double abs_tol, int max_subintervals = 1 << 16);

/// Integral of f along the straight segment [0, z].
QuadratureResult integrate_segment(const std::function<Complex(Complex)>& f, Complex z,
                                   double abs_tol, int max_subintervals = 1 << 16);

}  // namespace blochdiff
