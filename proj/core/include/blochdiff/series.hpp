#pragma once

#include <span>
#include <vector>

#include "blochdiff/disk.hpp"

namespace blochdiff {

/// Truncated expansion of (1 - conj(a) u)^(-2 alpha) = sum_k c_k u^k with
/// c_k = Gamma(k + 2 alpha) / (k! Gamma(2 alpha)) conj(a)^k.
struct SeriesCoeffs {
  DiskPoint a;
  double alpha = 0.0;
  int order = 0;  // K; coefficients c_0..c_K are stored
  double eval_radius = 0.0;
  std::vector<Complex> coeffs;
  /// Bound on |sum_{k > K} c_k u^k| for every |u| <= eval_radius.
  double tail_bound = 0.0;

  /// Partial sum sum_{k <= K} c_k u^k (Horner).
  [[nodiscard]] Complex partial_sum(Complex u) const noexcept;
};

/// Real coefficients Gamma(k + s) / (k! Gamma(s)), k = 0..K, by the
/// recurrence c_{k+1} = c_k (k + s) / (k + 1).  No Gamma calls, so no overflow
/// for large k.
std::vector<double> rising_ratio_coefficients(double s, int order);

/// Ratio test from term K+1 on.  Throws TruncationInsufficient when the
/// geometric majorant does not converge (q >= 1).
SeriesCoeffs binom_series(DiskPoint a, double alpha, int order, double eval_radius);

/// Geometric-majorant bound for sum_{k > K} Gamma(k+s)/(k! Gamma(s)) x^k with
/// 0 <= x < 1.  Returns +inf when the majorant diverges.
double rising_series_tail(double s, int order, double x);

/// For each |a|: (1 - |a|^2)^alpha * sum_k Gamma(k+2 alpha)/(k! Gamma(2 alpha))
/// (k+1)^(-alpha) |a|^k.  The sum stops once terms are decreasing and drop
/// below 1e-16 of the running total.  Requires |a| <= 0.999.
std::vector<double> stirling_ratio_check(double alpha, std::span<const double> a_values);

}  // namespace blochdiff
