#include "blochdiff/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "blochdiff/errors.hpp"

namespace blochdiff {

Complex SeriesCoeffs::partial_sum(Complex u) const noexcept {
  Complex acc{0.0, 0.0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * u + *it;
  return acc;
}

std::vector<double> rising_ratio_coefficients(double s, int order) {
  std::vector<double> c(static_cast<std::size_t>(order) + 1);
  c[0] = 1.0;
  for (int k = 0; k < order; ++k) c[k + 1] = c[k] * (k + s) / (k + 1);
  return c;
}

double rising_series_tail(double s, int order, double x) {
  if (x == 0.0) return 0.0;
  // Successive-term ratios (k + s)/(k + 1) x for k >= K+1 are bounded by
  // x * max(1, (K+1+s)/(K+2)): decreasing to 1 when s >= 1, increasing to 1
  // when s < 1.
  const double q = x * std::max(1.0, (order + 1 + s) / (order + 2));
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  // |c_{K+1}| x^{K+1} in log space to survive large K.
  const double log_coeff =
      std::lgamma(order + 1 + s) - std::lgamma(s) - std::lgamma(order + 2.0);
  return std::exp(log_coeff + (order + 1) * std::log(x)) / (1.0 - q);
}

SeriesCoeffs binom_series(DiskPoint a, double alpha, int order, double eval_radius) {
  if (!(alpha > 0.0)) throw std::invalid_argument("binom_series: alpha must be positive");
  if (order < 1) throw std::invalid_argument("binom_series: order must be >= 1");
  if (!(eval_radius >= 0.0 && eval_radius < 1.0)) {
    throw std::invalid_argument("binom_series: eval_radius must lie in [0, 1)");
  }
  SeriesCoeffs s;
  s.a = a;
  s.alpha = alpha;
  s.order = order;
  s.eval_radius = eval_radius;
  s.coeffs.resize(static_cast<std::size_t>(order) + 1);
  const Complex abar = std::conj(a.value());
  const double two_alpha = 2.0 * alpha;
  s.coeffs[0] = {1.0, 0.0};
  for (int k = 0; k < order; ++k) {
    s.coeffs[k + 1] = s.coeffs[k] * ((k + two_alpha) / (k + 1)) * abar;
  }
  s.tail_bound = rising_series_tail(two_alpha, order, eval_radius * a.modulus());
  if (!std::isfinite(s.tail_bound)) {
    std::ostringstream os;
    os << "binom_series: order " << order << " too small for |a| r = "
       << eval_radius * a.modulus() << " (ratio bound >= 1)";
    throw TruncationInsufficient(os.str());
  }
  return s;
}

std::vector<double> stirling_ratio_check(double alpha, std::span<const double> a_values) {
  if (!(alpha > 0.0)) throw std::invalid_argument("stirling_ratio_check: alpha must be positive");
  constexpr long kMaxTerms = 50'000'000;
  std::vector<double> out;
  out.reserve(a_values.size());
  const double two_alpha = 2.0 * alpha;
  for (double a : a_values) {
    const double m = std::abs(a);
    if (m > 0.999) throw std::invalid_argument("stirling_ratio_check: |a| must be <= 0.999");
    double coeff = 1.0;  // Gamma(k+2a)/(k! Gamma(2a)) |a|^k
    double sum = 0.0;
    double prev_term = std::numeric_limits<double>::infinity();
    for (long k = 0; k < kMaxTerms; ++k) {
      const double term = coeff * std::pow(k + 1.0, -alpha);
      sum += term;
      if (term == 0.0) break;
      if (term < prev_term && term < 1e-16 * sum) break;
      prev_term = term;
      coeff *= (k + two_alpha) / (k + 1) * m;
    }
    out.push_back(sum * std::pow(1.0 - m * m, alpha));
  }
  return out;
}

}  // namespace blochdiff
