#include "blochdiff/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace blochdiff {

namespace {

double weight(Complex z, double alpha) { return std::pow(1.0 - std::norm(z), alpha); }

}  // namespace

double weighted_modulus(const SymbolExpr& f, DiskPoint z, double alpha) {
  return weight(z.value(), alpha) * std::abs(f.deriv_at(z.value()));
}

double weighted_modulus(const DerivativeFn& fprime, DiskPoint z, double alpha) {
  return weight(z.value(), alpha) * std::abs(fprime(z.value()));
}

SeminormEstimate bloch_seminorm(const SymbolExpr& f, double alpha, const SamplingGrid& grid) {
  return maximize(grid, [&](Complex z) {
    return weight(z, alpha) * std::abs(f.deriv_at(z));
  });
}

SeminormEstimate bloch_seminorm(const DerivativeFn& fprime, double alpha,
                                const SamplingGrid& grid, std::span<const Complex> seeds) {
  return maximize(
      grid, [&](Complex z) { return weight(z, alpha) * std::abs(fprime(z)); }, seeds);
}

double bloch_norm(const SymbolExpr& f, double alpha, const SamplingGrid& grid) {
  return std::abs(f.value_at(0.0)) + bloch_seminorm(f, alpha, grid).value;
}

double monomial_seminorm_exact(unsigned n, double alpha) {
  if (n == 0) throw std::invalid_argument("monomial_seminorm_exact: n must be >= 1");
  if (n == 1) return 1.0;
  const double m = n - 1.0;
  const double r2 = m / (m + 2.0 * alpha);
  // n r^(n-1) (1 - r^2)^alpha in log space; r^(n-1) = (r^2)^((n-1)/2).
  return std::exp(std::log(static_cast<double>(n)) + 0.5 * m * std::log(r2) +
                  alpha * std::log(2.0 * alpha / (m + 2.0 * alpha)));
}

LittleBlochResult little_bloch_test(const DerivativeFn& fprime, double alpha,
                                    std::span<const double> r_schedule, double tol) {
  for (std::size_t i = 0; i < r_schedule.size(); ++i) {
    if (!(r_schedule[i] >= 0.0 && r_schedule[i] < 1.0)) {
      throw std::invalid_argument("little_bloch_test: radii must lie in [0, 1)");
    }
    if (i > 0 && !(r_schedule[i] > r_schedule[i - 1])) {
      throw std::invalid_argument("little_bloch_test: radii must increase");
    }
  }
  LittleBlochResult result;
  for (double r : r_schedule) {
    const double w = std::pow(1.0 - r * r, alpha);
    const auto count = static_cast<std::size_t>(
        std::clamp(std::ceil(64.0 / (1.0 - r)), 64.0, 65536.0));
    auto on_circle = [&](double theta) { return w * std::abs(fprime(std::polar(r, theta))); };
    double best = -1.0;
    double best_theta = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / count;
      const double v = on_circle(theta);
      if (v > best) {
        best = v;
        best_theta = theta;
      }
    }
    const double step = 2.0 * std::numbers::pi / count;
    double refined = 0.0;
    const double theta = detail::golden_argmax(on_circle, best_theta - step, best_theta + step,
                                               48, refined);
    if (refined > best) {
      best = refined;
      best_theta = theta;
    }
    result.trace.push_back(best);
    result.argmax.push_back(std::polar(r, best_theta));
  }
  const auto& t = result.trace;
  const std::size_t n = t.size();
  bool decaying = n > 0 && t.back() < tol;
  for (std::size_t i = n >= 3 ? n - 2 : 1; decaying && i < n; ++i) {
    decaying = t[i] <= t[i - 1];
  }
  result.in_little_bloch = decaying;
  return result;
}

LittleBlochResult little_bloch_test(const SymbolExpr& f, double alpha,
                                    std::span<const double> r_schedule, double tol) {
  return little_bloch_test([&](Complex z) { return f.deriv_at(z); }, alpha, r_schedule, tol);
}

}  // namespace blochdiff
