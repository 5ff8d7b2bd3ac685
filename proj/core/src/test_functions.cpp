#include "blochdiff/test_functions.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "blochdiff/bloch.hpp"
#include "blochdiff/errors.hpp"
#include "blochdiff/series.hpp"

namespace blochdiff {

namespace {

constexpr double kSeriesTolerance = 1e-12;
constexpr int kInitialOrder = 32;
constexpr int kMaxOrder = 200'000;

double fa_scale(DiskPoint a, double alpha) { return std::pow(1.0 - a.norm(), alpha); }

// Upper bound on |f_a(z) - partial sum through order K|.
double fa_tail(DiskPoint a, double alpha, double zabs, int order) {
  const double tail = rising_series_tail(2.0 * alpha, order, a.modulus() * zabs);
  return fa_scale(a, alpha) * zabs * tail / (order + 2.0);
}

// Upper bound on the truncation error of the g_a correction sum through K.
double ga_correction_tail(DiskPoint a, double alpha, double zabs, int order) {
  // S_k = Gamma(k - 1 + 2 alpha + 1) / ((k-1)! Gamma(2 alpha + 1)).
  const double tail = rising_series_tail(2.0 * alpha + 1.0, order - 1, a.modulus() * zabs);
  return std::pow(1.0 - a.norm(), alpha + 1.0) * zabs * zabs * tail / (order + 2.0);
}

template <class Tail>
int choose_order(std::optional<int> requested, Tail&& tail, const char* what) {
  if (requested) {
    if (*requested < 1) throw std::invalid_argument(std::string(what) + ": order must be >= 1");
    const double t = tail(*requested);
    if (!(t < kSeriesTolerance)) {
      std::ostringstream os;
      os << what << ": order " << *requested << " leaves tail bound " << t << " >= 1e-12";
      throw TruncationInsufficient(os.str());
    }
    return *requested;
  }
  for (int k = kInitialOrder; k <= kMaxOrder; k *= 2) {
    if (tail(k) < kSeriesTolerance) return k;
  }
  if (tail(kMaxOrder) < kSeriesTolerance) return kMaxOrder;
  throw TruncationInsufficient(std::string(what) + ": no order up to 2e5 reaches 1e-12");
}

Complex fa_partial(DiskPoint a, double alpha, Complex z, int order) {
  const Complex x = std::conj(a.value()) * z;
  const double two_alpha = 2.0 * alpha;
  double coeff = 1.0;
  Complex power = z;  // (conj(a) z)^k z
  Complex sum{0.0, 0.0};
  for (int k = 0; k <= order; ++k) {
    sum += coeff * power / (k + 1.0);
    coeff *= (k + two_alpha) / (k + 1);
    power *= x;
  }
  return fa_scale(a, alpha) * sum;
}

}  // namespace

TestFunction::TestFunction(Kind kind, DiskPoint a, double alpha)
    : kind_(kind), a_(a), alpha_(alpha), scale_(0.0) {
  if (!(alpha > 0.0)) throw std::invalid_argument("TestFunction: alpha must be positive");
  scale_ = fa_scale(a, alpha);
}

Complex TestFunction::deriv(Complex z) const noexcept {
  const Complex a = a_.value();
  const Complex d = 1.0 - std::conj(a) * z;
  const Complex f = scale_ * detail::principal_inverse_power(d, 2.0 * alpha_);
  if (kind_ == Kind::kFa) return f;
  return f * ((a - z) / d);
}

Complex TestFunction::value(DiskPoint z, std::optional<int> order) const {
  return kind_ == Kind::kFa ? fa_eval(a_, alpha_, z, order) : ga_eval(a_, alpha_, z, order);
}

Complex fa_deriv(DiskPoint a, double alpha, DiskPoint z) {
  return TestFunction(TestFunction::Kind::kFa, a, alpha).deriv(z.value());
}

Complex ga_deriv(DiskPoint a, double alpha, DiskPoint z) {
  return TestFunction(TestFunction::Kind::kGa, a, alpha).deriv(z.value());
}

Complex fa_eval(DiskPoint a, double alpha, DiskPoint z, std::optional<int> order) {
  if (!(alpha > 0.0)) throw std::invalid_argument("fa_eval: alpha must be positive");
  const double zabs = z.modulus();
  const int k = choose_order(order, [&](int m) { return fa_tail(a, alpha, zabs, m); }, "fa_eval");
  return fa_partial(a, alpha, z.value(), k);
}

Complex ga_eval(DiskPoint a, double alpha, DiskPoint z, std::optional<int> order) {
  if (!(alpha > 0.0)) throw std::invalid_argument("ga_eval: alpha must be positive");
  const double zabs = z.modulus();
  const int k = choose_order(
      order,
      [&](int m) {
        return a.modulus() * fa_tail(a, alpha, zabs, m) + ga_correction_tail(a, alpha, zabs, m);
      },
      "ga_eval");
  const Complex zv = z.value();
  const Complex abar = std::conj(a.value());
  const double two_alpha = 2.0 * alpha;
  // Correction sum over m = 1..K of S_m conj(a)^(m-1) z^(m+1) / (m+1).
  double coeff = 1.0;         // Gamma(l + 2 alpha) / (l! Gamma(2 alpha)), l = m - 1
  double partial = 0.0;       // S_m
  Complex power = zv * zv;    // conj(a)^(m-1) z^(m+1)
  Complex correction{0.0, 0.0};
  for (int m = 1; m <= k; ++m) {
    partial += coeff;
    correction += partial * power / (m + 1.0);
    coeff *= (m - 1 + two_alpha) / m;
    power *= abar * zv;
  }
  return a.value() * fa_partial(a, alpha, zv, k) -
         std::pow(1.0 - a.norm(), alpha + 1.0) * correction;
}

SeminormEstimate unit_norm_check(DiskPoint a, double alpha, const SamplingGrid& grid) {
  if (a.modulus() > 0.999) throw std::invalid_argument("unit_norm_check: |a| must be <= 0.999");
  const TestFunction fa(TestFunction::Kind::kFa, a, alpha);
  const Complex seed[] = {a.value()};
  return bloch_seminorm([&](Complex z) { return fa.deriv(z); }, alpha, grid, seed);
}

double ga_seminorm_exact(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("ga_seminorm_exact: alpha must be positive");
  const double s = 1.0 + 2.0 * alpha;
  return std::pow(2.0 * alpha / s, alpha) / std::sqrt(s);
}

}  // namespace blochdiff
