#include "blochdiff/quadrature.hpp"

#include <array>
#include <queue>
#include <sstream>
#include <vector>

#include "blochdiff/errors.hpp"

namespace blochdiff {

namespace {

// Nodes and weights of the 15-point Kronrod rule and its embedded 7-point
// Gauss rule on [-1, 1].
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  Complex value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gk15(const std::function<Complex(double)>& f, double lo, double hi) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  const Complex fc = f(mid);
  Complex kronrod = fc * kKronrod[7];
  Complex gauss = fc * kGauss[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kNodes[i];
    const Complex pair = f(mid - dx) + f(mid + dx);
    kronrod += kKronrod[i] * pair;
    if (i % 2 == 1) gauss += kGauss[i / 2] * pair;
  }
  return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate_gk15(const std::function<Complex(double)>& f, double lo, double hi,
                                double abs_tol, int max_subintervals) {
  std::priority_queue<Panel> panels;
  Panel first = gk15(f, lo, hi);
  Complex total = first.value;
  double error = first.error;
  panels.push(first);
  int count = 1;
  while (error > abs_tol) {
    if (count >= max_subintervals) {
      std::ostringstream os;
      os << "adaptive quadrature stalled at error " << error << " > " << abs_tol << " after "
         << count << " subintervals";
      throw QuadratureNonConvergence(os.str());
    }
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Panel left = gk15(f, worst.lo, mid);
    const Panel right = gk15(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
    // Guard the running sums against drift by resumming periodically.
    if (count % 256 == 0) {
      auto copy = panels;
      total = {0.0, 0.0};
      error = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        error += copy.top().error;
        copy.pop();
      }
    }
  }
  return {total, error, count};
}

QuadratureResult integrate_segment(const std::function<Complex(Complex)>& f, Complex z,
                                   double abs_tol, int max_subintervals) {
  auto along = [&](double t) { return f(t * z) * z; };
  return integrate_gk15(along, 0.0, 1.0, abs_tol, max_subintervals);
}

}  // namespace blochdiff
