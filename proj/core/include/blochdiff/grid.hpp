#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "blochdiff/disk.hpp"

namespace blochdiff {

struct GridParams {
  /// J: radial levels r_j = 1 - 2^-j for j = 0..J.
  int levels = 14;
  /// c_ang: ring j carries ceil(c_ang / (1 - r_j)) points.
  double angular_density = 64.0;
  /// Local refinement rounds around the grid argmax.
  int refinement_depth = 8;
};

/// Dyadic radial rings with angular density proportional to 1/(1 - r).
/// The ring at r = 0 collapses to the single point 0.
class SamplingGrid {
 public:
  struct Ring {
    double radius;
    std::size_t nominal_count;  // ceil(c_ang / (1 - r))
    std::size_t count;          // points actually evaluated
    std::size_t offset;         // index of the first point in flat order
  };

  explicit SamplingGrid(GridParams params = {});

  [[nodiscard]] const GridParams& params() const noexcept { return params_; }
  [[nodiscard]] std::span<const Ring> rings() const noexcept { return rings_; }
  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] double outer_radius() const noexcept { return rings_.back().radius; }

  [[nodiscard]] static Complex point(const Ring& ring, std::size_t k) noexcept {
    if (ring.count == 1) return {ring.radius, 0.0};
    return std::polar(ring.radius, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                       static_cast<double>(ring.count));
  }

  /// Calls f(flat_index, ring_index, z) for every grid point, ring by ring.
  template <class F>
  void for_each_point(F&& f) const {
    for (std::size_t j = 0; j < rings_.size(); ++j) {
      const Ring& ring = rings_[j];
      for (std::size_t k = 0; k < ring.count; ++k) f(ring.offset + k, j, point(ring, k));
    }
  }

  /// Flat list of all grid points.
  [[nodiscard]] std::vector<Complex> points() const;

  /// Index of the ring whose radius is closest to r.
  [[nodiscard]] std::size_t nearest_ring(double r) const noexcept;

 private:
  GridParams params_;
  std::vector<Ring> rings_;
  std::size_t size_ = 0;
};

/// Result of a weighted-sup search.  `value` is attained at `argmax`, so it is
/// a lower bound for the true supremum.
struct SeminormEstimate {
  double value = 0.0;
  Complex argmax{0.0, 0.0};
  /// Cumulative maxima ring by ring (first ring_levels entries), then one
  /// entry per refinement round.  Non-decreasing; the last entry is `value`.
  std::vector<double> level_trace;
  std::size_t ring_levels = 0;
  /// Relative change between the last two refinement entries below 1e-4.
  bool converged = false;

  [[nodiscard]] std::span<const double> ring_trace() const noexcept {
    return std::span<const double>(level_trace).first(ring_levels);
  }
};

namespace detail {

/// Golden-section search for a maximum of g on [lo, hi].  Returns the best
/// abscissa seen among the evaluated points.
template <class G>
double golden_argmax(G&& g, double lo, double hi, int iterations, double& best_value) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double a = lo;
  double b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = g(x1);
  double f2 = g(x2);
  double best_x = f1 >= f2 ? x1 : x2;
  best_value = std::max(f1, f2);
  for (int i = 0; i < iterations; ++i) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = g(x1);
      if (f1 > best_value) { best_value = f1; best_x = x1; }
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = g(x2);
      if (f2 > best_value) { best_value = f2; best_x = x2; }
    }
  }
  return best_x;
}

inline bool relatively_stable(double previous, double current) noexcept {
  if (current == previous) return true;
  return std::abs(current - previous) < 1e-4 * std::abs(current);
}

}  // namespace detail

/// Grid phase for several objectives at once: values(flat_index, z, out)
/// writes one value per objective into `out`.  Non-finite values count as
/// +inf so that blow-ups are never hidden.
template <class Values>
std::vector<SeminormEstimate> scan_grid(const SamplingGrid& grid, std::size_t objectives,
                                        Values&& values) {
  std::vector<SeminormEstimate> est(objectives);
  std::vector<double> out(objectives, 0.0);
  bool first = true;
  for (const auto& ring : grid.rings()) {
    for (std::size_t k = 0; k < ring.count; ++k) {
      const Complex z = SamplingGrid::point(ring, k);
      values(ring.offset + k, z, std::span<double>(out));
      for (std::size_t i = 0; i < objectives; ++i) {
        double v = out[i];
        if (std::isnan(v)) v = INFINITY;
        if (first || v > est[i].value) {
          est[i].value = v;
          est[i].argmax = z;
        }
      }
      first = false;
    }
    for (auto& e : est) e.level_trace.push_back(e.value);
  }
  for (auto& e : est) e.ring_levels = e.level_trace.size();
  return est;
}

/// Considers an extra candidate point (e.g. a known extremal point).
inline void offer(SeminormEstimate& est, Complex z, double v) noexcept {
  if (v > est.value) {
    est.value = v;
    est.argmax = z;
  }
}

/// Local refinement: alternating golden-section searches in radius and angle
/// around the current argmax, with brackets halving each round.  Radii are
/// clamped to the outermost grid ring.  Only improvements are accepted.
template <class Value>
void refine(SeminormEstimate& est, const SamplingGrid& grid, Value&& value) {
  constexpr int kLineIterations = 48;
  const auto rings = grid.rings();
  const double r_max = grid.outer_radius();
  double r_b = std::abs(est.argmax);
  double t_b = std::arg(est.argmax);
  const std::size_t j = grid.nearest_ring(r_b);
  double dr = 0.0;
  if (j + 1 < rings.size()) dr = rings[j + 1].radius - rings[j].radius;
  if (j > 0) dr = std::max(dr, rings[j].radius - rings[j - 1].radius);
  double dt = rings[j].count > 1 ? 2.0 * std::numbers::pi / static_cast<double>(rings[j].count)
                                 : std::numbers::pi;
  if (j == 0 && rings.size() > 1) {
    dt = 2.0 * std::numbers::pi / static_cast<double>(rings[1].count);
  }

  if (std::isfinite(est.value)) {
    for (int round = 0; round < grid.params().refinement_depth; ++round) {
      {
        const double lo = std::max(0.0, r_b - dr);
        const double hi = std::min(r_max, r_b + dr);
        const double theta = t_b;
        double v = 0.0;
        const double r = detail::golden_argmax(
            [&](double x) {
              const double y = value(std::polar(x, theta));
              return std::isnan(y) ? -INFINITY : y;
            },
            lo, hi, kLineIterations, v);
        if (v > est.value) {
          const Complex z = std::polar(r, theta);
          const double exact = value(z);
          if (exact > est.value) {
            est.value = exact;
            est.argmax = z;
            r_b = r;
          }
        }
      }
      {
        const double radius = r_b;
        double v = 0.0;
        const double t = detail::golden_argmax(
            [&](double x) {
              const double y = value(std::polar(radius, x));
              return std::isnan(y) ? -INFINITY : y;
            },
            t_b - dt, t_b + dt, kLineIterations, v);
        if (v > est.value) {
          const Complex z = std::polar(radius, t);
          const double exact = value(z);
          if (exact > est.value) {
            est.value = exact;
            est.argmax = z;
            t_b = t;
          }
        }
      }
      est.level_trace.push_back(est.value);
      dr *= 0.5;
      dt *= 0.5;
    }
  }
  if (est.level_trace.empty() || est.level_trace.back() != est.value) {
    est.level_trace.push_back(est.value);
  }
  const auto n = est.level_trace.size();
  est.converged = n >= 2 && std::isfinite(est.value) &&
                  detail::relatively_stable(est.level_trace[n - 2], est.level_trace[n - 1]);
}

/// scan_grid + refine for a single objective given pointwise.
template <class Value>
SeminormEstimate maximize(const SamplingGrid& grid, Value&& value,
                          std::span<const Complex> seeds = {}) {
  auto est = scan_grid(grid, 1, [&](std::size_t, Complex z, std::span<double> out) {
    out[0] = value(z);
  });
  SeminormEstimate e = std::move(est.front());
  for (const Complex& s : seeds) offer(e, s, value(s));
  refine(e, grid, value);
  return e;
}

}  // namespace blochdiff
