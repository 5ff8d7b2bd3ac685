#include "blochdiff/grid.hpp"

#include <stdexcept>

namespace blochdiff {

SamplingGrid::SamplingGrid(GridParams params) : params_(params) {
  if (params_.levels < 4) throw std::invalid_argument("SamplingGrid: need at least 4 levels");
  if (params_.levels > 36) throw std::invalid_argument("SamplingGrid: at most 36 levels");
  if (!(params_.angular_density >= 1.0)) {
    throw std::invalid_argument("SamplingGrid: angular density must be >= 1");
  }
  if (params_.refinement_depth < 0) {
    throw std::invalid_argument("SamplingGrid: refinement depth must be >= 0");
  }
  rings_.reserve(static_cast<std::size_t>(params_.levels) + 1);
  for (int j = 0; j <= params_.levels; ++j) {
    const double gap = std::ldexp(1.0, -j);
    const double r = 1.0 - gap;
    const auto nominal = static_cast<std::size_t>(std::ceil(params_.angular_density / gap));
    const std::size_t count = j == 0 ? 1 : nominal;
    rings_.push_back({r, nominal, count, size_});
    size_ += count;
  }
}

std::vector<Complex> SamplingGrid::points() const {
  std::vector<Complex> out(size_);
  for_each_point([&](std::size_t i, std::size_t, Complex z) { out[i] = z; });
  return out;
}

std::size_t SamplingGrid::nearest_ring(double r) const noexcept {
  std::size_t best = 0;
  double best_gap = INFINITY;
  for (std::size_t j = 0; j < rings_.size(); ++j) {
    const double gap = std::abs(rings_[j].radius - r);
    if (gap < best_gap) {
      best_gap = gap;
      best = j;
    }
  }
  return best;
}

}  // namespace blochdiff
