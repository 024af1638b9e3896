#pragma once

#include <stdexcept>

namespace risgeom {

template <class Rng>
std::vector<Point2> sample_ppp(double density, const Window& window, Rng& rng) {
  if (!(density >= 0.0) || !std::isfinite(density)) {
    throw std::invalid_argument("sample_ppp: density must be finite and >= 0");
  }
  window.validate();
  const Window region = window.expanded();
  std::vector<Point2> points;
  if (density == 0.0) return points;

  std::poisson_distribution<std::int64_t> count_dist(density * region.area());
  const auto n = count_dist(rng);
  points.reserve(static_cast<std::size_t>(n));
  std::uniform_real_distribution<double> ux(region.x_min, region.x_max);
  std::uniform_real_distribution<double> uy(region.y_min, region.y_max);
  for (std::int64_t i = 0; i < n; ++i) {
    const double x = ux(rng);
    const double y = uy(rng);
    points.push_back({x, y});
  }
  return points;
}

}  // namespace risgeom
