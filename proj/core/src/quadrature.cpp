#include "risgeom/quadrature.hpp"

#include <cmath>

namespace risgeom {

double truncation_radius(double beta, double tail_tol) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument(
        "truncation_radius: beta must be > 0 (no exponential decay to truncate)");
  }
  if (!(tail_tol > 0.0) || !(tail_tol < 1.0)) {
    throw std::invalid_argument("truncation_radius: tail_tol must lie in (0, 1)");
  }
  // Work in u = βR; (u + 1)e^{-u} falls monotonically from 1 at u = 0.
  auto tail = [](double u) { return (u + 1.0) * std::exp(-u); };
  double lo = 0.0;
  double hi = 1.0;
  while (tail(hi) > tail_tol) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (tail(mid) > tail_tol) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi / beta;
}

}  // namespace risgeom
