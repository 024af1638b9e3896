#include "risgeom/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace risgeom {

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

int orientation(Point2 a, Point2 b, Point2 c) { return sign(cross(b - a, c - a)); }

// c is known collinear with a-b; check that it lies within their bounding box.
bool on_segment(Point2 a, Point2 b, Point2 c) {
  return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
}

}  // namespace

Segment::Segment(Point2 mid, double half_len, double angle_rad)
    : midpoint(mid), half_length(half_len), angle(angle_rad) {
  if (!(half_len > 0.0) || !std::isfinite(half_len)) {
    throw std::invalid_argument("Segment: half_length must be positive and finite");
  }
}

Point2 Segment::first() const { return midpoint - half_length * direction(); }
Point2 Segment::second() const { return midpoint + half_length * direction(); }

void Window::validate() const {
  if (!(x_max > x_min) || !(y_max > y_min)) {
    throw std::invalid_argument("Window: requires x_max > x_min and y_max > y_min");
  }
  if (!(guard_margin >= 0.0) || !std::isfinite(guard_margin)) {
    throw std::invalid_argument("Window: guard_margin must be finite and >= 0");
  }
}

Window Window::expanded() const {
  return {x_min - guard_margin, x_max + guard_margin, y_min - guard_margin,
          y_max + guard_margin, 0.0};
}

Window Window::centered(Point2 c, double side, double guard_margin) {
  const double h = 0.5 * side;
  Window w{c.x - h, c.x + h, c.y - h, c.y + h, guard_margin};
  w.validate();
  return w;
}

bool segments_intersect(Point2 a1, Point2 a2, Point2 b1, Point2 b2) {
  if (a1 == a2 || b1 == b2) {
    throw std::invalid_argument("segments_intersect: degenerate zero-length segment");
  }
  const int o1 = orientation(a1, a2, b1);
  const int o2 = orientation(a1, a2, b2);
  const int o3 = orientation(b1, b2, a1);
  const int o4 = orientation(b1, b2, a2);

  if (o1 != o2 && o3 != o4) return true;

  if (o1 == 0 && on_segment(a1, a2, b1)) return true;
  if (o2 == 0 && on_segment(a1, a2, b2)) return true;
  if (o3 == 0 && on_segment(b1, b2, a1)) return true;
  if (o4 == 0 && on_segment(b1, b2, a2)) return true;
  return false;
}

bool segments_intersect(const Segment& a, const Segment& b) {
  return segments_intersect(a.first(), a.second(), b.first(), b.second());
}

int side_of_line(Point2 p, const Segment& host) {
  if (!(host.half_length > 0.0)) {
    throw std::invalid_argument("side_of_line: degenerate host segment");
  }
  const Point2 e1 = host.first();
  const Point2 e2 = host.second();
  return sign(cross(e2 - e1, p - e1));
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace risgeom
