#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace risgeom {

/// Planar location in meters.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }

/// Line blockage: a zero-width segment given by midpoint, half length and
/// direction angle in [0, 2π).
struct Segment {
  Point2 midpoint;
  double half_length = 0.0;
  double angle = 0.0;

  Segment() = default;
  /// Throws std::invalid_argument when half_length <= 0 or is not finite.
  Segment(Point2 mid, double half_len, double angle_rad);

  /// Endpoint at midpoint - half_length·(cos, sin).
  Point2 first() const;
  /// Endpoint at midpoint + half_length·(cos, sin).
  Point2 second() const;
  Point2 direction() const { return {std::cos(angle), std::sin(angle)}; }
};

/// Axis-aligned measurement window. Points are sampled in the window grown by
/// guard_margin on every side; metrics are measured in the inner window.
struct Window {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  double guard_margin = 0.0;

  /// Throws std::invalid_argument on an empty extent or negative margin.
  void validate() const;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  Point2 center() const { return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)}; }

  /// The sampling region (inner window grown by guard_margin, margin 0).
  Window expanded() const;
  double expanded_area() const { return expanded().area(); }

  bool contains(Point2 p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }

  /// Square of side `side` centered on `c`.
  static Window centered(Point2 c, double side, double guard_margin);
};

/// Closed-segment intersection test on endpoint pairs. Touching endpoints and
/// collinear overlap count as intersecting. Throws std::invalid_argument if
/// either segment has coincident endpoints.
bool segments_intersect(Point2 a1, Point2 a2, Point2 b1, Point2 b2);
bool segments_intersect(const Segment& a, const Segment& b);

/// Sign of (e2 - e1) × (p - e1) for the host's endpoints ordered along its
/// direction angle: +1 left of the host line, -1 right, 0 on the line.
int side_of_line(Point2 p, const Segment& host);

/// Homogeneous Poisson point process on window.expanded(). `density` is in
/// points per square meter. Throws std::invalid_argument if density < 0.
template <class Rng>
std::vector<Point2> sample_ppp(double density, const Window& window, Rng& rng);

/// Counter-based seed mixing (splitmix64 finalizer) for deriving independent
/// generator streams from a master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace risgeom

#include "risgeom/detail/sample_ppp.ipp"
