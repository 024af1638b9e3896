#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "risgeom/geometry.hpp"

namespace risgeom {

// Uniform-grid bucket index over a fixed set of segments. Each segment is
// registered in every cell its bounding box overlaps; a query walks the
// cells crossed by the probe segment. Immutable after construction, so
// concurrent queries are fine. A segment spanning several cells may be
// tested more than once per query.
class SegmentIndex {
 public:
  SegmentIndex() = default;

  /// `cell_size` should be about the longest segment length. The grid covers
  /// the bounding box of all segments.
  SegmentIndex(std::span<const Segment> segments, double cell_size);

  /// True if the closed segment pq intersects any indexed segment other than
  /// `exclude`.
  bool any_intersection(Point2 p, Point2 q, std::optional<std::size_t> exclude) const;

  std::size_t size() const { return segments_.size(); }

 private:
  std::size_t cell_of(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx_) +
           static_cast<std::size_t>(ix);
  }
  int clamp_x(double x) const;
  int clamp_y(double y) const;

  std::vector<std::pair<Point2, Point2>> segments_;
  double x0_ = 0.0;
  double y0_ = 0.0;
  double cell_ = 1.0;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<std::uint32_t> cell_start_;
  std::vector<std::uint32_t> cell_items_;
};

}  // namespace risgeom
