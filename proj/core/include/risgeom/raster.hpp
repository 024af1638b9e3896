#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "risgeom/geometry.hpp"
#include "risgeom/realization.hpp"

namespace risgeom {

/// Blind/covered classification of cell centers over the inner window.
struct BlindMap {
  int width = 0;   // columns
  int height = 0;  // rows
  double resolution = 0.0;
  Window window;
  /// Row-major, row 0 at the top (largest y); 1 = covered, 0 = blind.
  std::vector<std::uint8_t> covered;

  std::size_t blind_count() const;
  /// Center of cell (row, col) in meters.
  Point2 cell_center(int row, int col) const;
};

/// Classifies each cell center as blind iff associate_user would return
/// Blind there. Grid size is floor(window extent / resolution) per axis.
/// Throws std::invalid_argument when resolution <= 0 or exceeds the window.
BlindMap raster_blind_map(const Realization& world, double resolution);

}  // namespace risgeom
