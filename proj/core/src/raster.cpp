#include "risgeom/raster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "risgeom/association.hpp"

namespace risgeom {

std::size_t BlindMap::blind_count() const {
  return static_cast<std::size_t>(std::count(covered.begin(), covered.end(), std::uint8_t{0}));
}

Point2 BlindMap::cell_center(int row, int col) const {
  return {window.x_min + (col + 0.5) * resolution, window.y_max - (row + 0.5) * resolution};
}

namespace {

// A cell is covered iff some BS is in direct LoS, or some RIS faces the cell,
// sees it, and sees at least one BS on its coated side. If no BS is in direct
// LoS every BS is NLoS, so this matches associate_user's Blind test exactly;
// the per-RIS BS test does not depend on the cell and is cached.
class CoverageTester {
 public:
  explicit CoverageTester(const Realization& world) : world_(world) {
    const Point2 c = world.window.center();
    for (std::size_t j = 0; j < world.bs.size(); ++j) bs_.emplace_back(distance(c, world.bs[j]), j);
    std::sort(bs_.begin(), bs_.end());
    for (std::size_t host : world.ris) {
      ris_.emplace_back(distance(c, world.blockages[host].segment.midpoint), host);
    }
    std::sort(ris_.begin(), ris_.end());
    serves_some_bs_.assign(ris_.size(), -1);
  }

  bool covered(Point2 u) {
    for (const auto& [ignored, j] : bs_) {
      const Point2 y = world_.bs[j];
      if (y == u || los_clear(u, y, world_)) return true;
    }
    for (std::size_t i = 0; i < ris_.size(); ++i) {
      const std::size_t host = ris_[i].second;
      const BlockageEntity& b = world_.blockages[host];
      if (side_of_line(u, b.segment) != b.ris->coated_side) continue;
      if (!sees_a_bs(i)) continue;
      if (los_clear(u, b.segment.midpoint, world_, host)) return true;
    }
    return false;
  }

 private:
  bool sees_a_bs(std::size_t i) {
    if (serves_some_bs_[i] < 0) {
      const std::size_t host = ris_[i].second;
      const BlockageEntity& b = world_.blockages[host];
      const Point2 z = b.segment.midpoint;
      std::vector<std::pair<double, std::size_t>> order;
      order.reserve(world_.bs.size());
      for (std::size_t j = 0; j < world_.bs.size(); ++j) {
        if (side_of_line(world_.bs[j], b.segment) == b.ris->coated_side) {
          order.emplace_back(distance(z, world_.bs[j]), j);
        }
      }
      std::sort(order.begin(), order.end());
      serves_some_bs_[i] = 0;
      for (const auto& [ignored, j] : order) {
        if (los_clear(z, world_.bs[j], world_, host)) {
          serves_some_bs_[i] = 1;
          break;
        }
      }
    }
    return serves_some_bs_[i] == 1;
  }

  const Realization& world_;
  std::vector<std::pair<double, std::size_t>> bs_;
  std::vector<std::pair<double, std::size_t>> ris_;
  std::vector<signed char> serves_some_bs_;
};

}  // namespace

BlindMap raster_blind_map(const Realization& world, double resolution) {
  const Window& w = world.window;
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw std::invalid_argument("raster_blind_map: resolution must be > 0");
  }
  if (resolution > w.width() || resolution > w.height()) {
    throw std::invalid_argument("raster_blind_map: resolution exceeds the window size");
  }
  BlindMap map;
  map.resolution = resolution;
  map.window = w;
  map.width = static_cast<int>(std::floor(w.width() / resolution + 1e-9));
  map.height = static_cast<int>(std::floor(w.height() / resolution + 1e-9));
  map.covered.assign(static_cast<std::size_t>(map.width) * static_cast<std::size_t>(map.height), 0);
  CoverageTester tester(world);
  for (int row = 0; row < map.height; ++row) {
    for (int col = 0; col < map.width; ++col) {
      map.covered[static_cast<std::size_t>(row) * static_cast<std::size_t>(map.width) +
                  static_cast<std::size_t>(col)] = tester.covered(map.cell_center(row, col)) ? 1 : 0;
    }
  }
  return map;
}

}  // namespace risgeom
