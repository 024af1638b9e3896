#include "risgeom/segment_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace risgeom {

namespace {

// Liang-Barsky clip of p->q against [xmin,xmax]x[ymin,ymax].
bool clip(Point2& p, Point2& q, double xmin, double xmax, double ymin, double ymax) {
  double t0 = 0.0;
  double t1 = 1.0;
  const double dx = q.x - p.x;
  const double dy = q.y - p.y;
  const double pk[4] = {-dx, dx, -dy, dy};
  const double qk[4] = {p.x - xmin, xmax - p.x, p.y - ymin, ymax - p.y};
  for (int i = 0; i < 4; ++i) {
    if (pk[i] == 0.0) {
      if (qk[i] < 0.0) return false;
      continue;
    }
    const double r = qk[i] / pk[i];
    if (pk[i] < 0.0) {
      if (r > t1) return false;
      t0 = std::max(t0, r);
    } else {
      if (r < t0) return false;
      t1 = std::min(t1, r);
    }
  }
  const Point2 a{p.x + t0 * dx, p.y + t0 * dy};
  const Point2 b{p.x + t1 * dx, p.y + t1 * dy};
  p = a;
  q = b;
  return true;
}

}  // namespace

SegmentIndex::SegmentIndex(std::span<const Segment> segments, double cell_size) {
  if (!(cell_size > 0.0)) throw std::invalid_argument("SegmentIndex: cell_size must be > 0");
  segments_.reserve(segments.size());
  double xmin = std::numeric_limits<double>::infinity();
  double ymin = xmin;
  double xmax = -xmin;
  double ymax = -xmin;
  for (const auto& s : segments) {
    const Point2 a = s.first();
    const Point2 b = s.second();
    segments_.emplace_back(a, b);
    xmin = std::min({xmin, a.x, b.x});
    xmax = std::max({xmax, a.x, b.x});
    ymin = std::min({ymin, a.y, b.y});
    ymax = std::max({ymax, a.y, b.y});
  }
  if (segments_.empty()) return;

  cell_ = cell_size;
  x0_ = xmin;
  y0_ = ymin;
  nx_ = std::max(1, static_cast<int>(std::ceil((xmax - xmin) / cell_)));
  ny_ = std::max(1, static_cast<int>(std::ceil((ymax - ymin) / cell_)));
  // Keep the grid bounded; coarser cells only cost extra candidate tests.
  while (static_cast<double>(nx_) * ny_ > 4.0e7) {
    cell_ *= 2.0;
    nx_ = std::max(1, static_cast<int>(std::ceil((xmax - xmin) / cell_)));
    ny_ = std::max(1, static_cast<int>(std::ceil((ymax - ymin) / cell_)));
  }

  const std::size_t ncells = static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
  std::vector<std::uint32_t> counts(ncells + 1, 0);
  auto for_cells = [&](std::size_t i, auto&& fn) {
    const auto& [a, b] = segments_[i];
    const int ix0 = clamp_x(std::min(a.x, b.x));
    const int ix1 = clamp_x(std::max(a.x, b.x));
    const int iy0 = clamp_y(std::min(a.y, b.y));
    const int iy1 = clamp_y(std::max(a.y, b.y));
    for (int iy = iy0; iy <= iy1; ++iy)
      for (int ix = ix0; ix <= ix1; ++ix) fn(cell_of(ix, iy));
  };
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    for_cells(i, [&](std::size_t c) { ++counts[c + 1]; });
  }
  for (std::size_t c = 0; c < ncells; ++c) counts[c + 1] += counts[c];
  cell_start_ = counts;
  cell_items_.resize(cell_start_.back());
  std::vector<std::uint32_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    for_cells(i, [&](std::size_t c) { cell_items_[fill[c]++] = static_cast<std::uint32_t>(i); });
  }
}

int SegmentIndex::clamp_x(double x) const {
  const int i = static_cast<int>(std::floor((x - x0_) / cell_));
  return std::clamp(i, 0, nx_ - 1);
}

int SegmentIndex::clamp_y(double y) const {
  const int i = static_cast<int>(std::floor((y - y0_) / cell_));
  return std::clamp(i, 0, ny_ - 1);
}

bool SegmentIndex::any_intersection(Point2 p, Point2 q, std::optional<std::size_t> exclude) const {
  if (segments_.empty()) return false;
  if (p == q) throw std::invalid_argument("SegmentIndex: degenerate probe segment");
  const Point2 p_orig = p;
  const Point2 q_orig = q;
  if (!clip(p, q, x0_, x0_ + nx_ * cell_, y0_, y0_ + ny_ * cell_)) return false;

  auto test_cell = [&](int ix, int iy) {
    const std::size_t c = cell_of(ix, iy);
    for (std::uint32_t k = cell_start_[c]; k < cell_start_[c + 1]; ++k) {
      const std::uint32_t id = cell_items_[k];
      if (exclude && *exclude == id) continue;
      const auto& [a, b] = segments_[id];
      if (segments_intersect(p_orig, q_orig, a, b)) return true;
    }
    return false;
  };

  int ix = clamp_x(p.x);
  int iy = clamp_y(p.y);
  const int ix_end = clamp_x(q.x);
  const int iy_end = clamp_y(q.y);
  const double dx = q.x - p.x;
  const double dy = q.y - p.y;
  const int step_x = (dx > 0.0) - (dx < 0.0);
  const int step_y = (dy > 0.0) - (dy < 0.0);
  const double inf = std::numeric_limits<double>::infinity();
  double t_max_x = inf;
  double t_max_y = inf;
  double t_delta_x = inf;
  double t_delta_y = inf;
  if (step_x != 0) {
    const double edge = x0_ + (ix + (step_x > 0 ? 1 : 0)) * cell_;
    t_max_x = (edge - p.x) / dx;
    t_delta_x = cell_ / std::abs(dx);
  }
  if (step_y != 0) {
    const double edge = y0_ + (iy + (step_y > 0 ? 1 : 0)) * cell_;
    t_max_y = (edge - p.y) / dy;
    t_delta_y = cell_ / std::abs(dy);
  }

  if (test_cell(ix, iy)) return true;
  while (ix != ix_end || iy != iy_end) {
    const bool move_x = (iy == iy_end) || (ix != ix_end && t_max_x < t_max_y);
    if (move_x) {
      ix += step_x;
      t_max_x += t_delta_x;
    } else {
      iy += step_y;
      t_max_y += t_delta_y;
    }
    if (test_cell(ix, iy)) return true;
  }
  return false;
}

}  // namespace risgeom
