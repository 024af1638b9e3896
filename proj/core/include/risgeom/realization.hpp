#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "risgeom/geometry.hpp"
#include "risgeom/params.hpp"
#include "risgeom/segment_index.hpp"

namespace risgeom {

struct RisAttachment {
  int coated_side = 1;  // side_of_line sign of the coated half-plane
  int meta_count = 1;
};

struct BlockageEntity {
  Segment segment;
  std::optional<RisAttachment> ris;
};

/// One sampled world on window.expanded().
struct Realization {
  NetworkParams params;
  Window window;
  std::uint64_t seed = 0;
  std::vector<Point2> bs;
  std::vector<BlockageEntity> blockages;
  /// Indices into `blockages` of the RIS-carrying entries, ascending.
  std::vector<std::size_t> ris;
  /// Grid over every blockage segment, cell size len_max.
  SegmentIndex index;
};

/// Samples BSs ~ PPP(λ_BS) and blockage midpoints ~ PPP(λ_b) on the expanded
/// window, then per blockage: length ~ U[len_min, len_max], angle ~ U[0, 2π),
/// an RIS mark u ~ U[0, 1) with an RIS attached iff u < μ, coated side ±1 and
/// meta-surface count from meta_dist. Every mark is drawn whether or not it
/// is used, so two calls differing only in μ share all geometry and their RIS
/// sets are nested. With `with_bs` false the BS list is left empty.
Realization build_realization(const NetworkParams& params, const Window& window, std::uint64_t seed,
                              bool with_bs = true);

}  // namespace risgeom
