#pragma once

#include <cstddef>
#include <limits>
#include <optional>

#include "risgeom/geometry.hpp"
#include "risgeom/realization.hpp"

namespace risgeom {

enum class OutcomeTag { direct, indirect, blind };

struct AssociationOutcome {
  OutcomeTag tag = OutcomeTag::blind;
  /// d^α for direct, (d₁ + d₂)^α / M² for indirect, +∞ when blind.
  double path_loss = std::numeric_limits<double>::infinity();
  std::optional<std::size_t> serving_bs;
  /// Index into Realization::blockages of the RIS host.
  std::optional<std::size_t> serving_ris;
};

/// True iff the closed segment pq meets no blockage other than `exclude`.
/// Uses the realization's grid index, or a linear scan below 1000 blockages.
bool los_clear(Point2 p, Point2 q, const Realization& world,
               std::optional<std::size_t> exclude = std::nullopt);

/// RIS on blockage `host` can relay between u and y: both lie strictly on
/// the coated side of the host line and both legs to the RIS (taken as the
/// host midpoint) are clear of every other blockage. Throws
/// std::invalid_argument if `host` carries no RIS.
bool indirect_feasible(Point2 u, Point2 y, std::size_t host, const Realization& world);

/// Minimum average path-loss association over LoS BSs (d^α) and, for BSs
/// without direct LoS, every feasible RIS ((d₁ + d₂)^α / M²).
AssociationOutcome associate_user(Point2 u, const Realization& world);

/// Length of the shortest direct or single-RIS path to any BS (RISs only for
/// NLoS BSs); +∞ when blind.
double shortest_path_length(Point2 u, const Realization& world);

/// Whether at least one RIS offers an indirect path between u and y
/// (the direct link is not examined).
bool indirect_path_exists(Point2 u, Point2 y, const Realization& world);

}  // namespace risgeom
