#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>

#include "risgeom/association.hpp"

namespace risgeom::detail {

// Ranking of candidate paths: length^exponent, divided by M² when the
// meta-surface gain applies to indirect paths. exponent = α with gain gives
// the association path-loss; exponent = 1 without gain the path length.
struct PathCost {
  double exponent = 1.0;
  bool meta_gain = false;

  double direct(double len) const { return std::pow(len, exponent); }
  double indirect(double len, int m) const {
    const double c = std::pow(len, exponent);
    return meta_gain ? c / (static_cast<double>(m) * m) : c;
  }
  // Lowest cost reachable by any path of length >= len.
  double floor(double len, int k_max) const { return indirect(len, meta_gain ? k_max : 1); }
  // Longest path whose cost can still fall below `best`.
  double max_length(double best, int k_max) const {
    if (std::isinf(best)) return best;
    const double g = meta_gain ? static_cast<double>(k_max) * k_max : 1.0;
    return std::pow(best * g, 1.0 / exponent);
  }
};

struct SearchResult {
  double cost = std::numeric_limits<double>::infinity();
  OutcomeTag tag = OutcomeTag::blind;
  std::optional<std::size_t> bs;
  std::optional<std::size_t> ris;
};

}  // namespace risgeom::detail
