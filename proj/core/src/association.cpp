#include "risgeom/association.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "path_cost.hpp"

namespace risgeom {

namespace {

constexpr std::size_t kBruteForceBelow = 1000;

struct RisCandidate {
  double t;
  std::size_t host;
  Point2 z;
  int coated;
  int meta;
  std::int8_t los_to_user;  // -1 unknown
};

// RIS hosts whose coated side faces u, nearest first, with a lazy cache of
// the user-to-RIS LoS test.
class UserRisView {
 public:
  UserRisView(Point2 u, const Realization& world) : u_(u), world_(world) {
    cands_.reserve(world.ris.size() / 2 + 1);
    for (std::size_t host : world.ris) {
      const BlockageEntity& b = world.blockages[host];
      if (side_of_line(u, b.segment) != b.ris->coated_side) continue;
      const Point2 z = b.segment.midpoint;
      cands_.push_back({distance(u, z), host, z, b.ris->coated_side, b.ris->meta_count, -1});
    }
    std::sort(cands_.begin(), cands_.end(),
              [](const RisCandidate& a, const RisCandidate& b) { return a.t < b.t; });
  }

  std::vector<RisCandidate>& candidates() { return cands_; }

  bool user_leg_clear(RisCandidate& c) {
    if (c.los_to_user < 0) c.los_to_user = los_clear(u_, c.z, world_, c.host) ? 1 : 0;
    return c.los_to_user == 1;
  }

  // Serves y through c when y is on the coated side and the RIS-to-BS leg is clear.
  bool serves(RisCandidate& c, Point2 y) {
    const Segment& host = world_.blockages[c.host].segment;
    if (side_of_line(y, host) != c.coated) return false;
    return user_leg_clear(c) && los_clear(c.z, y, world_, c.host);
  }

 private:
  Point2 u_;
  const Realization& world_;
  std::vector<RisCandidate> cands_;
};

std::vector<std::pair<double, std::size_t>> bs_by_distance(Point2 u, const Realization& world) {
  std::vector<std::pair<double, std::size_t>> order;
  order.reserve(world.bs.size());
  for (std::size_t j = 0; j < world.bs.size(); ++j) order.emplace_back(distance(u, world.bs[j]), j);
  std::sort(order.begin(), order.end());
  return order;
}

detail::SearchResult search(Point2 u, const Realization& world, const detail::PathCost& cost) {
  detail::SearchResult best;
  const int k_max = world.params.meta_dist.max_k();
  UserRisView view(u, world);
  auto& cands = view.candidates();
  for (const auto& [r, j] : bs_by_distance(u, world)) {
    if (cost.floor(r, k_max) >= best.cost) break;
    const Point2 y = world.bs[j];
    if (r == 0.0 || los_clear(u, y, world)) {
      const double c = cost.direct(r);
      if (c < best.cost) best = {c, OutcomeTag::direct, j, std::nullopt};
      continue;
    }
    // A path via an RIS at distance t is at least 2t - r long.
    for (RisCandidate& cand : cands) {
      if (cand.t > 0.5 * (cost.max_length(best.cost, k_max) + r)) break;
      const double len = cand.t + distance(cand.z, y);
      const double c = cost.indirect(len, cand.meta);
      if (c >= best.cost) continue;
      if (view.serves(cand, y)) best = {c, OutcomeTag::indirect, j, cand.host};
    }
  }
  return best;
}

}  // namespace

bool los_clear(Point2 p, Point2 q, const Realization& world, std::optional<std::size_t> exclude) {
  if (world.blockages.size() < kBruteForceBelow) {
    for (std::size_t i = 0; i < world.blockages.size(); ++i) {
      if (exclude && *exclude == i) continue;
      const Segment& s = world.blockages[i].segment;
      if (segments_intersect(p, q, s.first(), s.second())) return false;
    }
    return true;
  }
  return !world.index.any_intersection(p, q, exclude);
}

bool indirect_feasible(Point2 u, Point2 y, std::size_t host, const Realization& world) {
  if (host >= world.blockages.size() || !world.blockages[host].ris) {
    throw std::invalid_argument("indirect_feasible: blockage carries no RIS");
  }
  const BlockageEntity& b = world.blockages[host];
  const int side = b.ris->coated_side;
  if (side_of_line(u, b.segment) != side || side_of_line(y, b.segment) != side) return false;
  const Point2 z = b.segment.midpoint;
  return los_clear(u, z, world, host) && los_clear(z, y, world, host);
}

AssociationOutcome associate_user(Point2 u, const Realization& world) {
  const detail::SearchResult s = search(u, world, {world.params.alpha, true});
  return {s.tag, s.cost, s.bs, s.ris};
}

double shortest_path_length(Point2 u, const Realization& world) {
  return search(u, world, {1.0, false}).cost;
}

bool indirect_path_exists(Point2 u, Point2 y, const Realization& world) {
  UserRisView view(u, world);
  for (RisCandidate& cand : view.candidates()) {
    if (view.serves(cand, y)) return true;
  }
  return false;
}

}  // namespace risgeom
