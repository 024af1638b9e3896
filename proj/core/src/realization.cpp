#include "risgeom/realization.hpp"

#include <numbers>
#include <random>

namespace risgeom {

namespace {

enum Stream : std::uint64_t { kBsStream = 1, kMidpointStream = 2, kMarkStream = 3 };

}  // namespace

Realization build_realization(const NetworkParams& params, const Window& window, std::uint64_t seed,
                              bool with_bs) {
  params.validate();
  window.validate();
  Realization world;
  world.params = params;
  world.window = window;
  world.seed = seed;

  if (with_bs) {
    std::mt19937_64 bs_rng(mix_seed(seed, kBsStream));
    world.bs = sample_ppp(params.lambda_bs_m2(), window, bs_rng);
  }

  std::mt19937_64 mid_rng(mix_seed(seed, kMidpointStream));
  const std::vector<Point2> mids = sample_ppp(params.lambda_b_m2(), window, mid_rng);

  std::mt19937_64 mark_rng(mix_seed(seed, kMarkStream));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  world.blockages.reserve(mids.size());
  std::vector<Segment> segments;
  segments.reserve(mids.size());
  for (const Point2& m : mids) {
    const double len = params.len_min + (params.len_max - params.len_min) * unit(mark_rng);
    const double angle = 2.0 * std::numbers::pi * unit(mark_rng);
    const double ris_mark = unit(mark_rng);
    const double side_mark = unit(mark_rng);
    const double meta_mark = unit(mark_rng);
    BlockageEntity b{Segment(m, 0.5 * len, angle), std::nullopt};
    if (ris_mark < params.mu) {
      world.ris.push_back(world.blockages.size());
      b.ris = RisAttachment{side_mark < 0.5 ? -1 : 1, params.meta_dist.sample(meta_mark)};
    }
    segments.push_back(b.segment);
    world.blockages.push_back(b);
  }
  world.index = SegmentIndex(segments, params.len_max);
  return world;
}

}  // namespace risgeom
