#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "risgeom/analytic.hpp"
#include "risgeom/association.hpp"
#include "risgeom/estimate.hpp"
#include "risgeom/realization.hpp"

using namespace risgeom;

namespace {

constexpr double kPi = std::numbers::pi;

NetworkParams scenario(double lambda_b, double mu) {
  NetworkParams p;
  p.lambda_b = lambda_b;
  p.mu = mu;
  return p;
}

// Hand-built world; RIS-carrying entries are listed in `ris`.
Realization make_world(std::vector<Point2> bs, std::vector<BlockageEntity> blocks, double alpha = 3.0) {
  Realization w;
  w.params.lambda_b = 1.0;
  w.params.alpha = alpha;
  w.window = Window::centered({0, 0}, 1000, 0);
  w.bs = std::move(bs);
  w.blockages = std::move(blocks);
  std::vector<Segment> segs;
  for (std::size_t i = 0; i < w.blockages.size(); ++i) {
    segs.push_back(w.blockages[i].segment);
    if (w.blockages[i].ris) w.ris.push_back(i);
  }
  w.index = SegmentIndex(segs, 25.0);
  return w;
}

BlockageEntity wall(Point2 mid, double half, double angle, std::optional<RisAttachment> ris = std::nullopt) {
  return {Segment(mid, half, angle), ris};
}

}  // namespace

TEST(BuildRealization, MuZeroHasNoRis) {
  const auto w = build_realization(scenario(500, 0.0), Window::centered({0, 0}, 1000, 100), 3);
  EXPECT_FALSE(w.blockages.empty());
  EXPECT_TRUE(w.ris.empty());
  for (const auto& b : w.blockages) EXPECT_FALSE(b.ris.has_value());
}

TEST(BuildRealization, MuOneEquipsEveryBlockage) {
  const auto w = build_realization(scenario(500, 1.0), Window::centered({0, 0}, 1000, 100), 3);
  EXPECT_EQ(w.ris.size(), w.blockages.size());
}

TEST(BuildRealization, MarksRespectParameters) {
  NetworkParams p = scenario(500, 0.5);
  p.meta_dist = MetaSurfaceDistribution::uniform(1, 3);
  const auto w = build_realization(p, Window::centered({0, 0}, 1000, 50), 9);
  const Window e = w.window.expanded();
  for (const auto& b : w.blockages) {
    EXPECT_GE(2.0 * b.segment.half_length, p.len_min - 1e-12);
    EXPECT_LE(2.0 * b.segment.half_length, p.len_max + 1e-12);
    EXPECT_TRUE(e.contains(b.segment.midpoint));
    if (b.ris) {
      EXPECT_TRUE(b.ris->coated_side == 1 || b.ris->coated_side == -1);
      EXPECT_GE(b.ris->meta_count, 1);
      EXPECT_LE(b.ris->meta_count, 3);
    }
  }
  for (const auto& y : w.bs) EXPECT_TRUE(e.contains(y));
}

TEST(BuildRealization, MeanBlockageCount) {
  // Poisson(500) per km² with no guard: the mean of 10³ counts has σ ≈ 0.71.
  const Window w = Window::centered({0, 0}, 1000, 0);
  double total = 0.0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    total += static_cast<double>(build_realization(scenario(500, 0.1), w, s, false).blockages.size());
  }
  const double mean = total / 1000.0;
  EXPECT_GE(mean, 455.0);
  EXPECT_LE(mean, 545.0);
  EXPECT_NEAR(mean, 500.0, 3.0 * std::sqrt(500.0 / 1000.0));
}

TEST(BuildRealization, RisSetsNestAcrossMu) {
  const Window w = Window::centered({0, 0}, 1000, 200);
  const auto a = build_realization(scenario(500, 0.1), w, 5);
  const auto b = build_realization(scenario(500, 0.4), w, 5);
  ASSERT_EQ(a.blockages.size(), b.blockages.size());
  EXPECT_EQ(a.bs, b.bs);
  for (std::size_t i = 0; i < a.blockages.size(); ++i) {
    EXPECT_EQ(a.blockages[i].segment.midpoint, b.blockages[i].segment.midpoint);
    if (a.blockages[i].ris) {
      ASSERT_TRUE(b.blockages[i].ris.has_value());
      EXPECT_EQ(a.blockages[i].ris->coated_side, b.blockages[i].ris->coated_side);
    }
  }
  EXPECT_LE(a.ris.size(), b.ris.size());
}

TEST(BuildRealization, Deterministic) {
  const Window w = Window::centered({0, 0}, 500, 100);
  const auto a = build_realization(scenario(300, 0.3), w, 77);
  const auto b = build_realization(scenario(300, 0.3), w, 77);
  EXPECT_EQ(a.bs, b.bs);
  ASSERT_EQ(a.blockages.size(), b.blockages.size());
  EXPECT_EQ(a.ris, b.ris);
}

TEST(LosClear, EmptyWorld) {
  const auto w = make_world({}, {});
  EXPECT_TRUE(los_clear({0, 0}, {100, 0}, w));
}

TEST(LosClear, CrossingBlockage) {
  const auto w = make_world({}, {wall({50, 0}, 5, kPi / 2)});
  EXPECT_FALSE(los_clear({0, 0}, {100, 0}, w));
  EXPECT_TRUE(los_clear({0, 10}, {100, 10}, w));
}

TEST(LosClear, ExcludedHostIgnored) {
  const auto w = make_world({}, {wall({50, 0}, 5, kPi / 2)});
  EXPECT_TRUE(los_clear({0, 0}, {100, 0}, w, 0));
}

TEST(LosClear, IndexedPathAgreesWithScan) {
  // Above 1000 blockages the grid index answers; compare with a direct scan.
  const auto w = build_realization(scenario(700, 0.0), Window::centered({0, 0}, 1000, 300), 4);
  ASSERT_GT(w.blockages.size(), 1000u);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> pos(-500, 500);
  for (int q = 0; q < 300; ++q) {
    const Point2 p{pos(rng), pos(rng)};
    const Point2 r{pos(rng), pos(rng)};
    bool scan = true;
    for (const auto& b : w.blockages) {
      if (segments_intersect(p, r, b.segment.first(), b.segment.second())) {
        scan = false;
        break;
      }
    }
    EXPECT_EQ(los_clear(p, r, w), scan);
  }
}

TEST(IndirectFeasible, OppositeSidesFail) {
  const auto w = make_world({}, {wall({0, 50}, 5, 0.0, RisAttachment{1, 1})});
  EXPECT_FALSE(indirect_feasible({0, 100}, {0, 0}, 0, w));
}

TEST(IndirectFeasible, CoatedSideClearSucceeds) {
  const auto w = make_world({}, {wall({0, 50}, 5, 0.0, RisAttachment{1, 1})});
  EXPECT_TRUE(indirect_feasible({-40, 100}, {40, 100}, 0, w));
  // Same side but the uncoated one.
  EXPECT_FALSE(indirect_feasible({-40, 0}, {40, 0}, 0, w));
}

TEST(IndirectFeasible, BlockedLegFails) {
  const auto w = make_world({}, {wall({0, 50}, 5, 0.0, RisAttachment{1, 1}), wall({-20, 75}, 10, kPi / 4)});
  EXPECT_FALSE(indirect_feasible({-40, 100}, {40, 100}, 0, w));
}

TEST(IndirectFeasible, ThrowsWithoutRis) {
  const auto w = make_world({}, {wall({0, 50}, 5, 0.0)});
  EXPECT_THROW(indirect_feasible({0, 100}, {0, 0}, 0, w), std::invalid_argument);
}

TEST(IndirectFeasible, RandomOrientationFrequencyMatchesOrientationFactor) {
  // RIS at polar (t, φ) from the user, BS at (r, 0); random line angle and
  // coated side. Feasibility frequency must be C(r, t, φ)/2.
  const double r = 100.0, t = 80.0, phi = 2.0;
  const Point2 u{0, 0}, y{r, 0};
  const Point2 z{t * std::cos(phi), t * std::sin(phi)};
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr int kDraws = 200'000;
  int hits = 0;
  for (int i = 0; i < kDraws; ++i) {
    const int side = unit(rng) < 0.5 ? -1 : 1;
    const auto w = make_world({}, {wall(z, 1.0, 2.0 * kPi * unit(rng), RisAttachment{side, 1})});
    hits += indirect_feasible(u, y, 0, w);
  }
  const double expected = 0.5 * reflection_probability(r, t, phi, 0.0).orientation;
  const auto ci = binomial_estimate(static_cast<std::size_t>(hits), kDraws, 0.99, BlockingMode::geometric);
  EXPECT_LE(ci.ci_low, expected);
  EXPECT_GE(ci.ci_high, expected);
}

TEST(AssociateUser, NoBsIsBlind) {
  const auto w = make_world({}, {});
  const auto a = associate_user({0, 0}, w);
  EXPECT_EQ(a.tag, OutcomeTag::blind);
  EXPECT_TRUE(std::isinf(a.path_loss));
  EXPECT_FALSE(a.serving_bs.has_value());
  EXPECT_TRUE(std::isinf(shortest_path_length({0, 0}, w)));
}

TEST(AssociateUser, SingleLosBs) {
  const auto w = make_world({{100, 0}}, {});
  const auto a = associate_user({0, 0}, w);
  EXPECT_EQ(a.tag, OutcomeTag::direct);
  EXPECT_DOUBLE_EQ(a.path_loss, 1e6);
  EXPECT_EQ(a.serving_bs, 0u);
  EXPECT_DOUBLE_EQ(shortest_path_length({0, 0}, w), 100.0);
}

TEST(AssociateUser, IndirectThroughRisWithTwoMetaSurfaces) {
  // RIS midway above the blocked user-BS link; both legs 100 m.
  const double h = std::sqrt(100.0 * 100.0 - 60.0 * 60.0);
  const auto w = make_world({{120, 0}}, {wall({60, 0}, 5, kPi / 2), wall({60, h}, 3, 0.0, RisAttachment{-1, 2})});
  const auto a = associate_user({0, 0}, w);
  EXPECT_EQ(a.tag, OutcomeTag::indirect);
  EXPECT_NEAR(a.path_loss, 2e6, 1e-6);
  EXPECT_EQ(a.serving_ris, 1u);
  EXPECT_NEAR(shortest_path_length({0, 0}, w), 200.0, 1e-9);
  EXPECT_TRUE(indirect_path_exists({0, 0}, {120, 0}, w));
}

TEST(AssociateUser, DirectBeatsWeakerIndirect) {
  // Blocked near BS with a strong RIS vs a farther LoS BS: the lower path-loss wins.
  const double h = std::sqrt(100.0 * 100.0 - 60.0 * 60.0);
  const auto w = make_world({{120, 0}, {-150, 0}},
                            {wall({60, 0}, 5, kPi / 2), wall({60, h}, 3, 0.0, RisAttachment{-1, 2})});
  // Indirect: 200³/4 = 2e6, direct: 150³ = 3.375e6.
  EXPECT_EQ(associate_user({0, 0}, w).tag, OutcomeTag::indirect);
  const auto w1 = make_world({{120, 0}, {-150, 0}},
                             {wall({60, 0}, 5, kPi / 2), wall({60, h}, 3, 0.0, RisAttachment{-1, 1})});
  // M = 1: indirect 8e6 loses to direct.
  const auto a = associate_user({0, 0}, w1);
  EXPECT_EQ(a.tag, OutcomeTag::direct);
  EXPECT_EQ(a.serving_bs, 1u);
}

TEST(AssociateUser, RisNotUsedForLosBs) {
  const double h = std::sqrt(100.0 * 100.0 - 60.0 * 60.0);
  const auto w = make_world({{120, 0}}, {wall({60, h}, 3, 0.0, RisAttachment{-1, 3})});
  const auto a = associate_user({0, 0}, w);
  EXPECT_EQ(a.tag, OutcomeTag::direct);
  EXPECT_NEAR(a.path_loss, 120.0 * 120.0 * 120.0, 1e-6);
}

TEST(AssociateUser, MatchesBruteForceOnRandomWorlds) {
  NetworkParams p = scenario(500, 0.3);
  p.meta_dist = MetaSurfaceDistribution::uniform(1, 3);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto w = build_realization(p, Window::centered({0, 0}, 600, 300), s);
    const Point2 u{0, 0};
    double best = INFINITY;
    double shortest = INFINITY;
    for (std::size_t j = 0; j < w.bs.size(); ++j) {
      const double d = distance(u, w.bs[j]);
      if (los_clear(u, w.bs[j], w)) {
        best = std::min(best, std::pow(d, p.alpha));
        shortest = std::min(shortest, d);
        continue;
      }
      for (std::size_t host : w.ris) {
        if (!indirect_feasible(u, w.bs[j], host, w)) continue;
        const Point2 z = w.blockages[host].segment.midpoint;
        const double len = distance(u, z) + distance(z, w.bs[j]);
        const int m = w.blockages[host].ris->meta_count;
        best = std::min(best, std::pow(len, p.alpha) / (m * m));
        shortest = std::min(shortest, len);
      }
    }
    const auto a = associate_user(u, w);
    if (std::isinf(best)) {
      EXPECT_EQ(a.tag, OutcomeTag::blind);
    } else {
      EXPECT_NEAR(a.path_loss / best, 1.0, 1e-12) << "seed " << s;
    }
    if (std::isinf(shortest)) {
      EXPECT_TRUE(std::isinf(shortest_path_length(u, w)));
    } else {
      EXPECT_NEAR(shortest_path_length(u, w), shortest, 1e-9) << "seed " << s;
    }
  }
}
