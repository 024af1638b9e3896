#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "risgeom/geometry.hpp"
#include "risgeom/segment_index.hpp"

using namespace risgeom;

TEST(SegmentsIntersect, CrossingSegments) {
  EXPECT_TRUE(segments_intersect({0, 0}, {2, 0}, {1, -1}, {1, 1}));
}

TEST(SegmentsIntersect, DisjointParallels) {
  EXPECT_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
}

TEST(SegmentsIntersect, SharedEndpointCounts) {
  EXPECT_TRUE(segments_intersect({0, 0}, {1, 1}, {1, 1}, {2, 0}));
}

TEST(SegmentsIntersect, CollinearOverlapAndGap) {
  EXPECT_TRUE(segments_intersect({0, 0}, {2, 0}, {1, 0}, {3, 0}));
  EXPECT_FALSE(segments_intersect({0, 0}, {1, 0}, {2, 0}, {3, 0}));
}

TEST(SegmentsIntersect, DegenerateSegmentThrows) {
  EXPECT_THROW(segments_intersect({0, 0}, {0, 0}, {1, -1}, {1, 1}), std::invalid_argument);
}

TEST(SegmentsIntersect, SegmentOverload) {
  const Segment a({1, 0}, 1.0, 0.0);
  const Segment b({1, 0}, 1.0, std::numbers::pi / 2);
  const Segment c({1, 5}, 1.0, 0.0);
  EXPECT_TRUE(segments_intersect(a, b));
  EXPECT_FALSE(segments_intersect(a, c));
}

TEST(Segment, EndpointsFollowAngle) {
  const Segment s({1, 2}, 3.0, std::numbers::pi / 2);
  EXPECT_NEAR(s.first().x, 1.0, 1e-12);
  EXPECT_NEAR(s.first().y, -1.0, 1e-12);
  EXPECT_NEAR(s.second().y, 5.0, 1e-12);
  EXPECT_THROW(Segment({0, 0}, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(Segment({0, 0}, std::nan(""), 0.0), std::invalid_argument);
}

TEST(SideOfLine, HostAlongXAxis) {
  const Segment host({0, 0}, 1.0, 0.0);
  EXPECT_EQ(side_of_line({0, 1}, host), 1);
  EXPECT_EQ(side_of_line({0, -1}, host), -1);
  EXPECT_EQ(side_of_line({5, 0}, host), 0);
}

TEST(SideOfLine, ReversedHostFlipsSign) {
  const Segment host({0, 0}, 1.0, std::numbers::pi);
  EXPECT_EQ(side_of_line({0, 1}, host), -1);
}

TEST(Window, ExpandedAndCentered) {
  const Window w = Window::centered({10, 20}, 100.0, 5.0);
  EXPECT_DOUBLE_EQ(w.width(), 100.0);
  EXPECT_DOUBLE_EQ(w.center().x, 10.0);
  EXPECT_DOUBLE_EQ(w.center().y, 20.0);
  const Window e = w.expanded();
  EXPECT_DOUBLE_EQ(e.width(), 110.0);
  EXPECT_DOUBLE_EQ(e.guard_margin, 0.0);
  EXPECT_DOUBLE_EQ(w.expanded_area(), 110.0 * 110.0);
  EXPECT_TRUE(w.contains({10, 20}));
  EXPECT_FALSE(w.contains({100, 20}));
}

TEST(Window, ValidateRejectsBadWindows) {
  Window empty{0, 0, 0, 1, 0};
  EXPECT_THROW(empty.validate(), std::invalid_argument);
  Window negative{0, 1, 0, 1, -1};
  EXPECT_THROW(negative.validate(), std::invalid_argument);
}

TEST(SamplePpp, ZeroDensityIsEmpty) {
  std::mt19937_64 rng(1);
  EXPECT_TRUE(sample_ppp(0.0, Window::centered({0, 0}, 1000, 0), rng).empty());
}

TEST(SamplePpp, NegativeDensityThrows) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(sample_ppp(-1.0, Window::centered({0, 0}, 1000, 0), rng), std::invalid_argument);
}

TEST(SamplePpp, MeanCountMatchesIntensity) {
  // Poisson mean 10 per km²; the sample mean of 10⁴ counts has σ = 0.0316.
  const Window w = Window::centered({0, 0}, 1000, 0);
  std::mt19937_64 rng(42);
  double total = 0.0;
  constexpr int kDraws = 10'000;
  for (int i = 0; i < kDraws; ++i) total += static_cast<double>(sample_ppp(1e-5, w, rng).size());
  const double mean = total / kDraws;
  EXPECT_GE(mean, 9.4);
  EXPECT_LE(mean, 10.6);
}

TEST(SamplePpp, PointsFallInExpandedWindow) {
  const Window w = Window::centered({0, 0}, 100, 50);
  std::mt19937_64 rng(3);
  const auto pts = sample_ppp(1e-2, w, rng);
  ASSERT_FALSE(pts.empty());
  const Window e = w.expanded();
  for (const auto& p : pts) EXPECT_TRUE(e.contains(p));
}

TEST(SamplePpp, SameSeedSamePoints) {
  const Window w = Window::centered({0, 0}, 1000, 100);
  std::mt19937_64 a(mix_seed(7, 1));
  std::mt19937_64 b(mix_seed(7, 1));
  EXPECT_EQ(sample_ppp(1e-4, w, a), sample_ppp(1e-4, w, b));
}

TEST(MixSeed, StreamsDiffer) {
  EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
  EXPECT_NE(mix_seed(1, 0), mix_seed(2, 0));
  EXPECT_EQ(mix_seed(5, 9), mix_seed(5, 9));
}

TEST(SegmentIndex, MatchesBruteForce) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(0.0, 200.0);
  std::uniform_real_distribution<double> len(2.5, 12.5);
  std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi);
  std::vector<Segment> segs;
  for (int i = 0; i < 400; ++i) segs.emplace_back(Point2{pos(rng), pos(rng)}, len(rng), ang(rng));
  const SegmentIndex index(segs, 25.0);
  EXPECT_EQ(index.size(), segs.size());
  for (int q = 0; q < 500; ++q) {
    const Point2 p{pos(rng), pos(rng)};
    const Point2 r{pos(rng), pos(rng)};
    const std::optional<std::size_t> exclude =
        q % 3 == 0 ? std::optional<std::size_t>(static_cast<std::size_t>(q) % segs.size()) : std::nullopt;
    bool brute = false;
    for (std::size_t i = 0; i < segs.size() && !brute; ++i) {
      if (exclude && *exclude == i) continue;
      brute = segments_intersect(p, r, segs[i].first(), segs[i].second());
    }
    EXPECT_EQ(index.any_intersection(p, r, exclude), brute) << "query " << q;
  }
}

TEST(SegmentIndex, ProbeOutsideGridStillFindsCrossing) {
  const std::vector<Segment> segs{Segment({0, 0}, 5.0, std::numbers::pi / 2)};
  const SegmentIndex index(segs, 10.0);
  EXPECT_TRUE(index.any_intersection({-1000, 0}, {1000, 0}, std::nullopt));
  EXPECT_FALSE(index.any_intersection({-1000, 0}, {1000, 0}, 0));
  EXPECT_FALSE(index.any_intersection({-1000, 100}, {1000, 100}, std::nullopt));
}
