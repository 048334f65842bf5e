#include <gtest/gtest.h>

#include <random>

#include "streamrelay/analysis.hpp"
#include "streamrelay/error.hpp"
#include "support.hpp"

namespace streamrelay {
namespace {

using testing::Q;

const std::vector<NetworkParams> kFigureParams{{3, 2, 1, 4},   {3, 2, 1, 6},  {9, 8, 1, 12},
                                               {20, 9, 1, 27}, {19, 14, 3, 30}, {3, 1, 2, 5}};

TEST(Capacity, ClampedRatio) {
  EXPECT_EQ(capacity(6, 3), Q(4, 7));
  EXPECT_EQ(capacity(2, 3), Q(0));
  EXPECT_EQ(capacity(4, 0), Q(1));
}

TEST(UpperBound, PolygonOfTheRunningExample) {
  const auto ub = upper_bound({3, 2, 1, 6});
  EXPECT_EQ(ub.r1_max, Q(1, 2));
  EXPECT_EQ(ub.r2_max, Q(2, 3));
  EXPECT_EQ(ub.sum_max, Q(4, 5));
  const std::vector<RatePair> expected{{Q(0), Q(0)}, {Q(1, 2), Q(0)}, {Q(1, 2), Q(3, 10)}, {Q(2, 15), Q(2, 3)},
                                       {Q(0), Q(2, 3)}};
  EXPECT_EQ(ub.polygon, expected);
  EXPECT_TRUE(ub.contains(Q(1, 2), Q(3, 10)));
  EXPECT_FALSE(ub.contains(Q(1, 2), Q(31, 100)));
  EXPECT_FALSE(ub.contains(Q(-1, 100), Q(0)));
}

TEST(Regime, FigureCaptions) {
  EXPECT_EQ(classify_regime({9, 8, 1, 12}), Regime::StrongSourceRelay);
  EXPECT_EQ(classify_regime({20, 9, 1, 27}), Regime::WeakSourceRelay);
  EXPECT_EQ(classify_regime({19, 14, 3, 30}), Regime::WeakSourceRelay);
  EXPECT_EQ(classify_regime({3, 1, 2, 5}), Regime::StrongRelayDestination);
  EXPECT_EQ(classify_regime({3, 2, 1, 6}), Regime::WeakRelayDestination);
  EXPECT_EQ(classify_regime({3, 2, 1, 4}), Regime::WeakRelayDestination);
  EXPECT_EQ(to_string(Regime::StrongSourceRelay), "strong-source-relay");
  EXPECT_EQ(to_string(Regime::StrongRelayDestination), "strong-relay-destination");
}

TEST(Regime, InequalitiesAreExact) {
  const auto e = evaluate_regime({3, 2, 1, 6});
  EXPECT_EQ(e.single1, Q(1, 2));
  EXPECT_EQ(e.single2, Q(2, 3));
  EXPECT_EQ(e.sum, Q(4, 5));
  EXPECT_EQ(e.weak_sum, Q(3, 4));
  EXPECT_TRUE(e.weak_relay_destination);
  EXPECT_FALSE(e.strong_source_relay);
  EXPECT_FALSE(e.fallback);
}

TEST(FixedBottleneck, RunningExample) {
  const NetworkParams p{3, 2, 1, 6};
  EXPECT_TRUE(fb_in_regime(p));
  EXPECT_EQ(fb_swdf_r2(p, Q(1, 2)), Q(3, 10));
  EXPECT_EQ(fb_swdf_r2(p, Q(0)), Q(2, 3));
  EXPECT_THROW(fb_swdf_r2(p, Q(3, 5)), Error);
}

TEST(FixedBottleneck, ClosedFormMeetsTheLowerCornerAtSingleUserCapacity) {
  std::mt19937_64 rng(31);
  int tested = 0;
  while (tested < 150) {
    const int n3 = std::uniform_int_distribution<int>(0, 4)(rng);
    const int n2 = std::max(1, n3 + std::uniform_int_distribution<int>(0, 5)(rng));
    const int n1 = n2 + std::uniform_int_distribution<int>(0, 6)(rng);
    const int t = n1 + n3 + std::uniform_int_distribution<int>(0, 25)(rng);
    const NetworkParams p{n1, n2, n3, t};
    if (!fb_in_regime(p)) continue;
    const Rational r1 = capacity(t - n3, n1);
    // Lower corner: C(T-N2,N3) - C(T-N3,N1) capped by the line through the
    // relay-limited symbols, written independently of the library.
    const Rational line = 1 - Q(n2, n1) * (1 + r1 - Q(t + 1 - n1 - n3, t + 1 - n2));
    Rational expected = std::min(capacity(t - n3, n2), capacity(t - n2, n3) - r1);
    expected = std::min(expected, line);
    if (expected < 0) expected = 0;
    EXPECT_EQ(fb_swdf_r2(p, r1), lower_corner_r2(p)) << n1 << "," << n2 << "," << n3 << "," << t;
    EXPECT_EQ(fb_swdf_r2(p, r1), expected);
    ++tested;
  }
}

TEST(FixedBottleneck, RealizedRateEqualsClosedFormInRegime) {
  for (const auto& p : kFigureParams) {
    const auto ub = upper_bound(p);
    for (int i = 0; i <= 20; ++i) {
      const Rational r1 = ub.r1_max * i / 20;
      const auto realized = fb_swdf_realized_r2(p, r1);
      if (fb_in_regime(p)) {
        ASSERT_TRUE(realized);
        EXPECT_EQ(*realized, fb_swdf_r2(p, r1));
      } else if (realized) {
        EXPECT_LE(*realized, fb_swdf_r2(p, r1));
      }
    }
  }
}

TEST(FixedBottleneck, StrongRelayDestinationUserOneOverflowsTheRelay) {
  const NetworkParams p{3, 1, 2, 5};
  EXPECT_FALSE(fb_in_regime(p));
  EXPECT_EQ(fb_swdf_realized_r2(p, Q(1, 5)), Q(2, 5));
  EXPECT_FALSE(fb_swdf_realized_r2(p, Q(1, 4)).has_value());
  EXPECT_EQ(fb_swdf_r2(p, Q(1, 4)), Q(7, 20));
}

TEST(SumRate, Gate) {
  EXPECT_FALSE(sumrate_achievable({3, 2, 1, 4}));
  EXPECT_TRUE(sumrate_achievable({3, 2, 1, 6}));
  for (int n = 0; n < 5; ++n) {
    for (int t = 2 * n + 2; t < 2 * n + 8; ++t) EXPECT_TRUE(sumrate_achievable({n + 1, n, n, t}));
  }
}

TEST(Corners, IntersectionAndUpperCorner) {
  const NetworkParams p{3, 2, 1, 6};
  const auto x = intersection_point(p);
  EXPECT_EQ(x.r1, Q(1, 5));
  EXPECT_EQ(x.r2, Q(3, 5));
  EXPECT_EQ(x.r1 + x.r2, capacity(4, 1));
  EXPECT_THROW(intersection_point({3, 2, 1, 4}), Error);
  const auto u = upper_corner(p);
  EXPECT_EQ(u.r1, Q(1, 8));
  EXPECT_EQ(u.r2, Q(2, 3));
  EXPECT_EQ(u.hint.a, 1);
  EXPECT_EQ(u.hint.b, 4);
  const auto realized = cswdf_rate(p, *u.hint.a, *u.hint.b);
  EXPECT_EQ(realized.r1, u.r1);
  EXPECT_EQ(realized.r2, u.r2);
  EXPECT_EQ(realized.hint.n, 24);
}

TEST(Corners, UpperCornerIsRealizedByItsConcatenation) {
  for (int n3 = 0; n3 <= 3; ++n3) {
    for (int n2 = n3; n2 <= n3 + 4; ++n2) {
      for (int n1 = n2; n1 <= n2 + 4; ++n1) {
        for (int t = n1 + n3 + 1; t <= n1 + n3 + 12; ++t) {
          const NetworkParams p{n1, n2, n3, t};
          if (n2 == n3 || t + 1 <= n2 + n3) continue;
          const auto u = upper_corner(p);
          const auto c = cswdf_rate(p, *u.hint.a, *u.hint.b);
          EXPECT_EQ(c.r1, u.r1) << n1 << "," << n2 << "," << n3 << "," << t;
          EXPECT_EQ(c.r2, u.r2) << n1 << "," << n2 << "," << n3 << "," << t;
        }
      }
    }
  }
}

TEST(Corners, IntersectionLiesOnTheSumRateBound) {
  for (int t = 4; t < 30; ++t) {
    const NetworkParams p{3, 2, 1, t};
    if (!sumrate_achievable(p) || !fb_in_regime(p)) continue;
    const auto x = intersection_point(p);
    EXPECT_EQ(x.r1 + x.r2, capacity(t - 2, 1));
  }
}

TEST(Concatenated, SymbolWisePoints) {
  const auto c = cswdf_rate({3, 2, 1, 6}, 5, 2);
  EXPECT_EQ(c.r1, Q(1, 2));
  EXPECT_EQ(c.r2, Q(4, 15));
  const auto s = cswdf_rate({9, 8, 1, 12}, 1, 1);
  EXPECT_EQ(s.r1, Q(1, 4));
  EXPECT_EQ(s.r2, Q(1, 3));
}

TEST(Concatenated, BestPairMatchesExhaustiveSearch) {
  for (const auto& p : kFigureParams) {
    const auto ub = upper_bound(p);
    for (int i = 0; i <= 10; ++i) {
      const Rational r1 = ub.r1_max * i / 10;
      std::optional<RatePoint> best;
      for (int a = 0; a <= 12; ++a) {
        for (int b = 0; b <= 12; ++b) {
          if (a + b == 0) continue;
          const auto pt = cswdf_rate(p, a, b);
          if (pt.r1 >= r1 && (!best || pt.r2 > best->r2)) best = pt;
        }
      }
      const auto got = cswdf_best_r2(p, r1, 12);
      ASSERT_TRUE(best);
      EXPECT_EQ(got.r2, best->r2);
      EXPECT_GE(got.r1, r1);
    }
  }
  const auto pick = cswdf_best_r2({3, 2, 1, 6}, Q(1, 2));
  EXPECT_EQ(pick.hint.a, 5);
  EXPECT_EQ(pick.hint.b, 2);
  EXPECT_EQ(pick.r2, Q(4, 15));
}

TEST(MessageWise, SplitAndDegeneratePoint) {
  const NetworkParams p{3, 2, 1, 6};
  EXPECT_EQ(cmwdf_split(p, 3), 5);
  const auto u1 = cmwdf_rate(p, 1, 0);
  EXPECT_EQ(u1.r1, Q(1, 2));
  EXPECT_EQ(cmwdf_best_r2(p, Q(1, 2)).r2, Q(0));
  EXPECT_THROW(cmwdf_split({6, 2, 1, 6}, 6), Error);
}

TEST(OptimizedBottleneck, RunningExampleStopsAtIterationZero) {
  const auto r = ob_swdf({3, 2, 1, 6}, Q(1, 2));
  EXPECT_EQ(r.r2_initial, Q(3, 10));
  EXPECT_EQ(r.point.r2, Q(3, 10));
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.relay_rate, Q(4, 5));
}

TEST(OptimizedBottleneck, NeverBelowIterationZeroAndInsideTheBound) {
  for (const auto& p : kFigureParams) {
    const auto ub = upper_bound(p);
    for (int i = 0; i <= 10; ++i) {
      const Rational r1 = ub.r1_max * i / 10;
      const auto r = ob_swdf(p, r1);
      EXPECT_GE(r.point.r2, r.r2_initial);
      EXPECT_TRUE(ub.contains(r1, r.point.r2));
      EXPECT_LE(r.relay_rate, ub.sum_max);
    }
  }
}

TEST(OptimizedBottleneck, BisectionHalvesTheBracket) {
  const Rational eps = Q(1, 1000);
  const auto r = ob_swdf({3, 2, 1, 4}, Q(1, 8), 100000, eps);
  // The initial bracket is at most C(T-N2, N3) wide.
  int bound = 0;
  for (Rational w = capacity(2, 1); w > eps; w /= 2) ++bound;
  EXPECT_LE(r.iterations, bound);
}

TEST(OptimizedBottleneck, StrictlyBeatsFixedBottleneckSomewhereWhenSumRateIsOutOfReach) {
  const NetworkParams p{3, 2, 1, 4};
  const auto ub = upper_bound(p);
  bool strict = false;
  for (int i = 0; i <= 100 && !strict; ++i) {
    const Rational r1 = ub.r1_max * i / 100;
    strict = ob_swdf(p, r1).point.r2 > fb_swdf_r2(p, r1);
  }
  EXPECT_TRUE(strict);
}

TEST(Achievability, RegimeReports) {
  const auto w1 = regime_achievability({20, 9, 1, 27});
  EXPECT_EQ(w1.evaluation.regime, Regime::WeakSourceRelay);
  EXPECT_TRUE(w1.full_region);
  const auto w2 = regime_achievability({19, 14, 3, 30});
  EXPECT_FALSE(w2.full_region);
  const auto rd = regime_achievability({3, 1, 2, 5});
  ASSERT_EQ(rd.corners.size(), 2u);
  EXPECT_EQ(rd.corners[0].r1, Q(0));
  EXPECT_EQ(rd.corners[0].r2, Q(3, 5));
  EXPECT_EQ(rd.corners[1].r1, Q(1, 4));
  EXPECT_EQ(rd.corners[1].r2, Q(7, 20));
  const auto sr = regime_achievability({9, 8, 1, 12});
  EXPECT_TRUE(sr.full_region);
  ASSERT_EQ(sr.corners.size(), 1u);
  EXPECT_EQ(sr.corners[0].r1, Q(1, 4));
  EXPECT_EQ(sr.corners[0].r2, Q(1, 3));
}

}  // namespace
}  // namespace streamrelay
