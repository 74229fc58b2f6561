#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "vinedesign/avoid.hpp"
#include "vinedesign/oracle.hpp"

using namespace vine;

namespace {

const Range kSteer{-kPi / 6, kPi / 6};

}  // namespace

TEST(IntervalSubtract, SplitsInTwo) {
  const auto out = interval_subtract(AngleIntervalSet{kSteer}, {-0.1, 0.1});
  ASSERT_EQ(out.intervals().size(), 2u);
  EXPECT_DOUBLE_EQ(out.intervals()[0].lo, -kPi / 6);
  EXPECT_DOUBLE_EQ(out.intervals()[0].hi, -0.1);
  EXPECT_DOUBLE_EQ(out.intervals()[1].lo, 0.1);
  EXPECT_DOUBLE_EQ(out.intervals()[1].hi, kPi / 6);
}

TEST(IntervalSubtract, TotalCoverEmpties) {
  EXPECT_TRUE(interval_subtract(AngleIntervalSet{kSteer}, {-1, 1}).empty());
}

TEST(IntervalSubtract, DisjointCutIsNoOp) {
  const auto out = interval_subtract(AngleIntervalSet{kSteer}, {1, 2});
  ASSERT_EQ(out.intervals().size(), 1u);
  EXPECT_DOUBLE_EQ(out.measure(), kSteer.width());
}

TEST(IntervalSubtract, MeasureArithmetic) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    AngleIntervalSet set{kSteer};
    set.subtract({-0.05, 0.02});
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    // measure of set ∩ [a, b], computed directly
    double overlap = 0.0;
    for (const auto& r : set.intervals()) overlap += std::max(0.0, std::min(r.hi, b) - std::max(r.lo, a));
    const double before = set.measure();
    const auto out = interval_subtract(set, {a, b});
    EXPECT_NEAR(out.measure(), before - overlap, 1e-9);
    for (std::size_t i = 1; i < out.intervals().size(); ++i) {
      EXPECT_LT(out.intervals()[i - 1].hi, out.intervals()[i].lo + 1e-15);
    }
  }
}

TEST(SubtractWrapped, SplitsAcrossSeam) {
  AngleIntervalSet full{{-kPi, kPi}};
  subtract_wrapped(full, kPi - 0.1, kPi + 0.2);
  EXPECT_NEAR(full.measure(), 2 * kPi - 0.3, 1e-12);
  EXPECT_FALSE(full.contains(kPi - 0.05));
  EXPECT_FALSE(full.contains(-kPi + 0.1));
  EXPECT_TRUE(full.contains(0.0));
}

TEST(AllowedRanges, NoObstacleKeepsBounds) {
  const std::vector<CircleObstacle> none;
  const auto set = allowed_angle_ranges({0, 0}, {1, 0}, 2.0, none, kSteer);
  ASSERT_EQ(set.intervals().size(), 1u);
  EXPECT_DOUBLE_EQ(set.measure(), kSteer.width());
}

TEST(AllowedRanges, ObstacleOutOfReachIgnored) {
  const std::vector<CircleObstacle> obs{{{5, 0}, 0.5}};
  EXPECT_DOUBLE_EQ(allowed_angle_ranges({0, 0}, {1, 0}, 2.0, obs, kSteer).measure(), kSteer.width());
}

TEST(AllowedRanges, ObstacleAheadCutsSymmetricCone) {
  const std::vector<CircleObstacle> obs{{{1, 0}, 0.2}};
  const auto set = allowed_angle_ranges({0, 0}, {1, 0}, 2.0, obs, kSteer);
  ASSERT_EQ(set.intervals().size(), 2u);
  const double half = std::asin(0.2);
  EXPECT_NEAR(set.intervals()[0].hi, -half, 1e-8);
  EXPECT_NEAR(set.intervals()[1].lo, half, 1e-8);

  // sweep: every allowed angle is clear, every removed angle hits
  for (int k = 0; k < 10000; ++k) {
    const double a = kSteer.lo + kSteer.width() * k / 9999.0;
    const bool hits = oracle::sweep_collision({0, 0}, a, 2.0, obs[0], 4000);
    if (set.contains(a)) {
      EXPECT_FALSE(hits) << a;
    } else if (std::abs(std::abs(a) - half) > 1e-3) {
      EXPECT_TRUE(hits) << a;
    }
  }
}

TEST(AllowedRanges, ObstacleBehindLeavesBounds) {
  const std::vector<CircleObstacle> obs{{{-1, 0}, 0.3}};
  const auto set = allowed_angle_ranges({0, 0}, {1, 0}, 2.0, obs, kSteer);
  EXPECT_DOUBLE_EQ(set.measure(), kSteer.width());
}

TEST(AllowedRanges, FollowsLinkDirection) {
  // same scene rotated by 90 degrees: link points up, obstacle above
  const std::vector<CircleObstacle> obs{{{0, 1}, 0.2}};
  const auto set = allowed_angle_ranges({0, 0}, {0, 1}, 2.0, obs, kSteer);
  EXPECT_NEAR(set.measure(), kSteer.width() - 2 * std::asin(0.2), 1e-8);
  EXPECT_FALSE(set.contains(0.0));
}

TEST(AllowedRanges, NodeInsideObstacleIsEmpty) {
  const std::vector<CircleObstacle> obs{{{0.1, 0}, 0.5}};
  EXPECT_TRUE(allowed_angle_ranges({0, 0}, {1, 0}, 1.0, obs, kSteer).empty());
}

TEST(AllowedRanges, CloseObstacleAheadLeavesNothing) {
  // the tangent cone is wider than the steering range
  const std::vector<CircleObstacle> obs{{{0.6, 0}, 0.5}};
  EXPECT_TRUE(allowed_angle_ranges({0, 0}, {1, 0}, 1.0, obs, kSteer).empty());
}

TEST(AllowedRanges, NonPositiveLengthThrows) {
  const std::vector<CircleObstacle> none;
  EXPECT_THROW(allowed_angle_ranges({0, 0}, {1, 0}, 0.0, none, kSteer), std::invalid_argument);
}

TEST(AllowedRanges, RemovingObstaclesEnlargesSet) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> pos(-3, 3), rad(0.1, 0.8);
  for (int k = 0; k < 500; ++k) {
    std::vector<CircleObstacle> obs;
    for (int m = 0; m < 4; ++m) {
      const CircleObstacle o{{pos(rng), pos(rng)}, rad(rng)};
      if (norm(o.center) > o.radius) obs.push_back(o);
    }
    const auto all = allowed_angle_ranges({0, 0}, {1, 0}, 2.0, obs, kSteer);
    if (obs.empty()) continue;
    std::vector<CircleObstacle> fewer(obs.begin(), obs.end() - 1);
    const auto more = allowed_angle_ranges({0, 0}, {1, 0}, 2.0, fewer, kSteer);
    EXPECT_GE(more.measure() + 1e-12, all.measure());
    for (const auto& r : all.intervals()) {
      EXPECT_TRUE(more.contains(r.lo));
      EXPECT_TRUE(more.contains(r.hi));
    }
  }
}

TEST(AllowedRanges, RotationCovariant) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> pos(-3, 3), rad(0.1, 0.8), ang(-kPi, kPi);
  for (int k = 0; k < 300; ++k) {
    const CircleObstacle o{{pos(rng), pos(rng)}, rad(rng)};
    if (norm(o.center) <= o.radius) continue;
    const double heading = ang(rng);
    const double c = std::cos(heading), s = std::sin(heading);
    const CircleObstacle turned{{c * o.center.x - s * o.center.y, s * o.center.x + c * o.center.y}, o.radius};
    const std::vector<CircleObstacle> a{o}, b{turned};
    const auto sa = allowed_angle_ranges({0, 0}, {1, 0}, 2.0, a, kSteer);
    const auto sb = allowed_angle_ranges({0, 0}, unit_from_angle(heading), 2.0, b, kSteer);
    ASSERT_EQ(sa.intervals().size(), sb.intervals().size());
    for (std::size_t i = 0; i < sa.intervals().size(); ++i) {
      EXPECT_NEAR(sa.intervals()[i].lo, sb.intervals()[i].lo, 1e-9);
      EXPECT_NEAR(sa.intervals()[i].hi, sb.intervals()[i].hi, 1e-9);
    }
  }
}

TEST(SampleUniform, SingleIntervalIsUniform) {
  Rng rng(24);
  const AngleIntervalSet set{{0.0, 1.0}};
  std::vector<double> draws(10000);
  for (auto& d : draws) d = sample_uniform(set, rng);
  std::sort(draws.begin(), draws.end());
  // Kolmogorov-Smirnov against U(0,1); 1.63/sqrt(n) is the 1% critical value
  double ks = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double n = static_cast<double>(draws.size());
    ks = std::max({ks, std::abs((i + 1) / n - draws[i]), std::abs(draws[i] - i / n)});
  }
  EXPECT_LT(ks, 1.63 / std::sqrt(10000.0));
}

TEST(SampleUniform, EqualIntervalsSplitEvenly) {
  Rng rng(25);
  AngleIntervalSet set{{-1.0, 1.0}};
  set.subtract({-0.5, 0.5});
  int left = 0;
  for (int k = 0; k < 10000; ++k) {
    const double a = sample_uniform(set, rng);
    ASSERT_TRUE(set.contains(a));
    left += a < 0.0;
  }
  EXPECT_NEAR(left / 10000.0, 0.5, 0.02);
}

TEST(SampleUniform, PointIntervalAlwaysReturned) {
  Rng rng(26);
  const AngleIntervalSet set{{0.3, 0.3}};
  for (int k = 0; k < 100; ++k) EXPECT_DOUBLE_EQ(sample_uniform(set, rng), 0.3);
}

TEST(SampleUniform, EmptyThrows) {
  Rng rng(27);
  EXPECT_THROW(sample_uniform(AngleIntervalSet{}, rng), std::invalid_argument);
}
