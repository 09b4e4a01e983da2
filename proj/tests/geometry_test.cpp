// Copyright 2026 The mapstab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mapstab/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace mapstab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTol = 1e-9;

void ExpectPolylineNear(const PolyLine2D& a, const PolyLine2D& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i].x, b[i].x, tol) << "point " << i;
    EXPECT_NEAR(a[i].y, b[i].y, tol) << "point " << i;
  }
}

TEST(PolyLine2D, RejectsInvalidInput) {
  EXPECT_THROW(PolyLine2D({{0, 0}}), std::invalid_argument);
  EXPECT_THROW(PolyLine2D({{0, 0}, {0, 0}}), std::invalid_argument);
  EXPECT_THROW(PolyLine2D({{0, 0}, {1, std::numeric_limits<double>::quiet_NaN()}}),
               std::invalid_argument);
  EXPECT_THROW(PolyLine2D({{0, 0}, {std::numeric_limits<double>::infinity(), 0}}),
               std::invalid_argument);
  // Revisiting a point non-consecutively is fine (closed rings).
  EXPECT_NO_THROW(PolyLine2D({{0, 0}, {1, 0}, {1, 1}, {0, 0}}));
}

TEST(MakePolyline, DropsConsecutiveDuplicates) {
  const std::vector<Point2D> raw{{0, 0}, {0, 0}, {1, 0}, {1, 0}};
  const auto poly = make_polyline(raw);
  ASSERT_TRUE(poly.has_value());
  EXPECT_EQ(poly->size(), 2u);
  const std::vector<Point2D> single{{2, 2}, {2, 2}};
  EXPECT_FALSE(make_polyline(single).has_value());
}

TEST(RigidPose2D, YawIsNormalized) {
  EXPECT_NEAR(RigidPose2D(0, 0, 3 * kPi / 2).yaw(), -kPi / 2, kTol);
  EXPECT_NEAR(RigidPose2D(0, 0, -kPi).yaw(), kPi, kTol);
  EXPECT_NEAR(RigidPose2D(0, 0, kPi).yaw(), kPi, kTol);
}

TEST(RigidPose2D, ComposeWithInverseIsIdentity) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const RigidPose2D pose = testing::random_pose(rng);
    const RigidPose2D id = pose.compose(pose.inverse());
    EXPECT_NEAR(id.x(), 0.0, kTol);
    EXPECT_NEAR(id.y(), 0.0, kTol);
    EXPECT_NEAR(id.yaw(), 0.0, kTol);
  }
}

TEST(TransformPolyline, IdenticalPosesGiveInput) {
  const PolyLine2D poly{{0, 0}, {3, 1}, {5, -2}};
  const RigidPose2D pose(12.0, -4.0, 0.7);
  ExpectPolylineNear(transform_polyline(poly, pose, pose), poly, kTol);
}

TEST(TransformPolyline, TranslationOnly) {
  const PolyLine2D poly{{0, 0}, {1, 0}};
  const auto out = transform_polyline(poly, RigidPose2D(1, 0, 0), RigidPose2D(0, 0, 0));
  EXPECT_NEAR(out[0].x, 1.0, kTol);
  EXPECT_NEAR(out[0].y, 0.0, kTol);
}

TEST(TransformPolyline, QuarterTurn) {
  const PolyLine2D poly{{1, 0}, {2, 0}};
  const auto out = transform_polyline(poly, RigidPose2D(0, 0, kPi / 2), RigidPose2D(0, 0, 0));
  EXPECT_NEAR(out[0].x, 0.0, kTol);
  EXPECT_NEAR(out[0].y, 1.0, kTol);
}

TEST(TransformPolyline, PropertyIdentityAndRoundTrip) {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 300; ++trial) {
    const PolyLine2D poly = testing::random_polyline(rng);
    const RigidPose2D a = testing::random_pose(rng);
    const RigidPose2D b = testing::random_pose(rng);
    ExpectPolylineNear(transform_polyline(poly, a, a), poly, kTol);
    ExpectPolylineNear(transform_polyline(transform_polyline(poly, a, b), b, a), poly, kTol);
  }
}

TEST(ClipToRange, AllInsideIsUnchanged) {
  const PolyLine2D poly{{-10, 0}, {0, 5}, {10, -5}};
  const auto out = clip_to_range(poly, PerceptionRange{});
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ(*out, poly);
}

TEST(ClipToRange, FullyOutsideIsAbsent) {
  const PolyLine2D poly{{20, 0}, {30, 0}};
  EXPECT_FALSE(clip_to_range(poly, PerceptionRange{}).has_value());
}

TEST(ClipToRange, RetainsPointsNotSegments) {
  // Middle point leaves the range; no boundary intersections are inserted.
  const PolyLine2D poly{{-5, 0}, {0, 40}, {5, 0}};
  const auto out = clip_to_range(poly, PerceptionRange{});
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ(*out, PolyLine2D({{-5, 0}, {5, 0}}));
}

TEST(ClipToRange, BoundaryIsInclusive) {
  const PolyLine2D poly{{-15, -30}, {15, 30}};
  EXPECT_TRUE(clip_to_range(poly, PerceptionRange{}).has_value());
}

TEST(ClipToRange, PropertyOutputIsSubsequence) {
  std::mt19937_64 rng(5);
  const PerceptionRange range{-8, 8, -8, 8};
  for (int trial = 0; trial < 300; ++trial) {
    const PolyLine2D poly = testing::random_polyline(rng, 2, 20, 12.0);
    const auto out = clip_to_range(poly, range);
    if (!out) continue;
    std::size_t j = 0;
    for (const auto& p : out->points()) {
      EXPECT_TRUE(range.contains(p));
      while (j < poly.size() && !(poly[j] == p)) ++j;
      ASSERT_LT(j, poly.size()) << "clip output is not a subsequence";
      ++j;
    }
  }
}

TEST(ResamplePair, IdenticalStraightSegment) {
  const PolyLine2D line{{0, 0}, {10, 0}};
  const auto pair = resample_pair(line, line, 3);
  ASSERT_TRUE(pair.has_value());
  EXPECT_EQ(pair->xs, (std::vector<double>{0, 5, 10}));
  EXPECT_EQ(pair->y_current, (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(pair->y_history, (std::vector<double>{0, 0, 0}));
}

TEST(ResamplePair, UsesIntersectionOfXRanges) {
  const PolyLine2D current{{0, 0}, {10, 0}};
  const PolyLine2D history{{5, 1}, {15, 1}};
  const auto pair = resample_pair(current, history, 2);
  ASSERT_TRUE(pair.has_value());
  EXPECT_EQ(pair->xs, (std::vector<double>{5, 10}));
  EXPECT_EQ(pair->y_history, (std::vector<double>{1, 1}));
}

TEST(ResamplePair, DisjointRangesAreAbsent) {
  const PolyLine2D current{{0, 0}, {1, 0}};
  const PolyLine2D history{{2, 0}, {3, 0}};
  EXPECT_FALSE(resample_pair(current, history, 10).has_value());
}

TEST(ResamplePair, RejectsTooFewSamples) {
  const PolyLine2D line{{0, 0}, {10, 0}};
  EXPECT_THROW(resample_pair(line, line, 1), std::invalid_argument);
}

TEST(ResamplePair, InterpolatesLinearlyInX) {
  const PolyLine2D current{{0, 0}, {10, 10}};
  const PolyLine2D history{{0, 4}, {10, 4}};
  const auto pair = resample_pair(current, history, 11);
  ASSERT_TRUE(pair.has_value());
  for (std::size_t i = 0; i < 11; ++i) EXPECT_NEAR(pair->y_current[i], pair->xs[i], 1e-12);
}

TEST(ResamplePair, MonotonizesReversedAndFoldedLines) {
  // Reversed direction: same geometry, same samples.
  const PolyLine2D forward{{0, 0}, {4, 2}, {8, 0}};
  const PolyLine2D reversed{{8, 0}, {4, 2}, {0, 0}};
  const auto pair = resample_pair(forward, reversed, 9);
  ASSERT_TRUE(pair.has_value());
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_NEAR(pair->y_current[i], pair->y_history[i], 1e-12);
  }
  // A ring collapses onto the mean y at each shared x.
  const PolyLine2D ring{{0, -1}, {2, -1}, {2, 1}, {0, 1}, {0, -1}};
  const auto mono = monotonize_x(ring.points());
  ASSERT_EQ(mono.size(), 2u);
  EXPECT_NEAR(mono[0].y, -1.0 / 3.0, 1e-12);
  EXPECT_NEAR(mono[1].y, 0.0, 1e-12);
}

TEST(ResamplePair, PropertyEquallySpacedInsideHulls) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> count(2, 150);
  int produced = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const PolyLine2D a = testing::random_polyline(rng);
    const PolyLine2D b = testing::random_polyline(rng);
    const std::size_t n = count(rng);
    const auto pair = resample_pair(a, b, n);
    if (!pair) continue;
    ++produced;
    ASSERT_EQ(pair->xs.size(), n);
    ASSERT_EQ(pair->y_current.size(), n);
    ASSERT_EQ(pair->y_history.size(), n);
    auto hull = [](const PolyLine2D& p) {
      double lo = p[0].x, hi = p[0].x;
      for (const auto& q : p.points()) {
        lo = std::min(lo, q.x);
        hi = std::max(hi, q.x);
      }
      return std::pair{lo, hi};
    };
    const auto [alo, ahi] = hull(a);
    const auto [blo, bhi] = hull(b);
    const double step = (pair->xs.back() - pair->xs.front()) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_GE(pair->xs[i], std::max(alo, blo));
      EXPECT_LE(pair->xs[i], std::min(ahi, bhi));
      if (i > 0) {
        EXPECT_GT(pair->xs[i], pair->xs[i - 1]);
        EXPECT_NEAR(pair->xs[i] - pair->xs[i - 1], step, 1e-9 * std::max(1.0, step));
      }
    }
  }
  EXPECT_GT(produced, 100);
}

TEST(Curvature, Collinear) {
  const std::vector<Point2D> pts{{0, 0}, {1, 0}, {2, 0}};
  EXPECT_EQ(curvature(pts), 0.0);
}

TEST(Curvature, RightAngle) {
  const std::vector<Point2D> pts{{0, 0}, {1, 0}, {1, 1}};
  EXPECT_NEAR(curvature(pts), kPi / 2, 1e-12);
}

TEST(Curvature, StaircaseAveragesOverInteriorAngles) {
  const std::vector<Point2D> pts{{0, 0}, {1, 0}, {1, 1}, {2, 1}};
  EXPECT_NEAR(curvature(pts), kPi / 2, 1e-12);
  // One turn among three interior vertices: divisor is N - 2.
  const std::vector<Point2D> one_turn{{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}};
  EXPECT_NEAR(curvature(one_turn), (kPi / 2) / 3.0, 1e-12);
}

TEST(Curvature, ReversalIsPi) {
  const std::vector<Point2D> pts{{0, 0}, {1, 0}, {0, 0}};
  EXPECT_NEAR(curvature(pts), kPi, 1e-12);
}

TEST(Curvature, Errors) {
  const std::vector<Point2D> two{{0, 0}, {1, 0}};
  EXPECT_THROW(curvature(two), std::invalid_argument);
  const std::vector<Point2D> zero_seg{{0, 0}, {1, 0}, {1, 0}};
  EXPECT_THROW(curvature(zero_seg), std::invalid_argument);
}

TEST(Curvature, PropertyRigidInvariance) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const PolyLine2D poly = testing::random_polyline(rng, 3, 30);
    const RigidPose2D pose = testing::random_pose(rng);
    std::vector<Point2D> moved;
    for (const auto& p : poly.points()) moved.push_back(pose.apply(p));
    const double before = curvature(poly.points());
    const double after = curvature(moved);
    EXPECT_NEAR(before, after, 1e-9);
    EXPECT_GE(before, 0.0);
    EXPECT_LE(before, kPi);
  }
}

TEST(DensifyByArcLength, EvenSpacingAndEndpoints) {
  const PolyLine2D poly{{0, 0}, {3, 0}, {3, 4}};
  const auto pts = densify_by_arc_length(poly, 8);
  ASSERT_EQ(pts.size(), 8u);
  EXPECT_EQ(pts.front(), poly[0]);
  EXPECT_EQ(pts.back(), poly[2]);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    EXPECT_NEAR(distance(pts[i - 1], pts[i]), 1.0, 1e-12);
  }
}

}  // namespace
}  // namespace mapstab
