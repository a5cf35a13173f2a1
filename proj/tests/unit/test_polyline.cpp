#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qdelaunay/polyline.hpp"

using namespace qdelaunay;

namespace {

std::vector<PlanePoint> circle(double cx, double cy, double r, int m = 64) {
  std::vector<PlanePoint> pts;
  for (int i = 0; i <= m; ++i) {
    const double th = 2 * std::numbers::pi * i / m;
    pts.push_back({cx + r * std::cos(th), cy + r * std::sin(th)});
  }
  return pts;
}

}  // namespace

TEST(Polyline, SegmentsCross) {
  EXPECT_TRUE(segments_cross({0, 0}, {1, 1}, {0, 1}, {1, 0}));
  EXPECT_FALSE(segments_cross({0, 0}, {1, 0}, {0, 1}, {1, 1}));
  // touching at an endpoint does not count
  EXPECT_FALSE(segments_cross({0, 0}, {1, 0}, {1, 0}, {2, 1}));
  EXPECT_FALSE(segments_cross({0, 0}, {1, 0}, {0.5, 0}, {0.5, 1}));
  // collinear overlap does not count
  EXPECT_FALSE(segments_cross({0, 0}, {2, 0}, {1, 0}, {3, 0}));
}

TEST(Polyline, NestedCirclesDoNotCross) {
  const auto inner = circle(0, 0, 1);
  const auto outer = circle(0, 0, 2);
  const auto shifted = circle(1.5, 0, 1);
  EXPECT_FALSE(polylines_cross(inner, outer));
  EXPECT_TRUE(polylines_cross(inner, shifted));
}

TEST(Polyline, PointInPolygon) {
  const auto c = circle(0.5, 0, 1);
  EXPECT_TRUE(point_in_polygon({0.5, 0}, c));
  EXPECT_TRUE(point_in_polygon({1.2, 0.3}, c));
  EXPECT_FALSE(point_in_polygon({2.0, 0}, c));
  std::vector<PlanePoint> open(c.begin(), c.end() - 1);
  EXPECT_TRUE(point_in_polygon({0.5, 0}, open));
  const std::vector<PlanePoint> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  EXPECT_TRUE(point_in_polygon({0.5, 0.5}, square));
  EXPECT_FALSE(point_in_polygon({1.5, 0.5}, square));
}
