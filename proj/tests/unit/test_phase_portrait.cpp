#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "qdelaunay/errors.hpp"
#include "qdelaunay/phase_portrait.hpp"

using namespace qdelaunay;
using qdelaunay::testing::params_for;

TEST(Portrait, NestedCurvesAroundCylinder) {
  const auto& p = params_for(5);
  const std::vector<double> a = {0.86, 0.92, 0.97};
  const auto set = build_portrait(p, a);
  EXPECT_EQ(set.n, 5);
  ASSERT_EQ(set.curves.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& c = set.curves[i];
    EXPECT_TRUE(c.closed);
    ASSERT_TRUE(c.a);
    EXPECT_DOUBLE_EQ(*c.a, a[i]);
    EXPECT_TRUE(point_in_polygon({p.v_cyl, 0.0}, c.points));
    if (i > 0) {
      EXPECT_FALSE(polylines_cross(set.curves[i - 1].points, c.points));
      EXPECT_TRUE(point_in_polygon(set.curves[i - 1].points[0], c.points));
    }
  }
  ASSERT_EQ(set.markers.size(), 1u);
  EXPECT_EQ(set.markers[0].label, "cylinder");
  EXPECT_DOUBLE_EQ(set.markers[0].v, p.v_cyl);
  const auto chk = check_portrait(p, set);
  EXPECT_TRUE(chk.nested);
  EXPECT_TRUE(chk.cylinder_marker_ok);
  EXPECT_LE(chk.worst_closure, 1e-6);
  EXPECT_LE(chk.worst_asymmetry, 1e-6);
}

TEST(Portrait, SphereLoopAlone) {
  const auto& p = params_for(5);
  PortraitOptions opt;
  opt.include_sphere = true;
  const auto set = build_portrait(p, {}, opt);
  ASSERT_EQ(set.curves.size(), 1u);
  const auto& c = set.curves[0];
  EXPECT_EQ(c.label, "sphere");
  EXPECT_FALSE(c.closed);
  EXPECT_FALSE(c.a);
  ASSERT_EQ(c.points.size(), 1025u);
  const auto& mid = c.points[512];
  EXPECT_DOUBLE_EQ(mid[0], 1.0);
  EXPECT_NEAR(mid[1], 0.0, 1e-15);
  for (const auto& end : {c.points.front(), c.points.back()}) {
    EXPECT_NEAR(end[0], 0.0, 1.01e-3);
    EXPECT_NEAR(end[1], 0.0, 1e-3);
  }
  bool origin = false;
  for (const auto& m : set.markers) origin = origin || (m.label == "origin" && m.v == 0.0 && m.v1 == 0.0);
  EXPECT_TRUE(origin);
  EXPECT_NEAR(v_sph_profile(p, sphere_span(p, 1e-3)), 1e-3, 1e-15);
}

TEST(Portrait, CurvesInsideSphereLoop) {
  const auto& p = params_for(5);
  PortraitOptions opt;
  opt.include_sphere = true;
  const std::vector<double> a = {0.88, 0.99};
  const auto set = build_portrait(p, a, opt);
  const auto chk = check_portrait(p, set);
  EXPECT_TRUE(chk.inside_sphere);
  EXPECT_TRUE(chk.nested);
}

TEST(Portrait, Deterministic) {
  const auto& p = params_for(5);
  const std::vector<double> a = {0.9, 0.9};
  const auto set = build_portrait(p, a);
  ASSERT_EQ(set.curves.size(), 2u);
  EXPECT_EQ(set.curves[0].points, set.curves[1].points);
  const auto again = build_portrait(p, std::vector<double>{0.9}, PortraitOptions{.threads = 1});
  EXPECT_EQ(again.curves[0].points, set.curves[0].points);
}

TEST(Portrait, InvalidParameter) {
  const auto& p = params_for(5);
  EXPECT_THROW(build_portrait(p, std::vector<double>{0.5}), InvalidParameter);
}

TEST(Portrait, SphereIntegrationTracksClosedForm) {
  EXPECT_LE(sphere_integration_deviation(params_for(5), 5.0), 1e-7);
  EXPECT_LE(sphere_integration_deviation(params_for(8), 25.0 / 8.0), 1e-7);
}
