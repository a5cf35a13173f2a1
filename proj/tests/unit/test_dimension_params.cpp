#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qdelaunay/dimension_params.hpp"
#include "qdelaunay/errors.hpp"
#include "qdelaunay/special_functions.hpp"

using namespace qdelaunay;
using std::numbers::pi;

TEST(DimensionParams, CoefficientsN5) {
  const auto p = make_params(5);
  EXPECT_EQ(p.n, 5);
  EXPECT_DOUBLE_EQ(p.c2, 6.5);
  EXPECT_DOUBLE_EQ(p.c0, 1.5625);
  EXPECT_DOUBLE_EQ(p.r, 6.5625);
  EXPECT_DOUBLE_EQ(p.p, 9.0);
  EXPECT_DOUBLE_EQ(p.p_sharp, 10.0);
  EXPECT_DOUBLE_EQ(p.q_bar, 13.125);
}

TEST(DimensionParams, CylinderValuesN5) {
  const auto p = make_params(5);
  EXPECT_NEAR(p.v_cyl, std::pow(5.0 / 21.0, 0.125), 1e-15);
  EXPECT_NEAR(p.v_cyl, 0.835783587813262638, 1e-15);
  EXPECT_NEAR(p.h_cyl, -(5.0 / 8.0) * std::pow(5.0 / 21.0, 0.25), 1e-14);
  EXPECT_NEAR(p.h_cyl, -0.436584, 1e-6);
}

TEST(DimensionParams, ValuesN6) {
  const auto p = make_params(6);
  EXPECT_DOUBLE_EQ(p.c2, 10.0);
  EXPECT_DOUBLE_EQ(p.c0, 9.0);
  EXPECT_DOUBLE_EQ(p.r, 24.0);
  EXPECT_DOUBLE_EQ(p.p, 5.0);
  EXPECT_NEAR(p.v_cyl, std::pow(0.375, 0.25), 1e-15);
  EXPECT_NEAR(p.v_cyl, 0.782542, 1e-6);
  EXPECT_NEAR(p.h_cyl, -3.0 * std::sqrt(0.375), 1e-13);
  EXPECT_NEAR(p.h_cyl, -1.837117, 1e-6);
}

TEST(DimensionParams, FrequencyAgainstHighPrecisionRoots) {
  struct Ref {
    int n;
    double mu, t_cyl, y_sph;
  };
  const Ref refs[] = {
      {5, 1.24593064737754826, 5.04296552974639494, 204.766546881165870},
      {6, 1.67637993184917792, 3.74806759959762978, 247.284447366160205},
      {7, 1.99443119370982810, 3.15036453851901282, 287.688443119106370},
  };
  for (const auto& ref : refs) {
    const auto p = make_params(ref.n);
    EXPECT_NEAR(p.mu, ref.mu, 1e-13 * ref.mu) << "n=" << ref.n;
    EXPECT_NEAR(p.t_cyl, ref.t_cyl, 1e-13 * ref.t_cyl) << "n=" << ref.n;
    EXPECT_NEAR(p.y_sph, ref.y_sph, 1e-12 * ref.y_sph) << "n=" << ref.n;
  }
}

TEST(DimensionParams, SphereMeasures) {
  const auto p5 = make_params(5);
  EXPECT_NEAR(p5.area_s, 8.0 * pi * pi / 3.0, 1e-13);
  EXPECT_NEAR(p5.vol_s, pi * pi * pi, 1e-13);
  EXPECT_NEAR(p5.y_sph, 13.125 * std::pow(pi * pi * pi, 0.8), 1e-11);
  EXPECT_NEAR(p5.y_sph, 204.77, 5e-3);
  const auto p6 = make_params(6);
  EXPECT_NEAR(p6.area_s, pi * pi * pi, 1e-13);
  EXPECT_NEAR(p6.vol_s, 16.0 * pi * pi * pi / 15.0, 1e-13);
  EXPECT_NEAR(unit_sphere_measure(1), 2.0 * pi, 1e-14);
  EXPECT_NEAR(unit_sphere_measure(2), 4.0 * pi, 1e-14);
}

TEST(DimensionParams, InvariantsAcrossDimensions) {
  for (int n = 5; n <= 12; ++n) {
    const auto p = make_params(n);
    EXPECT_GT(p.v_cyl, 0.0);
    EXPECT_LT(p.v_cyl, 1.0);
    EXPECT_NEAR(p.c0, p.r * std::pow(p.v_cyl, p.p - 1.0), 1e-13 * p.c0);
    EXPECT_NEAR(p.k_lin, p.p * p.c0, 1e-12 * p.k_lin);
    EXPECT_LT(p.h_cyl, 0.0);
    EXPECT_LT(mu_quartic_residual(p, p.mu), 1e-10 * p.c0);
    EXPECT_NEAR(p.t_cyl * p.mu, 2.0 * pi, 1e-14);
    EXPECT_DOUBLE_EQ(p.energy_power_coefficient(), (n - 4.0) * (n - 4.0) * (n * n - 4.0) / 32.0);
    // c0 - k_lin simplifies to -n^2 (n-4) / 2
    EXPECT_NEAR(p.c0 - p.k_lin, -0.5 * n * n * (n - 4.0), 1e-11 * n * n * n);
  }
}

TEST(DimensionParams, RejectsLowDimensions) {
  for (int n : {-1, 0, 1, 3, 4}) EXPECT_THROW(make_params(n), InvalidParameter) << n;
}

TEST(DimensionParams, MuClosedFormsOnlyMinusEightMatches) {
  for (int n = 5; n <= 10; ++n) {
    const auto p = make_params(n);
    const auto forms = mu_closed_forms(n);
    EXPECT_NEAR(forms.linearized, p.mu, 1e-12 * p.mu) << n;
    EXPECT_GT(std::abs(forms.printed - p.mu), 1e-3) << n;
    EXPECT_GT(mu_quartic_residual(p, forms.printed), 1e-3) << n;
  }
}

TEST(SphereProfile, Values) {
  const auto p5 = make_params(5);
  EXPECT_DOUBLE_EQ(v_sph_profile(p5, 0.0), 1.0);
  double prev = 1.0;
  for (double t = 0.25; t <= 20.0; t += 0.25) {
    const double v = v_sph_profile(p5, t);
    EXPECT_LT(v, prev);
    EXPECT_GT(v, 0.0);
    prev = v;
  }
  EXPECT_LT(v_sph_profile(p5, 40.0), 1e-8);
  const auto p6 = make_params(6);
  EXPECT_NEAR(v_sph_profile(p6, 1.0), 1.0 / std::cosh(1.0), 1e-15);
  EXPECT_NEAR(v_sph_profile(p6, 1.0), 0.648054, 1e-6);
}

TEST(SphereProfile, DerivativesMatchFiniteDifferences) {
  for (int n : {5, 6, 9}) {
    const auto p = make_params(n);
    for (double t : {-3.1, -0.7, 0.0, 0.4, 1.9}) {
      const auto d = v_sph_derivatives(p, t);
      EXPECT_DOUBLE_EQ(d[0], v_sph_profile(p, t));
      const double h = 1e-4;
      for (int k = 1; k <= 4; ++k) {
        const auto dp = v_sph_derivatives(p, t + h);
        const auto dm = v_sph_derivatives(p, t - h);
        const auto dp2 = v_sph_derivatives(p, t + 2 * h);
        const auto dm2 = v_sph_derivatives(p, t - 2 * h);
        const double fd = (8.0 * (dp[k - 1] - dm[k - 1]) - (dp2[k - 1] - dm2[k - 1])) / (12.0 * h);
        EXPECT_NEAR(d[k], fd, 1e-9 * (1.0 + std::abs(d[k]))) << "n=" << n << " t=" << t << " k=" << k;
      }
    }
  }
}

TEST(SphereClosure, GammaOracles) {
  const auto p5 = make_params(5);
  const auto c5 = sphere_closure_details(p5, 1e-12);
  EXPECT_NEAR(c5.gamma_closed_form, 3.0 * pi / 8.0, 1e-14);
  EXPECT_NEAR(c5.integral, 3.0 * pi / 8.0, 1e-11);
  const auto p6 = make_params(6);
  const auto c6 = sphere_closure_details(p6, 1e-12);
  EXPECT_NEAR(c6.gamma_closed_form, 16.0 / 15.0, 1e-14);
  EXPECT_NEAR(c6.integral, 16.0 / 15.0, 1e-11);
  for (int n = 5; n <= 12; ++n) EXPECT_LE(sphere_closure_check(make_params(n), 1e-12), 1e-10) << n;
}

TEST(SpecialFunctions, GaussKronrodAccuracyAndFailure) {
  const auto r = adaptive_gauss_kronrod([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-13);
  EXPECT_NEAR(r.value, std::exp(1.0) - 1.0, 1e-13);
  EXPECT_LE(r.error_estimate, 1e-13);
  EXPECT_THROW(adaptive_gauss_kronrod([](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3)); }, 0.0, 1.0,
                                      1e-15, 3),
               QuadratureFailure);
}
