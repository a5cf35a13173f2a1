#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fixtures.hpp"
#include "qdelaunay/errors.hpp"
#include "qdelaunay/q_functionals.hpp"

using namespace qdelaunay;
using qdelaunay::testing::orbit_for;
using qdelaunay::testing::params_for;
using std::numbers::pi;

namespace {

std::vector<double> mode(std::size_t n, int m, bool sine = false) {
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double th = 2 * pi * m * double(j) / double(n);
    w[j] = sine ? std::sin(th) : std::cos(th);
  }
  return w;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(QFunctional, ConstantProfileClosedForm) {
  const auto& p = params_for(5);
  const double T = 2.0 * p.t_cyl;
  const double energy = p.area_s * T * p.c0 * p.v_cyl * p.v_cyl;
  const double volume = p.area_s * T * std::pow(p.v_cyl, 10.0);
  const double closed = (2.0 / (p.n - 4)) * energy / std::pow(volume, 0.2);
  const auto u = RadialProfile::constant(p.v_cyl, T);
  const auto parts = q_parts(p, u);
  EXPECT_NEAR(parts.energy, energy, 1e-13 * energy);
  EXPECT_NEAR(parts.volume, volume, 1e-13 * volume);
  EXPECT_NEAR(q_energy_radial(p, u), closed, 1e-12 * closed);
  // the cylinder is itself a constant-Q solution
  EXPECT_NEAR(closed, cylinder_invariant_value(p, T), 1e-12 * closed);
}

TEST(QFunctional, TwoPathIdentityOnOrbit) {
  for (auto [n, a] : {std::pair{5, 0.9}, std::pair{5, 0.97}, std::pair{6, 0.9}}) {
    const auto& p = params_for(n);
    const auto& o = orbit_for(n, a);
    const double y = invariant_value(p, o);
    EXPECT_LE(rel(q_energy_radial(p, RadialProfile::from_orbit(o)), y), 1e-6) << n << " " << a;
    EXPECT_LE(rel(q_energy_radial(p, RadialProfile::from_orbit(o, 3)), y * std::pow(3.0, 4.0 / n)), 1e-6);
    EXPECT_LT(y, p.y_sph);
  }
}

TEST(QFunctional, PrintedInvariantFormDisagrees) {
  const auto& p = params_for(5);
  const auto& o = orbit_for(5, 0.9);
  const double q = q_energy_radial(p, RadialProfile::from_orbit(o));
  EXPECT_GT(rel(printed_invariant_value(p, o.i_a), q), 0.1);
}

TEST(QFunctional, GradientVanishesAtOrbits) {
  const auto& p = params_for(5);
  std::mt19937_64 rng(99);
  for (double a : {0.9, 0.97}) {
    const auto& o = orbit_for(5, a);
    const auto u = RadialProfile::from_orbit(o);
    for (int m = 1; m <= 4; ++m) {
      EXPECT_LE(std::abs(q_gradient_radial(p, u, mode(u.size(), m))), 1e-5) << a << " " << m;
      EXPECT_LE(std::abs(q_gradient_radial(p, u, mode(u.size(), m, true))), 1e-5) << a << " " << m;
    }
    EXPECT_LE(std::abs(q_gradient_radial(p, u, random_band_limited(rng, u.size(), 8, 1.0))), 1e-5);
  }
}

TEST(QFunctional, ConstantsAreCriticalAmongConstants) {
  const auto& p = params_for(5);
  const auto u = RadialProfile::constant(p.v_cyl, 3.0 * p.t_cyl);
  const std::vector<double> ones(u.size(), 1.0);
  EXPECT_NEAR(q_gradient_radial(p, u, ones), 0.0, 1e-10 * q_energy_radial(p, u));
}

TEST(QFunctional, GradientMatchesFiniteDifferenceOnCosine) {
  const auto& p = params_for(5);
  const double T = 3.0 * p.t_cyl;
  const std::size_t N = 256;
  const auto w = mode(N, 1);
  std::vector<double> base(N);
  for (std::size_t j = 0; j < N; ++j) base[j] = p.v_cyl * (1.0 + 0.05 * w[j]);
  auto q_at = [&](double eps) {
    std::vector<double> x(N);
    for (std::size_t j = 0; j < N; ++j) x[j] = base[j] + eps * w[j];
    return q_energy_radial(p, RadialProfile::from_values(x, T));
  };
  const double h = 1e-3;
  const double fd = (8.0 * (q_at(h) - q_at(-h)) - (q_at(2 * h) - q_at(-2 * h))) / (12.0 * h);
  const double g = q_gradient_radial(p, RadialProfile::from_values(base, T), w);
  EXPECT_NEAR(g, fd, 1e-5 * std::abs(fd));
}

TEST(QFunctional, RandomGradientChecks) {
  for (int n : {5, 6, 7}) {
    const auto res = gradient_fd_check(params_for(n), 20240611);
    EXPECT_EQ(res.checks, 100);
    EXPECT_LE(res.worst_relative, 1e-5) << n;
  }
}

TEST(QFunctional, ScaleInvariance) {
  const auto& p = params_for(5);
  std::mt19937_64 rng(5);
  auto values = random_band_limited(rng, 256, 8, 0.1);
  for (double& x : values) x = p.v_cyl * (1.0 + x);
  const auto u = RadialProfile::from_values(values, 2.5 * p.t_cyl);
  const double q = q_energy_radial(p, u);
  for (double lambda : {0.5, 2.0, 10.0}) EXPECT_NEAR(q_energy_radial(p, u.scaled(lambda)), q, 1e-12 * q) << lambda;
}

TEST(QFunctional, FailureModes) {
  const auto& p = params_for(5);
  std::vector<double> neg(64, 0.5);
  neg[10] = -0.1;
  EXPECT_THROW(q_energy_radial(p, RadialProfile::from_values(neg, 3.0)), NonPositiveV);
  // squared content at the half grid's Nyquist mode aliases to a constant there
  std::vector<double> rough(256);
  for (std::size_t j = 0; j < rough.size(); ++j) rough[j] = 1.0 + 0.3 * std::cos(2 * pi * 64 * double(j) / 256.0);
  EXPECT_THROW(q_parts(p, RadialProfile::from_values(rough, 3.0)), QuadratureFailure);
  const auto u = RadialProfile::constant(p.v_cyl, 3.0, 64);
  const std::vector<double> short_w(32, 1.0);
  EXPECT_THROW(q_gradient_radial(p, u, short_w), InvalidParameter);
}

TEST(QFunctional, InvariantApproachesSphereFromBelow) {
  const auto& p = params_for(5);
  const double y90 = invariant_value(p, orbit_for(5, 0.9));
  const double y95 = invariant_value(p, orbit_for(5, 0.95));
  const double y99 = invariant_value(p, orbit_for(5, 0.99));
  EXPECT_LT(y90, y95);
  EXPECT_LT(y95, y99);
  const double y999 = invariant_value(p, orbit_for(5, 0.999));
  EXPECT_LT(y999, p.y_sph);
  EXPECT_GT(y999, 0.98 * p.y_sph);
}

TEST(QFunctional, CylinderInvariant) {
  const auto& p = params_for(6);
  const double T = 1.7;
  EXPECT_NEAR(cylinder_invariant_value(p, T),
              p.q_bar * std::pow(p.area_s * T * std::pow(p.v_cyl, p.p_sharp), 4.0 / 6.0), 1e-12);
}

TEST(MetricCount, Examples) {
  const auto& p = params_for(5);
  EXPECT_EQ(count_constant_q_metrics(p, 0.5 * p.t_cyl).k, 1);
  EXPECT_EQ(count_constant_q_metrics(p, 1.5 * p.t_cyl).k, 2);
  const auto c25 = count_constant_q_metrics(p, 2.5 * p.t_cyl);
  EXPECT_EQ(c25.k, 3);
  ASSERT_EQ(c25.delaunay_periods.size(), 2u);
  EXPECT_NEAR(c25.delaunay_periods[0], 2.5 * p.t_cyl, 1e-12);
  EXPECT_NEAR(c25.delaunay_periods[1], 1.25 * p.t_cyl, 1e-12);
  EXPECT_EQ(count_constant_q_metrics(p, 3.0 * p.t_cyl).k, 3);
  EXPECT_EQ(count_constant_q_metrics(p, p.t_cyl).k, 1);
  EXPECT_THROW(count_constant_q_metrics(p, 0.0), InvalidParameter);
  EXPECT_THROW(count_constant_q_metrics(p, -1.0), InvalidParameter);
}

TEST(MetricCount, UnitStaircase) {
  const auto& p = params_for(5);
  int prev = count_constant_q_metrics(p, 0.01 * p.t_cyl).k;
  EXPECT_EQ(prev, 1);
  for (int i = 2; i <= 600; ++i) {
    const double ratio = 0.01 * i;
    const int k = count_constant_q_metrics(p, ratio * p.t_cyl).k;
    EXPECT_GE(k, prev);
    EXPECT_LE(k - prev, 1);
    EXPECT_EQ(k, int(std::ceil(ratio - 1e-9))) << ratio;
    prev = k;
  }
  for (int m = 1; m <= 5; ++m) {
    EXPECT_EQ(count_constant_q_metrics(p, m * p.t_cyl).k, m);
    EXPECT_EQ(count_constant_q_metrics(p, m * p.t_cyl * (1 + 1e-9)).k, m + 1);
  }
}
