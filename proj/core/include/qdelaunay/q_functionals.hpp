#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "qdelaunay/delaunay_solver.hpp"
#include "qdelaunay/dimension_params.hpp"

namespace qdelaunay {

/// Uniform samples of a positive T-periodic radial function and its first
/// two derivatives at t_j = j T / N, j = 0..N-1.
struct RadialProfile {
  double period = 0.0;
  std::vector<double> u;
  std::vector<double> u1;
  std::vector<double> u2;

  std::size_t size() const { return u.size(); }
  double spacing() const { return period / double(u.size()); }
  bool positive() const;

  /// Derivatives by spectral differentiation of the samples.
  static RadialProfile from_values(std::vector<double> values, double period);
  /// `copies` periods of the orbit's stored samples.
  static RadialProfile from_orbit(const DelaunayOrbit& orbit, int copies = 1);
  static RadialProfile constant(double value, double period, std::size_t samples = 256);

  RadialProfile scaled(double lambda) const;
};

struct QParts {
  double energy = 0.0;  ///< area_s * int (u''^2 + c2 u'^2 + c0 u^2)
  double volume = 0.0;  ///< area_s * int u^{p_sharp}
  double q = 0.0;       ///< 2/(n-4) * energy / volume^{2/p_sharp}
};

/// Both integrals by the periodic trapezoidal rule, verified against the
/// rule on every other sample. Throws NonPositiveV or QuadratureFailure.
QParts q_parts(const DimensionParams& params, const RadialProfile& u, double verify_rtol = 1e-8);

double q_energy_radial(const DimensionParams& params, const RadialProfile& u);

/// Directional derivative of q_energy_radial at u along w (same grid),
/// with u'''' and u'' from spectral differentiation.
double q_gradient_radial(const DimensionParams& params, const RadialProfile& u, std::span<const double> w);

/// q_bar (area_s i_a)^{4/n}.
double invariant_value(const DimensionParams& params, const DelaunayOrbit& orbit);
/// q_bar (area_s T v_cyl^{p_sharp})^{4/n}: the cylinder of circumference T.
double cylinder_invariant_value(const DimensionParams& params, double period);
/// The alternative closed form 2/(n-4) q_bar (area_s i_a)^{n/4}, kept only for
/// comparison in selfcheck.
double printed_invariant_value(const DimensionParams& params, double i_a);

/// Real band-limited periodic samples: sum over 1 <= m <= max_mode of
/// (alpha_m cos + beta_m sin)(2 pi m j / N) with alpha_m, beta_m uniform in
/// [-amplitude, amplitude] / m^2.
std::vector<double> random_band_limited(std::mt19937_64& rng, std::size_t samples, int max_mode, double amplitude);

struct GradientCheck {
  int checks = 0;
  /// max |g - fd| / max(|g|, |fd|, 1e-6 Q) over all (profile, direction) pairs.
  double worst_relative = 0.0;
};

/// Fourth-order central differences of q_energy_radial (step 1e-3 relative
/// to the profile) against q_gradient_radial for `directions` band-limited
/// perturbations (|m| <= 8) of each of `profiles` random positive profiles
/// v_cyl (1 + 0.1 band-limited) on random circumferences in [t_cyl, 4 t_cyl].
GradientCheck gradient_fd_check(const DimensionParams& params, std::uint64_t seed, int profiles = 5,
                                int directions = 20, std::size_t samples = 256);

struct MetricCount {
  int k = 1;
  /// Delaunay periods T/l, l = 1..k-1, each strictly above t_cyl.
  std::vector<double> delaunay_periods;
};

/// Constant-Q metrics on the circle of circumference T: the cylinder plus one
/// Delaunay metric of period T/l for every l with T/l > t_cyl. Ratios T/t_cyl
/// within 1e-12 of an integer are snapped to it. Throws InvalidParameter for T <= 0.
MetricCount count_constant_q_metrics(const DimensionParams& params, double period);

}  // namespace qdelaunay
