#pragma once

#include <array>

namespace qdelaunay {

/// Every n-dependent constant of the radial constant-Q-curvature equation
///
///   v'''' - c2 v'' + c0 v = r v^p,   p = (n+4)/(n-4),
///
/// its conserved energy, the cylinder linearization and the round-sphere
/// reference values. Immutable once built by make_params().
struct DimensionParams {
  int n = 0;
  double c2 = 0.0;       ///< (n(n-4)+8)/2
  double c0 = 0.0;       ///< n^2 (n-4)^2 / 16
  double r = 0.0;        ///< n(n-4)(n^2-4)/16
  double p = 0.0;        ///< (n+4)/(n-4)
  double p_sharp = 0.0;  ///< 2n/(n-4)
  double q_bar = 0.0;    ///< n(n^2-4)/8, Q-curvature of the round sphere
  double v_cyl = 0.0;    ///< constant (cylindrical) solution
  double k_lin = 0.0;    ///< p r v_cyl^(p-1)
  double h_cyl = 0.0;    ///< energy of the cylindrical solution
  double mu = 0.0;       ///< oscillation frequency of the cylinder linearization
  double t_cyl = 0.0;    ///< 2 pi / mu
  double area_s = 0.0;   ///< |S^{n-1}|
  double vol_s = 0.0;    ///< |S^n|
  double y_sph = 0.0;    ///< q_bar |S^n|^(4/n)

  /// Coefficient of v^{p_sharp} in the energy: (n-4)^2 (n^2-4) / 32.
  double energy_power_coefficient() const;
};

/// Throws InvalidParameter for n < 5.
DimensionParams make_params(int n);

/// cosh(t)^{-(n-4)/2}.
double v_sph_profile(const DimensionParams& params, double t);

/// v_sph and its first four derivatives at t, in closed form.
std::array<double, 5> v_sph_derivatives(const DimensionParams& params, double t);

/// The two candidate closed forms for mu: mu^2 = (sqrt(n^4-64n+64) - n(n-4) + sign*8)/4.
/// `printed` uses +8, `linearized` uses -8. Only the quartic root in
/// DimensionParams::mu is used by the rest of the library.
struct MuVariants {
  double printed = 0.0;
  double linearized = 0.0;
};
MuVariants mu_closed_forms(int n);

/// |mu^4 + c2 mu^2 + (c0 - k_lin)| for a candidate frequency.
double mu_quartic_residual(const DimensionParams& params, double mu);

struct SphereClosure {
  double integral = 0.0;         ///< quadrature of cosh^{-n} over R
  double gamma_closed_form = 0.0;  ///< sqrt(pi) Gamma(n/2) / Gamma((n+1)/2)
  double rel_err_gamma = 0.0;
  double rel_err_volume = 0.0;   ///< |area_s * integral - vol_s| / vol_s
  double worst() const { return rel_err_gamma > rel_err_volume ? rel_err_gamma : rel_err_volume; }
};

/// Integrates cosh^{-n} over a truncated line whose tail is bounded
/// analytically by 2^n e^{-nL}/n, then compares against the Gamma closed
/// form and against vol_s. Throws QuadratureFailure if quad_tol is not met.
SphereClosure sphere_closure_details(const DimensionParams& params, double quad_tol);
double sphere_closure_check(const DimensionParams& params, double quad_tol);

}  // namespace qdelaunay
