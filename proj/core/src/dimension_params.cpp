#include "qdelaunay/dimension_params.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qdelaunay/errors.hpp"
#include "qdelaunay/special_functions.hpp"

namespace qdelaunay {

double DimensionParams::energy_power_coefficient() const {
  const double nd = n;
  return (nd - 4.0) * (nd - 4.0) * (nd * nd - 4.0) / 32.0;
}

DimensionParams make_params(int n) {
  if (n < 5) throw InvalidParameter("dimension n must be >= 5, got " + std::to_string(n));
  const double nd = n;
  DimensionParams out;
  out.n = n;
  out.c2 = (nd * (nd - 4.0) + 8.0) / 2.0;
  out.c0 = nd * nd * (nd - 4.0) * (nd - 4.0) / 16.0;
  out.r = nd * (nd - 4.0) * (nd * nd - 4.0) / 16.0;
  out.p = (nd + 4.0) / (nd - 4.0);
  out.p_sharp = 2.0 * nd / (nd - 4.0);
  out.q_bar = nd * (nd * nd - 4.0) / 8.0;
  out.v_cyl = std::pow(nd * (nd - 4.0) / (nd * nd - 4.0), (nd - 4.0) / 8.0);
  out.k_lin = out.p * out.r * std::pow(out.v_cyl, out.p - 1.0);
  out.h_cyl = -0.5 * out.c0 * out.v_cyl * out.v_cyl +
              out.energy_power_coefficient() * std::pow(out.v_cyl, out.p_sharp);

  // mu^4 + c2 mu^2 + (c0 - k_lin) = 0 as a quadratic in x = mu^2. The constant
  // term is negative, so exactly one root is positive; write it in the
  // cancellation-free form 2|C| / (c2 + sqrt(c2^2 + 4|C|)).
  const double constant = out.c0 - out.k_lin;
  const double disc = std::sqrt(out.c2 * out.c2 - 4.0 * constant);
  const double mu_sq = -2.0 * constant / (out.c2 + disc);
  out.mu = std::sqrt(mu_sq);
  out.t_cyl = 2.0 * std::numbers::pi / out.mu;

  out.area_s = unit_sphere_measure(n - 1);
  out.vol_s = unit_sphere_measure(n);
  out.y_sph = out.q_bar * std::pow(out.vol_s, 4.0 / nd);
  return out;
}

double v_sph_profile(const DimensionParams& params, double t) {
  return std::pow(std::cosh(t), -0.5 * (params.n - 4));
}

std::array<double, 5> v_sph_derivatives(const DimensionParams& params, double t) {
  // With g_k = cosh^{-k}: g_k'' = k^2 g_k - k(k+1) g_{k+2}, g_k' = -k sinh g_{k+1}.
  const double m = 0.5 * (params.n - 4);
  const double c = std::cosh(t);
  const double s = std::sinh(t);
  const auto g = [c](double k) { return std::pow(c, -k); };
  const double f0 = g(m);
  const double f1 = -m * s * g(m + 1);
  const double f2 = m * m * f0 - m * (m + 1) * g(m + 2);
  const double f3 = m * m * f1 + m * (m + 1) * (m + 2) * s * g(m + 3);
  const double g2pp = (m + 2) * (m + 2) * g(m + 2) - (m + 2) * (m + 3) * g(m + 4);
  const double f4 = m * m * f2 - m * (m + 1) * g2pp;
  return {f0, f1, f2, f3, f4};
}

MuVariants mu_closed_forms(int n) {
  const double nd = n;
  const double root = std::sqrt(nd * nd * nd * nd - 64.0 * nd + 64.0);
  MuVariants out;
  out.printed = 0.5 * std::sqrt(root - nd * (nd - 4.0) + 8.0);
  const double lin = root - nd * (nd - 4.0) - 8.0;
  out.linearized = lin > 0.0 ? 0.5 * std::sqrt(lin) : std::nan("");
  return out;
}

double mu_quartic_residual(const DimensionParams& params, double mu) {
  const double mu2 = mu * mu;
  return std::abs(mu2 * mu2 + params.c2 * mu2 + (params.c0 - params.k_lin));
}

SphereClosure sphere_closure_details(const DimensionParams& params, double quad_tol) {
  if (!(quad_tol > 0.0)) throw InvalidParameter("quad_tol must be positive");
  const double nd = params.n;
  // Tail on each side: int_L^inf cosh^{-n} <= 2^n e^{-nL} / n. Make both tails
  // together a thousandth of the requested tolerance.
  const double tail_budget = 1e-3 * quad_tol;
  const double half_width = (std::log(2.0 * std::pow(2.0, nd) / nd) - std::log(tail_budget)) / nd;
  const auto integrand = [nd](double t) { return std::pow(std::cosh(t), -nd); };
  // Symmetric integrand: integrate the half line and double.
  const QuadratureResult half = adaptive_gauss_kronrod(integrand, 0.0, half_width, 0.05 * quad_tol);

  SphereClosure out;
  out.integral = 2.0 * half.value;
  out.gamma_closed_form =
      std::sqrt(std::numbers::pi) * std::tgamma(0.5 * nd) / std::tgamma(0.5 * (nd + 1.0));
  out.rel_err_gamma = std::abs(out.integral - out.gamma_closed_form) / out.gamma_closed_form;
  out.rel_err_volume = std::abs(params.area_s * out.integral - params.vol_s) / params.vol_s;
  return out;
}

double sphere_closure_check(const DimensionParams& params, double quad_tol) {
  return sphere_closure_details(params, quad_tol).worst();
}

}  // namespace qdelaunay
