#pragma once

#include <array>
#include <functional>
#include <span>

#include "qdelaunay/dimension_params.hpp"

namespace qdelaunay {

/// Values below this are treated as a collapse of the conformal factor.
inline constexpr double kVFloor = 1e-12;

/// A point (t, v, v', v'', v''') of the first-order system.
struct CylinderState {
  double t = 0.0;
  double v = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  double v3 = 0.0;

  std::array<double, 4> phase() const { return {v, v1, v2, v3}; }
};

using PhaseRate = std::array<double, 4>;

/// v^e for v >= kVFloor; throws NonPositiveV otherwise.
double guarded_pow(double v, double exponent);

/// r v^p - c0 v, written as c0 v ((v / v_cyl)^{p-1} - 1) so that it vanishes
/// exactly at v = v_cyl.
double power_force(const DimensionParams& params, double v);

/// (v1, v2, v3, c2 v2 - c0 v + r v^p). Independent of s.t.
PhaseRate vector_field(const DimensionParams& params, const CylinderState& s);

/// -v1 v3 + v2^2/2 + (c2/2) v1^2 - (c0/2) v^2 + ((n-4)^2(n^2-4)/32) v^{p_sharp}
double hamiltonian(const DimensionParams& params, const CylinderState& s);

/// Gradient of the energy with respect to (v, v1, v2, v3).
std::array<double, 4> hamiltonian_gradient(const DimensionParams& params, const CylinderState& s);

/// Directional derivative of the energy along a rate vector, computed from
/// the analytic gradient. Along vector_field it vanishes identically.
double hamiltonian_rate(const DimensionParams& params, const CylinderState& s, const PhaseRate& rate);

/// Sum of |terms| of the energy, the natural scale for relative comparisons.
double hamiltonian_scale(const DimensionParams& params, const CylinderState& s);

/// v'''' - c2 v'' + c0 v - r v^p for a state with known fourth derivative.
/// Throws NonPositiveV for v <= 0 (no floor: closed forms decay below it).
double pointwise_residual(const DimensionParams& params, double v, double v2, double v4);

/// Profile callback: returns (v, v', v'', v''', v'''') at t.
using ProfileDerivatives = std::function<std::array<double, 5>(double)>;

/// max over ts of |v'''' - c2 v'' + c0 v - r v^p|.
double ode_residual(const DimensionParams& params, const ProfileDerivatives& profile,
                    std::span<const double> ts);

/// c0 - p r v0^(p-1): zeroth-order coefficient of the linearization at v0.
double linearized_coefficient(const DimensionParams& params, double v0);

/// xi^4 + c2 xi^2 + (c0 - k_lin): the cylinder linearization acting on cos(xi t).
double symbol_cyl(const DimensionParams& params, double xi);

}  // namespace qdelaunay
