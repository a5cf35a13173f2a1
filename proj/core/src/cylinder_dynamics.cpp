#include "qdelaunay/cylinder_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdelaunay/errors.hpp"

namespace qdelaunay {

double guarded_pow(double v, double exponent) {
  if (!(v >= kVFloor)) {
    throw NonPositiveV("v = " + std::to_string(v) + " below floor " + std::to_string(kVFloor));
  }
  return std::exp(exponent * std::log(v));
}

double power_force(const DimensionParams& params, double v) {
  if (!(v >= kVFloor)) {
    throw NonPositiveV("v = " + std::to_string(v) + " below floor " + std::to_string(kVFloor));
  }
  return params.c0 * v * std::expm1((params.p - 1.0) * std::log(v / params.v_cyl));
}

PhaseRate vector_field(const DimensionParams& params, const CylinderState& s) {
  return {s.v1, s.v2, s.v3, params.c2 * s.v2 + power_force(params, s.v)};
}

double hamiltonian(const DimensionParams& params, const CylinderState& s) {
  const double power = guarded_pow(s.v, params.p_sharp);
  return -s.v1 * s.v3 + 0.5 * s.v2 * s.v2 + 0.5 * params.c2 * s.v1 * s.v1 -
         0.5 * params.c0 * s.v * s.v + params.energy_power_coefficient() * power;
}

std::array<double, 4> hamiltonian_gradient(const DimensionParams& params, const CylinderState& s) {
  // d/dv of K v^{p#} is K p# v^{p#-1} = r v^p.
  return {power_force(params, s.v), -s.v3 + params.c2 * s.v1, s.v2, -s.v1};
}

double hamiltonian_rate(const DimensionParams& params, const CylinderState& s, const PhaseRate& rate) {
  const auto grad = hamiltonian_gradient(params, s);
  return grad[0] * rate[0] + grad[1] * rate[1] + grad[2] * rate[2] + grad[3] * rate[3];
}

double hamiltonian_scale(const DimensionParams& params, const CylinderState& s) {
  const double power = guarded_pow(s.v, params.p_sharp);
  return std::abs(s.v1 * s.v3) + 0.5 * s.v2 * s.v2 + 0.5 * params.c2 * s.v1 * s.v1 +
         0.5 * params.c0 * s.v * s.v + params.energy_power_coefficient() * power;
}

double pointwise_residual(const DimensionParams& params, double v, double v2, double v4) {
  // Closed-form profiles may legitimately go below the integration floor.
  if (!(v > 0.0)) throw NonPositiveV("residual needs v > 0, got " + std::to_string(v));
  return v4 - params.c2 * v2 + params.c0 * v - params.r * std::pow(v, params.p);
}

double ode_residual(const DimensionParams& params, const ProfileDerivatives& profile,
                    std::span<const double> ts) {
  double worst = 0.0;
  for (double t : ts) {
    const auto d = profile(t);
    worst = std::max(worst, std::abs(pointwise_residual(params, d[0], d[2], d[4])));
  }
  return worst;
}

double linearized_coefficient(const DimensionParams& params, double v0) {
  return params.c0 - params.p * params.r * guarded_pow(v0, params.p - 1.0);
}

double symbol_cyl(const DimensionParams& params, double xi) {
  const double xi2 = xi * xi;
  return xi2 * xi2 + params.c2 * xi2 + (params.c0 - params.k_lin);
}

}  // namespace qdelaunay
