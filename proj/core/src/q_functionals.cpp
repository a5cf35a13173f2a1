#include "qdelaunay/q_functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qdelaunay/cylinder_dynamics.hpp"
#include "qdelaunay/errors.hpp"
#include "qdelaunay/spectral.hpp"

namespace qdelaunay {

namespace {

void require_positive(const RadialProfile& u) {
  if (u.u.empty() || !(u.period > 0.0)) throw InvalidParameter("empty profile or non-positive period");
  if (!u.positive()) throw NonPositiveV("profile is not positive");
}

struct Sums {
  double quad = 0.0;
  double power = 0.0;
};

Sums trapezoid_sums(const DimensionParams& params, const RadialProfile& u, std::size_t stride) {
  Sums s;
  std::size_t count = 0;
  for (std::size_t j = 0; j < u.size(); j += stride, ++count) {
    s.quad += u.u2[j] * u.u2[j] + params.c2 * u.u1[j] * u.u1[j] + params.c0 * u.u[j] * u.u[j];
    s.power += std::pow(u.u[j], params.p_sharp);
  }
  const double h = u.period / double(count);
  s.quad *= h;
  s.power *= h;
  return s;
}

}  // namespace

bool RadialProfile::positive() const {
  return std::all_of(u.begin(), u.end(), [](double x) { return x > 0.0; });
}

RadialProfile RadialProfile::from_values(std::vector<double> values, double period) {
  if (values.empty() || !(period > 0.0)) throw InvalidParameter("empty profile or non-positive period");
  RadialProfile out;
  out.period = period;
  out.u1 = spectral_derivative(values, period, 1);
  out.u2 = spectral_derivative(values, period, 2);
  out.u = std::move(values);
  return out;
}

RadialProfile RadialProfile::from_orbit(const DelaunayOrbit& orbit, int copies) {
  if (copies < 1) throw InvalidParameter("copies must be >= 1");
  if (orbit.samples.empty()) throw InvalidParameter("orbit has no samples");
  RadialProfile out;
  out.period = copies * orbit.t_a;
  for (int c = 0; c < copies; ++c) {
    for (const CylinderState& s : orbit.samples) {
      out.u.push_back(s.v);
      out.u1.push_back(s.v1);
      out.u2.push_back(s.v2);
    }
  }
  return out;
}

RadialProfile RadialProfile::constant(double value, double period, std::size_t samples) {
  if (samples == 0 || !(period > 0.0)) throw InvalidParameter("empty profile or non-positive period");
  RadialProfile out;
  out.period = period;
  out.u.assign(samples, value);
  out.u1.assign(samples, 0.0);
  out.u2.assign(samples, 0.0);
  return out;
}

RadialProfile RadialProfile::scaled(double lambda) const {
  RadialProfile out = *this;
  for (auto* vec : {&out.u, &out.u1, &out.u2}) {
    for (double& x : *vec) x *= lambda;
  }
  return out;
}

QParts q_parts(const DimensionParams& params, const RadialProfile& u, double verify_rtol) {
  require_positive(u);
  const Sums full = trapezoid_sums(params, u, 1);
  if (u.size() >= 16 && u.size() % 2 == 0) {
    const Sums half = trapezoid_sums(params, u, 2);
    const double dq = std::abs(full.quad - half.quad) / std::abs(full.quad);
    const double dv = std::abs(full.power - half.power) / std::abs(full.power);
    if (!(dq <= verify_rtol && dv <= verify_rtol)) {
      std::ostringstream msg;
      msg.precision(3);
      msg << "trapezoid on " << u.size() << " vs " << u.size() / 2 << " samples differ by " << std::max(dq, dv)
          << " (relative)";
      throw QuadratureFailure(msg.str());
    }
  }
  QParts out;
  out.energy = params.area_s * full.quad;
  out.volume = params.area_s * full.power;
  out.q = 2.0 / (params.n - 4) * out.energy / std::pow(out.volume, 2.0 / params.p_sharp);
  return out;
}

double q_energy_radial(const DimensionParams& params, const RadialProfile& u) { return q_parts(params, u).q; }

double q_gradient_radial(const DimensionParams& params, const RadialProfile& u, std::span<const double> w) {
  require_positive(u);
  if (w.size() != u.size()) throw InvalidParameter("perturbation and profile sizes differ");
  const QParts parts = q_parts(params, u);
  const std::vector<double> d4 = spectral_derivative(u.u, u.period, 4);
  const std::vector<double> d2 = spectral_derivative(u.u, u.period, 2);
  const double ratio = parts.energy / parts.volume;
  std::vector<double> integrand(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double pu = d4[j] - params.c2 * d2[j] + params.c0 * u.u[j];
    integrand[j] = w[j] * (pu - ratio * std::pow(u.u[j], params.p));
  }
  const double integral = params.area_s * periodic_trapezoid(integrand, u.period);
  return 4.0 / ((params.n - 4) * std::pow(parts.volume, 2.0 / params.p_sharp)) * integral;
}

double invariant_value(const DimensionParams& params, const DelaunayOrbit& orbit) {
  return params.q_bar * std::pow(params.area_s * orbit.i_a, 4.0 / params.n);
}

double cylinder_invariant_value(const DimensionParams& params, double period) {
  const double vol = params.area_s * period * std::pow(params.v_cyl, params.p_sharp);
  return params.q_bar * std::pow(vol, 4.0 / params.n);
}

double printed_invariant_value(const DimensionParams& params, double i_a) {
  return 2.0 / (params.n - 4) * params.q_bar * std::pow(params.area_s * i_a, params.n / 4.0);
}

std::vector<double> random_band_limited(std::mt19937_64& rng, std::size_t samples, int max_mode, double amplitude) {
  std::uniform_real_distribution<double> coef(-amplitude, amplitude);
  std::vector<double> out(samples, 0.0);
  for (int m = 1; m <= max_mode; ++m) {
    const double alpha = coef(rng) / (m * m);
    const double beta = coef(rng) / (m * m);
    for (std::size_t j = 0; j < samples; ++j) {
      const double theta = 2.0 * std::numbers::pi * m * double(j) / double(samples);
      out[j] += alpha * std::cos(theta) + beta * std::sin(theta);
    }
  }
  return out;
}

GradientCheck gradient_fd_check(const DimensionParams& params, std::uint64_t seed, int profiles, int directions,
                                std::size_t samples) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> circ(params.t_cyl, 4.0 * params.t_cyl);
  GradientCheck out;
  for (int pi = 0; pi < profiles; ++pi) {
    const double period = circ(rng);
    std::vector<double> values = random_band_limited(rng, samples, 8, 0.1);
    for (double& x : values) x = params.v_cyl * (1.0 + x);
    const RadialProfile u = RadialProfile::from_values(values, period);
    const double q = q_energy_radial(params, u);
    for (int di = 0; di < directions; ++di) {
      const std::vector<double> w = random_band_limited(rng, samples, 8, 1.0);
      double w_max = 0.0;
      for (double x : w) w_max = std::max(w_max, std::abs(x));
      const double eps = 1e-3 * params.v_cyl / w_max;
      const auto q_at = [&](double step) {
        std::vector<double> shifted = values;
        for (std::size_t j = 0; j < samples; ++j) shifted[j] += step * w[j];
        return q_energy_radial(params, RadialProfile::from_values(std::move(shifted), period));
      };
      const double fd = (8.0 * (q_at(eps) - q_at(-eps)) - (q_at(2.0 * eps) - q_at(-2.0 * eps))) / (12.0 * eps);
      const double g = q_gradient_radial(params, u, w);
      const double denom = std::max({std::abs(g), std::abs(fd), 1e-6 * q});
      out.worst_relative = std::max(out.worst_relative, std::abs(g - fd) / denom);
      ++out.checks;
    }
  }
  return out;
}

MetricCount count_constant_q_metrics(const DimensionParams& params, double period) {
  if (!(period > 0.0) || !std::isfinite(period)) throw InvalidParameter("circumference must be positive");
  double ratio = period / params.t_cyl;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-12 * ratio) ratio = nearest;
  MetricCount out;
  out.k = std::max(1, int(std::ceil(ratio)));
  for (int l = 1; l < out.k; ++l) out.delaunay_periods.push_back(period / l);
  return out;
}

}  // namespace qdelaunay
