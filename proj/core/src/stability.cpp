#include "qdelaunay/stability.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "qdelaunay/cylinder_dynamics.hpp"
#include "qdelaunay/detail/dormand_prince.hpp"
#include "qdelaunay/errors.hpp"
#include "qdelaunay/spectral.hpp"

namespace qdelaunay {

namespace {

void check_grid(std::size_t grid) {
  if (grid < 128 || !is_power_of_two(grid)) throw InvalidParameter("grid size must be a power of two >= 128");
}

// potential[j] = c0 - p r v_j^(p-1) on the grid.
Eigen::MatrixXd assemble(const DimensionParams& params, double circumference, const std::vector<double>& potential) {
  const std::size_t n = potential.size();
  const std::vector<double> d4 = spectral_derivative_row(n, circumference, 4);
  const std::vector<double> d2 = spectral_derivative_row(n, circumference, 2);
  Eigen::MatrixXd m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t idx = (j + n - k) % n;
      m(j, k) = d4[idx] - params.c2 * d2[idx];
    }
    m(j, j) += potential[j];
  }
  return m;
}

SpectrumReport solve(const Eigen::MatrixXd& m, std::size_t min_count, const std::vector<double>* mode) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw EigenFailure("symmetric eigensolver did not converge");
  const Eigen::VectorXd& ev = es.eigenvalues();
  SpectrumReport out;
  out.grid = std::size_t(m.rows());
  out.negative_count = int((ev.array() < 0.0).count());
  out.largest_magnitude = ev.cwiseAbs().maxCoeff();
  Eigen::Index zero_idx = 0;
  ev.cwiseAbs().minCoeff(&zero_idx);
  out.near_zero = ev(zero_idx);
  const std::size_t keep = std::min<std::size_t>(std::max<std::size_t>(min_count, out.negative_count + 2), ev.size());
  out.eigenvalues.assign(ev.data(), ev.data() + keep);
  if (mode != nullptr) {
    const Eigen::VectorXd e = es.eigenvectors().col(zero_idx);
    const Eigen::Map<const Eigen::VectorXd> w(mode->data(), Eigen::Index(mode->size()));
    out.translation_correlation = std::abs(e.dot(w)) / (e.norm() * w.norm());
  }
  return out;
}

using Vec8 = detail::Vec<8>;

Vec8 joint_field(const DimensionParams& params, const Vec8& y) {
  const double vp1 = guarded_pow(y[0], params.p - 1.0);
  Vec8 f;
  f[0] = y[1];
  f[1] = y[2];
  f[2] = y[3];
  f[3] = params.c2 * y[2] + power_force(params, y[0]);
  f[4] = y[5];
  f[5] = y[6];
  f[6] = y[7];
  f[7] = params.c2 * y[6] - params.c0 * y[4] + params.p * params.r * vp1 * y[4];
  return f;
}

struct Mismatch {
  double diff = 0.0;
  double scale = 0.0;
};

void compare(const DimensionParams& params, const Vec8& y, Mismatch& m) {
  const Vec8 f = joint_field(params, y);
  for (int i = 0; i < 4; ++i) {
    m.diff = std::max(m.diff, std::abs(y[4 + i] - f[i]));
    m.scale = std::max(m.scale, std::abs(f[i]));
  }
}

void run_half(const DimensionParams& params, Vec8 y, double span, double rtol, Mismatch& m) {
  const double atol = 1e-2 * rtol;
  const auto f = [&](const Vec8& x) { return joint_field(params, x); };
  const double dir = span > 0 ? 1.0 : -1.0;
  const double t_end = std::abs(span);
  double t = 0.0;
  double h = 1e-3 * t_end;
  double facold = 1e-4;
  Vec8 k1 = f(y);
  detail::Step<8> st;
  long steps = 0;
  while (t < t_end) {
    if (++steps > 10'000'000) throw MaxSteps("variational integration exceeded the step limit");
    h = std::min(h, t_end - t);
    detail::dopri_step<8>(f, y, k1, dir * h, rtol, atol, 8, st);
    if (st.err <= 1.0) {
      const auto seg = detail::make_segment<8>(0.0, dir * h, y, st);
      compare(params, seg(0.5 * dir * h), m);
      t += h;
      y = st.y_new;
      k1 = st.k[6];
      compare(params, y, m);
      h = detail::accepted_step_size(h, st.err, facold);
    } else {
      h = detail::rejected_step_size(h, st.err);
    }
    if (h < 1e-14 * t_end) throw StepFloor("variational integration step size underflow");
  }
}

}  // namespace

int nodal_arcs(const DelaunayOrbit& orbit, int l) {
  if (l < 1) throw InvalidParameter("nodal_arcs needs l >= 1");
  const std::size_t per = orbit.samples.size();
  if (per == 0) throw InvalidParameter("orbit has no samples");
  const double dt = orbit.t_a / double(per);
  std::vector<bool> positive;
  positive.reserve(per * std::size_t(l));
  for (int c = 0; c < l; ++c) {
    for (std::size_t j = 0; j < per; ++j) {
      positive.push_back(orbit.state_at((double(c * per + j) + 0.5) * dt).v1 > 0.0);
    }
  }
  int arcs = 0;
  for (std::size_t j = 0; j < positive.size(); ++j) {
    const bool prev = positive[(j + positive.size() - 1) % positive.size()];
    if (positive[j] && !prev) ++arcs;
  }
  if (arcs == 0 && positive.front()) arcs = 1;
  return arcs;
}

int cylinder_negative_modes(const DimensionParams& params, double period) {
  if (!(period > 0.0)) throw InvalidParameter("circumference must be positive");
  const long bound = long(std::ceil(period * params.mu / (2.0 * std::numbers::pi))) + 2;
  int count = 0;
  for (long m = -bound; m <= bound; ++m) {
    if (symbol_cyl(params, 2.0 * std::numbers::pi * double(m) / period) < 0.0) ++count;
  }
  return count;
}

int cylinder_negative_modes_closed_form(const DimensionParams& params, double period) {
  return 2 * int(std::floor(period / params.t_cyl)) + 1;
}

SpectrumReport discretized_spectrum(const DimensionParams& params, const DelaunayOrbit& orbit, int l,
                                    std::size_t grid) {
  check_grid(grid);
  if (l < 1) throw InvalidParameter("spectrum needs l >= 1");
  const double circumference = l * orbit.t_a;
  std::vector<double> potential(grid);
  std::vector<double> mode(grid);
  for (std::size_t j = 0; j < grid; ++j) {
    const CylinderState s = orbit.state_at(circumference * double(j) / double(grid));
    potential[j] = linearized_coefficient(params, s.v);
    mode[j] = s.v1;
  }
  SpectrumReport out = solve(assemble(params, circumference, potential), std::size_t(2 * l + 3), &mode);
  out.tag = "delaunay";
  out.circumference = circumference;
  out.a = orbit.a;
  out.copies = l;
  return out;
}

SpectrumReport cylinder_spectrum(const DimensionParams& params, double period, std::size_t grid) {
  check_grid(grid);
  if (!(period > 0.0)) throw InvalidParameter("circumference must be positive");
  const std::vector<double> potential(grid, params.c0 - params.k_lin);
  SpectrumReport out = solve(assemble(params, period, potential), 5, nullptr);
  out.tag = "cylinder";
  out.circumference = period;
  return out;
}

double variational_residual(const DimensionParams& params, const CylinderState& s0, double period, double rtol) {
  if (!(period > 0.0)) throw InvalidParameter("period must be positive");
  Vec8 y{s0.v, s0.v1, s0.v2, s0.v3, 0.0, 0.0, 0.0, 0.0};
  const Vec8 f0 = joint_field(params, y);
  for (int i = 0; i < 4; ++i) y[4 + i] = f0[i];
  Mismatch m;
  compare(params, y, m);
  run_half(params, y, 0.5 * period, rtol, m);
  run_half(params, y, -0.5 * period, rtol, m);
  return m.scale > 0.0 ? m.diff / m.scale : m.diff;
}

double variational_residual(const DimensionParams& params, const DelaunayOrbit& orbit, double rtol) {
  return variational_residual(params, orbit.state_at(0.0), orbit.t_a, rtol);
}

}  // namespace qdelaunay
