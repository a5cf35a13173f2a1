#pragma once

// Dormand-Prince 5(4) stepper shared by the trajectory integrator and the
// variational-equation integrator. Internal; not part of the installed API
// contract.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace qdelaunay::detail {

// Tableau (Hairer, Norsett & Wanner, DOPRI5).
inline constexpr double kA21 = 1.0 / 5.0;
inline constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
inline constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
inline constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                        kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
inline constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                        kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
inline constexpr double kA71 = 35.0 / 384.0, kA73 = 500.0 / 1113.0, kA74 = 125.0 / 192.0,
                        kA75 = -2187.0 / 6784.0, kA76 = 11.0 / 84.0;
inline constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                        kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;
inline constexpr double kD1 = -12715105075.0 / 11282082432.0,
                        kD3 = 87487479700.0 / 32700410799.0,
                        kD4 = -10690763975.0 / 1880347072.0,
                        kD5 = 701980252875.0 / 199316789632.0,
                        kD6 = -1453857185.0 / 822651844.0, kD7 = 69997945.0 / 29380423.0;

// PI controller constants.
inline constexpr double kSafe = 0.9;
inline constexpr double kBeta = 0.04;
inline constexpr double kExpo1 = 0.2 - kBeta * 0.75;
inline constexpr double kFacShrink = 5.0;  // h_new >= h / 5
inline constexpr double kFacGrow = 0.1;    // h_new <= 10 h

template <std::size_t D>
using Vec = std::array<double, D>;

template <std::size_t D>
struct Step {
  Vec<D> y_new{};
  std::array<Vec<D>, 7> k{};
  double err = 0.0;
};

template <std::size_t D>
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  std::array<std::array<double, 5>, D> coef{};

  Vec<D> operator()(double t) const {
    const double theta = (t - t0) / h;
    const double theta1 = 1.0 - theta;
    Vec<D> out{};
    for (std::size_t i = 0; i < D; ++i) {
      const auto& c = coef[i];
      out[i] = c[0] + theta * (c[1] + theta1 * (c[2] + theta * (c[3] + theta1 * c[4])));
    }
    return out;
  }
};

template <std::size_t D, std::size_t N>
Vec<D> stage(const Vec<D>& y, double h, const std::array<double, N>& a,
             const std::array<const Vec<D>*, N>& k) {
  Vec<D> out = y;
  for (std::size_t i = 0; i < D; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < N; ++j) acc += a[j] * (*k[j])[i];
    out[i] += h * acc;
  }
  return out;
}

/// One step of size h from (y, k1 = f(y)). `f` may throw; the exception
/// propagates. `ncomp` leading components enter the error norm.
template <std::size_t D, class F>
void dopri_step(const F& f, const Vec<D>& y, const Vec<D>& k1, double h, double rtol,
                double atol, std::size_t ncomp, Step<D>& out) {
  auto& k = out.k;
  k[0] = k1;
  k[1] = f(stage<D, 1>(y, h, {kA21}, {&k[0]}));
  k[2] = f(stage<D, 2>(y, h, {kA31, kA32}, {&k[0], &k[1]}));
  k[3] = f(stage<D, 3>(y, h, {kA41, kA42, kA43}, {&k[0], &k[1], &k[2]}));
  k[4] = f(stage<D, 4>(y, h, {kA51, kA52, kA53, kA54}, {&k[0], &k[1], &k[2], &k[3]}));
  k[5] = f(stage<D, 5>(y, h, {kA61, kA62, kA63, kA64, kA65}, {&k[0], &k[1], &k[2], &k[3], &k[4]}));
  out.y_new = stage<D, 6>(y, h, {kA71, 0.0, kA73, kA74, kA75, kA76},
                          {&k[0], &k[1], &k[2], &k[3], &k[4], &k[5]});
  k[6] = f(out.y_new);
  double sum = 0.0;
  for (std::size_t i = 0; i < ncomp; ++i) {
    const double e = h * (kE1 * k[0][i] + kE3 * k[2][i] + kE4 * k[3][i] + kE5 * k[4][i] +
                          kE6 * k[5][i] + kE7 * k[6][i]);
    const double sk = atol + rtol * std::max(std::abs(y[i]), std::abs(out.y_new[i]));
    sum += (e / sk) * (e / sk);
  }
  out.err = std::sqrt(sum / double(ncomp));
}

template <std::size_t D>
DenseSegment<D> make_segment(double t0, double h, const Vec<D>& y, const Step<D>& st) {
  DenseSegment<D> seg;
  seg.t0 = t0;
  seg.h = h;
  const auto& k = st.k;
  for (std::size_t i = 0; i < D; ++i) {
    const double ydiff = st.y_new[i] - y[i];
    const double bspl = h * k[0][i] - ydiff;
    seg.coef[i][0] = y[i];
    seg.coef[i][1] = ydiff;
    seg.coef[i][2] = bspl;
    seg.coef[i][3] = ydiff - h * k[6][i] - bspl;
    seg.coef[i][4] = h * (kD1 * k[0][i] + kD3 * k[2][i] + kD4 * k[3][i] + kD5 * k[4][i] +
                          kD6 * k[5][i] + kD7 * k[6][i]);
  }
  return seg;
}

/// PI controller. Returns the proposed next step for an accepted step and
/// updates facold.
inline double accepted_step_size(double h, double err, double& facold) {
  const double fac11 = std::pow(std::max(err, 1e-300), kExpo1);
  double fac = fac11 / std::pow(facold, kBeta);
  fac = std::max(kFacGrow, std::min(kFacShrink, fac / kSafe));
  facold = std::max(err, 1e-4);
  return h / fac;
}

inline double rejected_step_size(double h, double err) {
  const double fac11 = std::pow(std::max(err, 1e-300), kExpo1);
  return h / std::min(kFacShrink, fac11 / kSafe);
}

}  // namespace qdelaunay::detail
