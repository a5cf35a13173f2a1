#include "qdelaunay/delaunay_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include <Eigen/Dense>

#include "qdelaunay/detail/dormand_prince.hpp"
#include "qdelaunay/polyline.hpp"

namespace qdelaunay {

namespace {

constexpr double kEdgeMargin = 1e-6;
constexpr double kScanMin = 1e-9;
// Upper edges tried in turn when inverting a -> T_a: 1 - 10^-k. Close to 1
// the Turn- window of the shooting map can be narrower than one ulp of b
// (n = 5 already at k = 5), so the first edge that fails ends the search.
constexpr int kPeriodSearchFirstK = 4;
constexpr int kPeriodSearchLastK = 6;
// A bracket that has shrunk to adjacent doubles is accepted if |g| is below
// this; anything larger means g jumps across the bracket.
constexpr double kCollapsedResidualLimit = 1e-5;

int rank_of(ShotOutcome o) {
  switch (o) {
    case ShotOutcome::Escape: return 0;
    case ShotOutcome::TurnPositive: return 1;
    case ShotOutcome::TurnNegative: return 2;
    case ShotOutcome::Crash: return 3;
    case ShotOutcome::Unresolved: return -1;
  }
  return -1;
}

bool is_turn(const Shot& s) {
  return s.outcome == ShotOutcome::TurnPositive || s.outcome == ShotOutcome::TurnNegative;
}

std::array<EventSpec, 3> shot_events(const DimensionParams& params, double b, const ShootingOptions& opt) {
  return {EventSpec::turning_point(Crossing::Upward, default_arm_eps(params, b)),
          EventSpec::v_floor(opt.crash_level), EventSpec::v_ceiling(opt.v_ceiling)};
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

CylinderState reflect(const CylinderState& s, double t) { return {t, s.v, -s.v1, s.v2, -s.v3}; }

double max_abs_diff(const CylinderState& x, const CylinderState& y) {
  return std::max({std::abs(x.v - y.v), std::abs(x.v1 - y.v1), std::abs(x.v2 - y.v2),
                   std::abs(x.v3 - y.v3)});
}

void check_parameter(const DimensionParams& params, double a) {
  if (!(a >= params.v_cyl + kEdgeMargin && a <= 1.0 - kEdgeMargin)) {
    throw InvalidParameter("Delaunay parameter a = " + fmt(a) + " outside [v_cyl + 1e-6, 1 - 1e-6] = [" +
                           fmt(params.v_cyl + kEdgeMargin) + ", " + fmt(1.0 - kEdgeMargin) + "]");
  }
}

// Locates b with g(b) = 0 inside a Turn+/Turn- bracket using the Illinois
// variant of regula falsi. Shots that do not turn carry no g; they replace
// the endpoint on their side of the ordering and force bisection until both
// endpoints turn again.
Shot refine_root(const DimensionParams& params, double a, Shot lo, Shot hi, const ShootingOptions& opt) {
  double f_lo = lo.g, f_hi = hi.g;
  int side = 0;
  std::optional<Shot> best;
  const auto consider = [&](const Shot& s) {
    if (is_turn(s) && (!best || std::abs(s.g) < std::abs(best->g))) best = s;
  };
  consider(lo);
  consider(hi);
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (best && std::abs(best->g) <= opt.tol) return *best;
    const double mid = 0.5 * (lo.b + hi.b);
    if (mid == lo.b || mid == hi.b) break;
    double b = mid;
    if (is_turn(lo) && is_turn(hi)) {
      b = (lo.b * f_hi - hi.b * f_lo) / (f_hi - f_lo);
      if (!(b > std::min(lo.b, hi.b) && b < std::max(lo.b, hi.b))) b = mid;
    }
    const Shot s = classify_shot(params, a, b, opt);
    consider(s);
    const int r = rank_of(s.outcome);
    if (r < 0) throw NoConvergence("unresolved shot at b = " + fmt(b) + " for a = " + fmt(a));
    if (r <= 1) {
      lo = s;
      f_lo = s.g;
      if (side == 1) f_hi *= 0.5;
      side = 1;
    } else {
      hi = s;
      f_hi = s.g;
      if (side == -1) f_lo *= 0.5;
      side = -1;
    }
  }
  if (best && std::abs(best->g) <= kCollapsedResidualLimit) return *best;
  throw NoConvergence("shooting for a = " + fmt(a) + " stalled" +
                      (best ? " with |g| = " + fmt(std::abs(best->g)) : std::string()) + " on [" +
                      fmt(hi.b) + ", " + fmt(lo.b) + "]");
}

using Phase = std::array<double, 4>;

// Flow of the state together with M tangent vectors over `span` (either
// sign). Step control acts on the state only; the tangents feed a Newton
// Jacobian and need no more than a few digits.
template <std::size_t M>
std::array<Phase, M> flow_tangents(const DimensionParams& params, const Phase& y0, const std::array<Phase, M>& w0,
                                   double span, double rtol) {
  constexpr std::size_t D = 4 + 4 * M;
  using V = detail::Vec<D>;
  const auto f = [&](const V& x) {
    const double vp1 = guarded_pow(x[0], params.p - 1.0);
    const double dv = -params.c0 + params.p * params.r * vp1;
    V out;
    out[0] = x[1];
    out[1] = x[2];
    out[2] = x[3];
    out[3] = params.c2 * x[2] + power_force(params, x[0]);
    for (std::size_t m = 0; m < M; ++m) {
      const std::size_t o = 4 + 4 * m;
      out[o] = x[o + 1];
      out[o + 1] = x[o + 2];
      out[o + 2] = x[o + 3];
      out[o + 3] = params.c2 * x[o + 2] + dv * x[o];
    }
    return out;
  };
  V y{};
  for (std::size_t i = 0; i < 4; ++i) y[i] = y0[i];
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t i = 0; i < 4; ++i) y[4 + 4 * m + i] = w0[m][i];
  const double dir = span > 0.0 ? 1.0 : -1.0;
  const double t_end = std::abs(span);
  double t = 0.0, h = 1e-2 * t_end, facold = 1e-4;
  V k1 = f(y);
  detail::Step<D> st;
  for (long steps = 0; t < t_end; ++steps) {
    if (steps > 10'000'000) throw MaxSteps("tangent integration exceeded the step limit");
    h = std::min(h, t_end - t);
    detail::dopri_step<D>(f, y, k1, dir * h, rtol, 1e-2 * rtol, 4, st);
    if (st.err <= 1.0) {
      t += h;
      y = st.y_new;
      k1 = st.k[6];
      h = detail::accepted_step_size(h, st.err, facold);
    } else {
      h = detail::rejected_step_size(h, st.err);
    }
    if (h < 1e-14 * t_end) throw StepFloor("tangent integration step size underflow");
  }
  std::array<Phase, M> out;
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t i = 0; i < 4; ++i) out[m][i] = y[4 + 4 * m + i];
  return out;
}

// Unknowns of the two-leg matching: v''(0), the minimum value, v'' at the
// minimum and the half period.
struct LegData {
  double b = 0.0;
  double eps = 0.0;
  double c = 0.0;
  double half = 0.0;
};

struct Legs {
  Trajectory from_max;
  Trajectory from_min;
  Phase mismatch{};
  double size = std::numeric_limits<double>::infinity();
};

Legs run_legs(const DimensionParams& params, double a, const LegData& x, const IntegratorOptions& o) {
  Legs legs;
  legs.from_max = integrate(params, {0.0, a, 0.0, x.b, 0.0}, 0.5 * x.half, o);
  legs.from_min = integrate(params, {x.half, x.eps, 0.0, x.c, 0.0}, 0.5 * x.half, o);
  const Phase p = legs.from_max.final_state().phase();
  const Phase q = legs.from_min.final_state().phase();
  legs.size = 0.0;
  for (int i = 0; i < 4; ++i) {
    legs.mismatch[i] = p[i] - q[i];
    legs.size = std::max(legs.size, std::abs(legs.mismatch[i]));
  }
  return legs;
}

// Newton on the mismatch at the quarter period, with the Jacobian from the
// variational equations. Returns the best iterate seen.
std::pair<LegData, Legs> polish_legs(const DimensionParams& params, double a, LegData x, const IntegratorOptions& o,
                                     int& iterations) {
  IntegratorOptions quiet = o;
  quiet.record = false;
  quiet.accumulate_volume = false;
  Legs cur = run_legs(params, a, x, quiet);
  iterations = 0;
  for (int it = 0; it < 12 && cur.size > 1e-14; ++it) {
    const Phase p = cur.from_max.final_state().phase();
    const Phase q = cur.from_min.final_state().phase();
    const auto wf = flow_tangents<1>(params, {a, 0.0, x.b, 0.0}, {Phase{0.0, 0.0, 1.0, 0.0}}, 0.5 * x.half, o.rtol);
    const auto wb = flow_tangents<2>(params, {x.eps, 0.0, x.c, 0.0},
                                     {Phase{1.0, 0.0, 0.0, 0.0}, Phase{0.0, 0.0, 1.0, 0.0}}, -0.5 * x.half, o.rtol);
    const PhaseRate fp = vector_field(params, {0.0, p[0], p[1], p[2], p[3]});
    const PhaseRate fq = vector_field(params, {0.0, q[0], q[1], q[2], q[3]});
    Eigen::Matrix4d jac;
    Eigen::Vector4d rhs;
    for (int i = 0; i < 4; ++i) {
      jac(i, 0) = wf[0][i];
      jac(i, 1) = -wb[0][i];
      jac(i, 2) = -wb[1][i];
      jac(i, 3) = 0.5 * (fp[i] + fq[i]);
      rhs(i) = -cur.mismatch[i];
    }
    const Eigen::Vector4d dx = jac.fullPivLu().solve(rhs);
    if (!dx.allFinite()) break;
    bool improved = false;
    for (double lambda = 1.0; lambda > 1e-3; lambda *= 0.5) {
      const LegData trial{x.b + lambda * dx(0), x.eps + lambda * dx(1), x.c + lambda * dx(2),
                          x.half + lambda * dx(3)};
      if (!(trial.eps > 0.0 && trial.half > 0.0)) continue;
      try {
        Legs next = run_legs(params, a, trial, quiet);
        if (next.size < cur.size) {
          x = trial;
          cur = std::move(next);
          improved = true;
          break;
        }
      } catch (const Error&) {
      }
    }
    ++iterations;
    if (!improved) break;
  }
  return {x, std::move(cur)};
}

}  // namespace

double ShootingOptions::integrator_rtol() const { return std::min(tol * 1e-2, 1e-10); }

std::string to_string(ShotOutcome o) {
  switch (o) {
    case ShotOutcome::Escape: return "escape";
    case ShotOutcome::TurnPositive: return "turn+";
    case ShotOutcome::TurnNegative: return "turn-";
    case ShotOutcome::Crash: return "crash";
    case ShotOutcome::Unresolved: return "unresolved";
  }
  return "unknown";
}

Shot classify_shot(const DimensionParams& params, double a, double b, const ShootingOptions& opt) {
  IntegratorOptions o;
  o.rtol = std::max(opt.integrator_rtol(), 1e-14);
  o.atol = std::max(opt.integrator_atol(), 1e-14);
  o.record = false;
  o.accumulate_volume = true;
  o.throw_on_failure = false;
  const auto events = shot_events(params, b, opt);
  const Trajectory traj = integrate(params, {0.0, a, 0.0, b, 0.0}, opt.t_max, o, events);

  Shot shot;
  shot.b = b;
  switch (traj.terminal()) {
    case Termination::Event: {
      const EventHit& hit = *traj.event();
      if (hit.index == 0) {
        shot.t_turn = hit.state.t;
        shot.turn_state = hit.state;
        shot.g = hit.state.v3;
        shot.volume = hit.volume;
        shot.outcome = shot.g > 0.0 ? ShotOutcome::TurnPositive : ShotOutcome::TurnNegative;
      } else if (hit.index == 1) {
        shot.outcome = ShotOutcome::Crash;
      } else {
        shot.outcome = ShotOutcome::Escape;
      }
      break;
    }
    case Termination::NonPositiveV: shot.outcome = ShotOutcome::Crash; break;
    default: shot.outcome = ShotOutcome::Unresolved; break;
  }
  return shot;
}

CylinderState DelaunayOrbit::half_state(double tau) const {
  if (tau <= from_max.t_max()) return from_max.state_at(std::max(tau, from_max.t_min()));
  return from_min.state_at(std::min(tau, from_min.t_max()));
}

CylinderState DelaunayOrbit::state_at(double t) const {
  double tau = std::fmod(t, t_a);
  if (tau < 0.0) tau += t_a;
  if (tau <= 0.5 * t_a) {
    CylinderState s = half_state(tau);
    s.t = t;
    return s;
  }
  return reflect(half_state(t_a - tau), t);
}

DelaunayOrbit shoot(const DimensionParams& params, double a, const ShootingOptions& opt) {
  check_parameter(params, a);
  if (!(opt.tol > 0.0) || opt.scan_points < 2 || opt.samples_per_period < 4) {
    throw InvalidParameter("invalid shooting options");
  }

  // Coarse scan, geometric in |b| so that the near-cylinder regime
  // b ~ -(a - v_cyl) mu^2 is resolved as well as the near-sphere one.
  const double b_max = 1.5 * 0.5 * (params.n - 4);
  const int m = opt.scan_points;
  std::vector<Shot> scan;
  scan.reserve(m);
  for (int j = 0; j < m; ++j) {
    const double x = std::log(kScanMin) + (std::log(b_max) - std::log(kScanMin)) * j / (m - 1);
    scan.push_back(classify_shot(params, a, -std::exp(x), opt));
  }

  std::optional<std::pair<Shot, Shot>> bracket;
  int transitions = 0;
  const Shot* prev = nullptr;
  for (const Shot& s : scan) {
    if (rank_of(s.outcome) < 0) continue;
    if (prev && rank_of(prev->outcome) <= 1 && rank_of(s.outcome) >= 2) {
      ++transitions;
      if (!bracket) bracket.emplace(*prev, s);
    }
    prev = &s;
  }
  if (!bracket) {
    std::string summary;
    for (const Shot& s : scan) summary += to_string(s.outcome).substr(0, 1);
    throw BracketFailure("no sign change of the shooting classification for a = " + fmt(a) +
                         " (scan: " + summary + ")");
  }

  // Bisection on the ordered classification until the bracket is Turn+/Turn-.
  Shot lo = bracket->first, hi = bracket->second;
  for (int it = 0; !(lo.outcome == ShotOutcome::TurnPositive && hi.outcome == ShotOutcome::TurnNegative);
       ++it) {
    const double mid = 0.5 * (lo.b + hi.b);
    if (it >= opt.max_iterations || mid == lo.b || mid == hi.b) {
      throw NoConvergence("could not isolate a Turn+/Turn- bracket for a = " + fmt(a) + " between b = " +
                          fmt(lo.b) + " (" + to_string(lo.outcome) + ") and " + fmt(hi.b) + " (" +
                          to_string(hi.outcome) + ")");
    }
    const Shot s = classify_shot(params, a, mid, opt);
    const int r = rank_of(s.outcome);
    if (r < 0) throw NoConvergence("unresolved shot at b = " + fmt(mid) + " for a = " + fmt(a));
    if (r <= 1) {
      lo = s;
    } else {
      hi = s;
    }
  }

  const Shot root = refine_root(params, a, lo, hi, opt);

  // Polish the bracketed root by matching two legs at the quarter period.
  IntegratorOptions o;
  o.rtol = std::max(std::min(opt.integrator_rtol(), 1e-12), 1e-14);
  o.atol = 1e-2 * o.rtol;
  o.accumulate_volume = true;
  const LegData seed{root.b, root.turn_state.v, root.turn_state.v2, root.t_turn};
  int iterations = 0;
  const auto [x, quiet_legs] = polish_legs(params, a, seed, o, iterations);
  Legs legs = run_legs(params, a, x, o);

  DelaunayOrbit orbit;
  orbit.a = a;
  orbit.b = x.b;
  orbit.c = x.c;
  orbit.root_candidates = transitions;
  orbit.newton_iterations = iterations;
  orbit.t_a = 2.0 * x.half;
  orbit.eps_a = x.eps;
  orbit.i_a = 2.0 * (std::abs(legs.from_max.final_volume()) + std::abs(legs.from_min.final_volume()));
  orbit.h = hamiltonian(params, {0.0, a, 0.0, x.b, 0.0});
  orbit.g_residual = std::abs(root.g);
  orbit.defect = legs.size;
  orbit.max_drift = std::max(legs.from_max.max_drift(), legs.from_min.max_drift());
  orbit.max_drift = std::max(orbit.max_drift, std::abs(legs.from_min.h0() - orbit.h));
  {
    IntegratorOptions fwd = o;
    fwd.record = false;
    fwd.accumulate_volume = false;
    fwd.throw_on_failure = false;
    const CylinderState s0{0.0, a, 0.0, x.b, 0.0};
    const Trajectory full = integrate(params, s0, orbit.t_a, fwd);
    orbit.forward_defect = full.terminal() == Termination::ReachedEnd
                               ? max_abs_diff(full.final_state(), {orbit.t_a, a, 0.0, x.b, 0.0})
                               : std::numeric_limits<double>::infinity();
  }
  orbit.from_max = std::move(legs.from_max);
  orbit.from_min = std::move(legs.from_min);

  const int n_samples = opt.samples_per_period;
  orbit.samples.reserve(n_samples);
  for (int j = 0; j < n_samples; ++j) {
    orbit.samples.push_back(orbit.state_at(orbit.t_a * j / n_samples));
  }
  orbit.sup_v = a;
  for (const auto* leg : {&orbit.from_max, &orbit.from_min})
    for (const auto& s : leg->samples()) orbit.sup_v = std::max(orbit.sup_v, s.v);
  for (const auto& s : orbit.samples) orbit.sup_v = std::max(orbit.sup_v, s.v);
  return orbit;
}

double reflection_defect(const DimensionParams& params, const DelaunayOrbit& orbit,
                         const ShootingOptions& opt) {
  IntegratorOptions o;
  o.rtol = std::max(std::min(opt.integrator_rtol(), 1e-12), 1e-14);
  o.atol = 1e-2 * o.rtol;
  const double q = 0.25 * orbit.t_a;
  // v on [t_a/2, t_a] from fresh runs: forward from the minimum, backward from the maximum at t_a.
  const Trajectory up = integrate(params, {2.0 * q, orbit.eps_a, 0.0, orbit.c, 0.0}, 3.0 * q, o);
  const Trajectory down = integrate(params, {orbit.t_a, orbit.a, 0.0, orbit.b, 0.0}, 3.0 * q, o);
  double worst = 0.0;
  const int n = int(orbit.samples.size());
  for (int j = 0; j <= n / 2; ++j) {
    const double t = orbit.t_a * j / n;
    const double mirrored = orbit.t_a - t;
    const double v = mirrored <= 3.0 * q ? up.state_at(std::clamp(mirrored, up.t_min(), up.t_max())).v
                                         : down.state_at(std::clamp(mirrored, down.t_min(), down.t_max())).v;
    worst = std::max(worst, std::abs(orbit.half_state(t).v - v));
  }
  return worst;
}

DelaunayOrbit orbit_for_period(const DimensionParams& params, double period, double period_tol,
                               const ShootingOptions& opt) {
  if (!(period > params.t_cyl)) {
    throw InvalidParameter("period " + fmt(period) + " must exceed t_cyl = " + fmt(params.t_cyl) +
                           "; only the cylinder exists there");
  }
  if (!(period_tol > 0.0)) throw InvalidParameter("period_tol must be positive");

  // Root-find in s = -log(1 - a), in which T_a grows roughly linearly near a = 1.
  const auto to_a = [](double s) { return 1.0 - std::exp(-s); };
  const auto to_s = [](double a) { return -std::log1p(-a); };
  DelaunayOrbit lo = shoot(params, params.v_cyl + kEdgeMargin, opt);
  std::optional<DelaunayOrbit> edge;
  for (int k = kPeriodSearchFirstK; k <= kPeriodSearchLastK; ++k) {
    try {
      edge = shoot(params, 1.0 - std::pow(10.0, -k), opt);
    } catch (const Error&) {
      if (!edge) throw;
      break;
    }
    if (edge->t_a >= period) break;
  }
  DelaunayOrbit hi = std::move(*edge);
  if (period < lo.t_a || period > hi.t_a) {
    throw NoConvergence("period " + fmt(period) + " outside the computable range [" + fmt(lo.t_a) + ", " +
                        fmt(hi.t_a) + "]");
  }
  double s_lo = to_s(lo.a), s_hi = to_s(hi.a);
  double f_lo = lo.t_a - period, f_hi = hi.t_a - period;
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    if (std::abs(f_lo) <= period_tol * period) return lo;
    if (std::abs(f_hi) <= period_tol * period) return hi;
    double s = (s_lo * f_hi - s_hi * f_lo) / (f_hi - f_lo);
    if (!(s > s_lo && s < s_hi)) s = 0.5 * (s_lo + s_hi);
    if (s == s_lo || s == s_hi) break;
    DelaunayOrbit mid = shoot(params, to_a(s), opt);
    const double f = mid.t_a - period;
    if (f < 0.0) {
      lo = std::move(mid);
      s_lo = s;
      f_lo = f;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = std::move(mid);
      s_hi = s;
      f_hi = f;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
  }
  throw NoConvergence("no Delaunay parameter with period " + fmt(period) + " to relative tolerance " +
                      fmt(period_tol));
}

std::size_t SweepReport::failures() const {
  return std::size_t(std::count_if(points.begin(), points.end(),
                                   [](const SweepPoint& p) { return !p.orbit.has_value(); }));
}

std::vector<std::array<double, 2>> phase_polyline(const DelaunayOrbit& orbit) {
  std::vector<std::array<double, 2>> out;
  out.reserve(orbit.samples.size() + 1);
  for (const auto& s : orbit.samples) out.push_back({s.v, s.v1});
  if (!out.empty()) out.push_back(out.front());
  return out;
}

SweepReport sweep(const DimensionParams& params, std::span<const double> a_grid,
                  const ShootingOptions& opt, unsigned threads) {
  for (std::size_t i = 1; i < a_grid.size(); ++i) {
    if (!(a_grid[i] > a_grid[i - 1])) throw InvalidParameter("sweep grid must be strictly increasing");
  }
  SweepReport report;
  report.points.resize(a_grid.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i = next++; i < a_grid.size(); i = next++) {
      SweepPoint& pt = report.points[i];
      pt.a = a_grid[i];
      try {
        pt.orbit = shoot(params, a_grid[i], opt);
      } catch (const Error& e) {
        pt.failure = e.kind();
        pt.message = e.what();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, unsigned(std::max<std::size_t>(1, a_grid.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }

  const DelaunayOrbit* prev = nullptr;
  std::vector<PlanePoint> prev_curve;
  for (const SweepPoint& pt : report.points) {
    if (!pt.orbit) continue;
    const DelaunayOrbit& o = *pt.orbit;
    if (!(o.h > params.h_cyl && o.h < 0.0)) report.energy_in_range = false;
    if (!(o.defect <= 1e-6)) report.defects_within_tol = false;
    std::vector<PlanePoint> curve = phase_polyline(o);
    if (prev) {
      if (!(o.t_a > prev->t_a)) report.period_increasing = false;
      if (!(o.eps_a < prev->eps_a)) report.eps_decreasing = false;
      const bool contains = o.eps_a < prev->eps_a && o.a > prev->a;
      if (!contains || polylines_cross(curve, prev_curve)) report.curves_nested = false;
    }
    prev = &o;
    prev_curve = std::move(curve);
  }
  return report;
}

}  // namespace qdelaunay
