#include "qdelaunay/ode_integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qdelaunay/errors.hpp"

namespace qdelaunay {

namespace {

constexpr std::size_t kDim = 5;
using Vec = detail::Vec<kDim>;
using Step = detail::Step<kDim>;

struct System {
  const DimensionParams& params;
  bool volume;

  Vec operator()(const Vec& y) const {
    const CylinderState s{0.0, y[0], y[1], y[2], y[3]};
    const PhaseRate r = vector_field(params, s);
    return {r[0], r[1], r[2], r[3], volume ? guarded_pow(y[0], params.p_sharp) : 0.0};
  }
  std::size_t ncomp() const { return volume ? 5 : 4; }
};

// Returns false when a stage leaves the domain v > kVFloor.
bool dopri_step(const System& sys, const Vec& y, const Vec& k1, double h, Step& out,
                const IntegratorOptions& opt) {
  try {
    detail::dopri_step<kDim>(sys, y, k1, h, opt.rtol, opt.atol, sys.ncomp(), out);
  } catch (const NonPositiveV&) {
    return false;
  }
  return true;
}

Vec eval_segment(const Trajectory::Segment& seg, double t) { return seg(t); }

double initial_step(const System& sys, const Vec& y, const Vec& f0, double dir, double span,
                    const IntegratorOptions& opt) {
  const std::size_t ncomp = sys.ncomp();
  double dnf = 0.0, dny = 0.0;
  for (std::size_t i = 0; i < ncomp; ++i) {
    const double sk = opt.atol + opt.rtol * std::abs(y[i]);
    dnf += (f0[i] / sk) * (f0[i] / sk);
    dny += (y[i] / sk) * (y[i] / sk);
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
  h = std::min(h, span);
  Vec y1{};
  for (std::size_t i = 0; i < kDim; ++i) y1[i] = y[i] + dir * h * f0[i];
  double der2 = 0.0;
  try {
    const Vec f1 = sys(y1);
    for (std::size_t i = 0; i < ncomp; ++i) {
      const double sk = opt.atol + opt.rtol * std::abs(y[i]);
      der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
    }
    der2 = std::sqrt(der2) / h;
  } catch (const NonPositiveV&) {
    return std::min(h, 1e-6);
  }
  const double der12 = std::max(der2, std::sqrt(dnf));
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
  return std::min({100.0 * h, h1, span, opt.max_step});
}

double event_value(const EventSpec& ev, const Vec& y) {
  switch (ev.kind) {
    case EventKind::TurningPoint: return y[1];
    case EventKind::VFloorHit:
    case EventKind::VCeilingHit: return y[0] - ev.level;
  }
  return 0.0;
}

double event_slope(const EventSpec& ev, const Vec& y) {
  return ev.kind == EventKind::TurningPoint ? y[2] : y[1];
}

bool crosses(const EventSpec& ev, double before, double after) {
  const bool upward = ev.kind == EventKind::VCeilingHit ||
                      (ev.kind == EventKind::TurningPoint && ev.direction == Crossing::Upward);
  return upward ? (before < 0.0 && after >= 0.0) : (before > 0.0 && after <= 0.0);
}

bool arms(const EventSpec& ev, const Vec& y) {
  if (ev.kind != EventKind::TurningPoint) return true;
  return ev.direction == Crossing::Upward ? y[1] <= -ev.arm_eps : y[1] >= ev.arm_eps;
}

void validate(const CylinderState& s0, const IntegratorOptions& opt, std::span<const EventSpec> events) {
  const auto in_range = [](double x) { return x >= 1e-14 && x <= 1e-3; };
  if (!in_range(opt.rtol) || !in_range(opt.atol)) {
    throw InvalidParameter("rtol and atol must lie in [1e-14, 1e-3]");
  }
  if (!std::isfinite(s0.v) || !std::isfinite(s0.v1) || !std::isfinite(s0.v2) || !std::isfinite(s0.v3)) {
    throw InvalidParameter("initial state must be finite");
  }
  if (!(s0.v >= kVFloor)) {
    throw NonPositiveV("initial v = " + std::to_string(s0.v) + " is not positive");
  }
  for (const auto& ev : events) {
    if (!(ev.root_tol > 0.0)) throw InvalidParameter("event root_tol must be positive");
  }
}

std::string describe(const CylinderState& s) {
  std::ostringstream os;
  os.precision(17);
  os << "(t=" << s.t << ", v=" << s.v << ", v1=" << s.v1 << ", v2=" << s.v2 << ", v3=" << s.v3 << ")";
  return os.str();
}

CylinderState to_state(double t, const Vec& y) { return {t, y[0], y[1], y[2], y[3]}; }

}  // namespace

EventSpec EventSpec::turning_point(Crossing direction, double arm_eps) {
  EventSpec ev;
  ev.kind = EventKind::TurningPoint;
  ev.direction = direction;
  ev.arm_eps = arm_eps;
  return ev;
}

EventSpec EventSpec::v_floor(double level) {
  EventSpec ev;
  ev.kind = EventKind::VFloorHit;
  ev.direction = Crossing::Downward;
  ev.level = level;
  return ev;
}

EventSpec EventSpec::v_ceiling(double level) {
  EventSpec ev;
  ev.kind = EventKind::VCeilingHit;
  ev.direction = Crossing::Upward;
  ev.level = level;
  return ev;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::ReachedEnd: return "reached_end";
    case Termination::Event: return "event";
    case Termination::NonPositiveV: return "non_positive_v";
    case Termination::StepFloor: return "step_floor";
    case Termination::MaxSteps: return "max_steps";
  }
  return "unknown";
}

double Trajectory::t_min() const { return std::min(t_begin_, t_end_); }
double Trajectory::t_max() const { return std::max(t_begin_, t_end_); }

const Trajectory::Segment& Trajectory::segment_for(double t) const {
  if (segments_.empty()) throw InvalidParameter("trajectory was integrated without dense output");
  const double slack = 1e-12 * std::max(1.0, std::abs(t));
  if (t < t_min() - slack || t > t_max() + slack) {
    throw InvalidParameter("dense output requested at t = " + std::to_string(t) + " outside [" +
                           std::to_string(t_min()) + ", " + std::to_string(t_max()) + "]");
  }
  // Segments are sorted by their lower end.
  const auto lower = [](const Segment& s) { return std::min(s.t0, s.t0 + s.h); };
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [&](double value, const Segment& s) { return value < lower(s); });
  if (it == segments_.begin()) return segments_.front();
  return *std::prev(it);
}

CylinderState Trajectory::state_at(double t) const {
  return to_state(t, eval_segment(segment_for(t), t));
}

double Trajectory::volume_at(double t) const { return eval_segment(segment_for(t), t)[4]; }

Trajectory integrate(const DimensionParams& params, const CylinderState& s0, double t_end,
                     const IntegratorOptions& opt, std::span<const EventSpec> events) {
  validate(s0, opt, events);
  const System sys{params, opt.accumulate_volume};
  Trajectory out;
  out.t_begin_ = s0.t;
  out.t_end_ = s0.t;

  double t = s0.t;
  Vec y{s0.v, s0.v1, s0.v2, s0.v3, 0.0};
  out.h0_ = hamiltonian(params, s0);
  out.final_state_ = s0;
  if (opt.record) {
    out.samples_.push_back(s0);
    out.volumes_.push_back(0.0);
  }
  const double span = std::abs(t_end - t);
  if (span == 0.0) return out;
  const double dir = t_end > t ? 1.0 : -1.0;

  Vec k1 = sys(y);
  double h = dir * initial_step(sys, y, k1, dir, span, opt);
  double facold = 1e-4;
  bool last_rejected = false;
  std::vector<bool> armed(events.size());
  for (std::size_t e = 0; e < events.size(); ++e) armed[e] = arms(events[e], y);

  const auto fail = [&](Termination why, const std::string& detail) {
    out.terminal_ = why;
    out.final_state_ = to_state(t, y);
    out.final_volume_ = y[4];
    if (!opt.throw_on_failure) return;
    const std::string msg = detail + " at " + describe(out.final_state_);
    switch (why) {
      case Termination::NonPositiveV: throw NonPositiveV(msg);
      case Termination::StepFloor: throw StepFloor(msg);
      case Termination::MaxSteps: throw MaxSteps(msg);
      default: break;
    }
  };

  Step st;
  bool done = false;
  while (!done) {
    if (out.steps_accepted_ + out.steps_rejected_ >= opt.max_steps) {
      fail(Termination::MaxSteps, "exceeded " + std::to_string(opt.max_steps) + " steps");
      break;
    }
    bool last = false;
    if (dir * (t + h - t_end) >= 0.0) {
      h = t_end - t;
      last = true;
    }
    if (std::abs(h) < opt.step_floor && !last) {
      fail(Termination::StepFloor, "step size " + std::to_string(std::abs(h)) + " below floor");
      break;
    }
    if (!dopri_step(sys, y, k1, h, st, opt)) {
      ++out.steps_rejected_;
      h *= 0.25;
      last_rejected = true;
      if (std::abs(h) < opt.step_floor) {
        fail(Termination::NonPositiveV, "v fell below " + std::to_string(kVFloor));
        break;
      }
      continue;
    }
    if (st.err > 1.0) {
      ++out.steps_rejected_;
      h = detail::rejected_step_size(h, st.err);
      last_rejected = true;
      continue;
    }

    double h_new = detail::accepted_step_size(h, st.err, facold);
    ++out.steps_accepted_;
    const double t_new = last ? t_end : t + h;
    const Trajectory::Segment seg = detail::make_segment<kDim>(t, h, y, st);

    // Earliest triggered event inside (t, t_new].
    std::optional<std::size_t> hit;
    double hit_t = 0.0;
    for (std::size_t e = 0; e < events.size(); ++e) {
      if (!armed[e]) continue;
      const EventSpec& ev = events[e];
      const double before = event_value(ev, y);
      const double after = event_value(ev, st.y_new);
      if (!crosses(ev, before, after)) continue;
      double lo = t, hi = t_new;
      while (std::abs(hi - lo) > ev.root_tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (crosses(ev, before, event_value(ev, eval_segment(seg, mid)))) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      const double root = hi;
      if (!hit || dir * (root - hit_t) < 0.0) {
        hit = e;
        hit_t = root;
      }
    }

    if (hit) {
      // Polish the root with Newton iterations on genuine sub-steps from the
      // accepted step's start, then take the state from one such sub-step.
      const EventSpec& ev = events[*hit];
      Vec y_hit = eval_segment(seg, hit_t);
      Step sub;
      for (int it = 0; it < 4; ++it) {
        if (hit_t == t || !dopri_step(sys, y, k1, hit_t - t, sub, opt)) break;
        const double slope = event_slope(ev, sub.y_new);
        if (slope == 0.0) break;
        double next = hit_t - event_value(ev, sub.y_new) / slope;
        next = dir > 0 ? std::clamp(next, t, t_new) : std::clamp(next, t_new, t);
        if (next == hit_t) break;
        hit_t = next;
      }
      if (hit_t != t && dopri_step(sys, y, k1, hit_t - t, sub, opt)) y_hit = sub.y_new;
      if (opt.record) out.segments_.push_back(seg);
      t = hit_t;
      y = y_hit;
      out.terminal_ = Termination::Event;
      out.event_ = EventHit{*hit, ev.kind, to_state(t, y), y[4]};
      done = true;
    } else {
      if (opt.record) out.segments_.push_back(seg);
      t = t_new;
      y = st.y_new;
      k1 = st.k[6];
      for (std::size_t e = 0; e < events.size(); ++e) armed[e] = armed[e] || arms(events[e], y);
      if (last) {
        out.terminal_ = Termination::ReachedEnd;
        done = true;
      }
    }

    const CylinderState s = to_state(t, y);
    out.max_drift_ = std::max(out.max_drift_, std::abs(hamiltonian(params, s) - out.h0_));
    if (opt.record) {
      out.samples_.push_back(s);
      out.volumes_.push_back(y[4]);
    }
    out.final_state_ = s;
    out.final_volume_ = y[4];
    out.t_end_ = t;

    h_new = dir * std::min(std::abs(h_new), opt.max_step);
    if (last_rejected) h_new = dir * std::min(std::abs(h_new), std::abs(h));
    last_rejected = false;
    h = h_new;
  }

  if (dir < 0.0) {
    std::reverse(out.samples_.begin(), out.samples_.end());
    std::reverse(out.volumes_.begin(), out.volumes_.end());
    std::reverse(out.segments_.begin(), out.segments_.end());
  }
  return out;
}

double default_arm_eps(const DimensionParams& params, double v2) {
  return 1e-7 * std::max(1.0, std::abs(v2)) * params.t_cyl;
}

TurningPoint first_turning_point(const DimensionParams& params, const CylinderState& s0,
                                 double rtol, double atol, double t_max, bool accumulate_volume) {
  if (s0.v1 != 0.0) throw InvalidParameter("first_turning_point must start at a critical point (v1 == 0)");
  if (!(t_max > s0.t)) throw InvalidParameter("t_max must exceed the initial time");
  double curvature = s0.v2;
  if (curvature == 0.0) curvature = vector_field(params, s0)[3];
  if (curvature == 0.0) throw NoTurningPoint("initial state is an equilibrium " + describe(s0));
  const Crossing direction = curvature < 0.0 ? Crossing::Upward : Crossing::Downward;

  const std::array<EventSpec, 2> events = {
      EventSpec::turning_point(direction, default_arm_eps(params, s0.v2)),
      EventSpec::v_floor(1e-10)};
  IntegratorOptions opt;
  opt.rtol = rtol;
  opt.atol = atol;
  opt.accumulate_volume = accumulate_volume;
  opt.record = false;
  const Trajectory traj = integrate(params, s0, t_max, opt, events);
  if (traj.terminal() != Termination::Event) {
    throw NoTurningPoint("no turning point in (" + std::to_string(s0.t) + ", " +
                         std::to_string(t_max) + "] from " + describe(s0));
  }
  if (traj.event()->index == 1) {
    throw NonPositiveV("trajectory collapsed to v = 0 at " + describe(traj.event()->state));
  }
  return {traj.event()->state.t, traj.event()->state, traj.event()->volume, traj.max_drift()};
}

}  // namespace qdelaunay
