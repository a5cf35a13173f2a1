#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qdelaunay/cylinder_dynamics.hpp"
#include "qdelaunay/detail/dormand_prince.hpp"
#include "qdelaunay/dimension_params.hpp"

namespace qdelaunay {

enum class EventKind { TurningPoint, VFloorHit, VCeilingHit };

/// Direction in which the watched quantity crosses its level. For a turning
/// point the quantity is v1: Upward marks a minimum of v, Downward a maximum.
enum class Crossing { Upward, Downward };

struct EventSpec {
  EventKind kind = EventKind::TurningPoint;
  Crossing direction = Crossing::Upward;
  /// Turning points only: v1 must first reach -arm_eps (Upward) or +arm_eps
  /// (Downward) before a crossing counts, so a departure critical point is
  /// not re-detected.
  double arm_eps = 0.0;
  /// Floor/ceiling value of v.
  double level = 0.0;
  /// Width of the bracketing interval in t at which bisection stops.
  double root_tol = 1e-13;

  static EventSpec turning_point(Crossing direction, double arm_eps);
  static EventSpec v_floor(double level);
  static EventSpec v_ceiling(double level);
};

enum class Termination { ReachedEnd, Event, NonPositiveV, StepFloor, MaxSteps };

std::string to_string(Termination t);

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  /// Integrate z' = v^{p_sharp} alongside the state (volume accumulator).
  bool accumulate_volume = false;
  /// Keep accepted samples and dense-output segments. Shooting scans turn
  /// this off and only read the terminal/event state.
  bool record = true;
  /// Failures (NonPositiveV, StepFloor, MaxSteps) throw when set; otherwise
  /// they end the trajectory with the matching Termination.
  bool throw_on_failure = true;
  std::size_t max_steps = 10'000'000;
  double step_floor = 1e-13;
  double max_step = std::numeric_limits<double>::infinity();
};

struct EventHit {
  std::size_t index = 0;  ///< position in the events list
  EventKind kind = EventKind::TurningPoint;
  CylinderState state;
  double volume = 0.0;
};

/// Output of integrate(). Samples are stored in increasing t regardless of
/// the integration direction. Dense output covers [t_min(), t_max()].
class Trajectory {
 public:
  /// Continuous extension of one accepted step over (v, v1, v2, v3, z).
  using Segment = detail::DenseSegment<5>;

  const std::vector<CylinderState>& samples() const { return samples_; }
  const std::vector<double>& volumes() const { return volumes_; }
  double h0() const { return h0_; }
  double max_drift() const { return max_drift_; }
  std::size_t steps_accepted() const { return steps_accepted_; }
  std::size_t steps_rejected() const { return steps_rejected_; }
  Termination terminal() const { return terminal_; }
  const std::optional<EventHit>& event() const { return event_; }
  /// State where integration stopped (event state, or the state at t_end).
  const CylinderState& final_state() const { return final_state_; }
  double final_volume() const { return final_volume_; }
  bool has_dense_output() const { return !segments_.empty(); }

  double t_min() const;
  double t_max() const;

  /// Dense-output state at t in [t_min, t_max]. Throws InvalidParameter outside.
  CylinderState state_at(double t) const;
  /// Dense-output value of the volume accumulator.
  double volume_at(double t) const;

 private:
  friend Trajectory integrate(const DimensionParams&, const CylinderState&, double,
                              const IntegratorOptions&, std::span<const EventSpec>);

  const Segment& segment_for(double t) const;

  std::vector<CylinderState> samples_;
  std::vector<double> volumes_;
  std::vector<Segment> segments_;
  double h0_ = 0.0;
  double max_drift_ = 0.0;
  std::size_t steps_accepted_ = 0;
  std::size_t steps_rejected_ = 0;
  Termination terminal_ = Termination::ReachedEnd;
  std::optional<EventHit> event_;
  CylinderState final_state_;
  double final_volume_ = 0.0;
  double t_begin_ = 0.0;
  double t_end_ = 0.0;
};

/// Dormand-Prince 5(4) with PI step control and the 4th-order continuous
/// extension. Integrates forward or backward (t_end < s0.t). Stops at the
/// first triggered event or at t_end.
///
/// Requires 1e-14 <= atol, rtol <= 1e-3 and s0.v > 0.
Trajectory integrate(const DimensionParams& params, const CylinderState& s0, double t_end,
                     const IntegratorOptions& options, std::span<const EventSpec> events = {});

/// Arming threshold for turning-point detection from a critical point with
/// second derivative v2: 1e-7 max(1, |v2|) t_cyl.
double default_arm_eps(const DimensionParams& params, double v2);

struct TurningPoint {
  double t = 0.0;
  CylinderState state;
  double volume = 0.0;  ///< accumulated int v^{p_sharp} from s0.t to t
  double max_drift = 0.0;
};

/// First t in (s0.t, t_max] where v1 vanishes again, starting from a critical
/// point (s0.v1 == 0). The crossing direction follows from the sign of
/// v''(0) (or v''''(0) if v''(0) == 0). Throws NoTurningPoint when t_max is
/// reached and NonPositiveV when the trajectory collapses.
TurningPoint first_turning_point(const DimensionParams& params, const CylinderState& s0,
                                 double rtol, double atol, double t_max,
                                 bool accumulate_volume = false);

}  // namespace qdelaunay
