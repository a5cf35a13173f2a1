#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qdelaunay/dimension_params.hpp"
#include "qdelaunay/errors.hpp"
#include "qdelaunay/ode_integrator.hpp"

namespace qdelaunay {

struct ShootingOptions {
  /// Root tolerance on g(b) = v'''(t*). Integrator rtol = min(tol/100, 1e-10).
  double tol = 1e-9;
  int scan_points = 64;
  double v_ceiling = 1.0 + 1e-3;
  /// v below this before a turning point classifies the shot as a crash.
  double crash_level = 1e-6;
  double t_max = 400.0;
  int samples_per_period = 512;
  int max_iterations = 200;

  double integrator_rtol() const;
  double integrator_atol() const { return 1e-2 * integrator_rtol(); }
};

enum class ShotOutcome {
  Escape,        ///< v exceeded the ceiling before any turning point
  TurnPositive,  ///< reached a minimum with v''' > 0
  TurnNegative,  ///< reached a minimum with v''' <= 0
  Crash,         ///< v collapsed before a turning point
  Unresolved,    ///< none of the above within t_max
};

std::string to_string(ShotOutcome o);

/// Result of integrating from the symmetric maximum (a, 0, b, 0).
struct Shot {
  double b = 0.0;
  ShotOutcome outcome = ShotOutcome::Unresolved;
  double t_turn = 0.0;
  CylinderState turn_state;
  double g = 0.0;  ///< v'''(t*) when the shot turned
  double volume = 0.0;
};

Shot classify_shot(const DimensionParams& params, double a, double b, const ShootingOptions& opt);

/// One periodic Delaunay solution, even about t = 0 where v attains its
/// maximum a, with its minimum eps_a at t_a / 2.
///
/// The half period is assembled from two legs meeting at t_a / 4: one run
/// forward from the maximum and one run backward from the minimum. Their
/// initial data are polished by Newton's method on the mismatch at t_a / 4.
/// A single run over the whole half period would amplify rounding in b by
/// up to 1e9 close to a = 1 and cap the accuracy of t_a near 1e-6.
struct DelaunayOrbit {
  double a = 0.0;
  double b = 0.0;       ///< v''(0)
  double t_a = 0.0;     ///< period
  double eps_a = 0.0;   ///< minimum value
  double c = 0.0;       ///< v''(t_a / 2)
  double h = 0.0;       ///< energy level
  double i_a = 0.0;     ///< int over one period of v^{p_sharp}
  /// Periodicity defect: max-norm mismatch at t_a/4 between the leg run
  /// forward from the maximum and the leg run backward from the minimum,
  /// both re-integrated with dense output at the accepted data.
  double defect = 0.0;
  /// Single forward pass over the full period, |state(t_a) - state(0)|.
  /// Informational: the orbit is hyperbolic, so this grows with the Floquet
  /// multiplier (about 1e10 at a = 0.99, n = 5).
  double forward_defect = 0.0;
  double g_residual = 0.0;  ///< |v'''(t*)| of the bracketed shot that seeded the polish
  double max_drift = 0.0;   ///< energy drift over both legs
  double sup_v = 0.0;
  /// Sign changes of the shooting classification seen in the coarse scan.
  /// More than one would signal several periodic b for the same a.
  int root_candidates = 0;
  int newton_iterations = 0;
  std::vector<CylinderState> samples;  ///< samples_per_period states on [0, t_a)
  Trajectory from_max;                 ///< dense run over [0, t_a/4]
  Trajectory from_min;                 ///< dense run from t_a/2 back to t_a/4

  /// State on [0, t_a/2] from the two legs.
  CylinderState half_state(double tau) const;
  /// State at any t, using periodicity and evenness about t = 0.
  CylinderState state_at(double t) const;
};

/// Symmetry-based shooting for the Delaunay solution with maximum a.
/// Throws InvalidParameter (a outside [v_cyl + 1e-6, 1 - 1e-6]),
/// BracketFailure or NoConvergence.
DelaunayOrbit shoot(const DimensionParams& params, double a, const ShootingOptions& opt = {});

/// Delaunay orbit whose period equals T, located by bracketed root finding in
/// a on the increasing map a -> T_a. Stops when |t_a - T| <= period_tol T.
DelaunayOrbit orbit_for_period(const DimensionParams& params, double period, double period_tol = 1e-9,
                               const ShootingOptions& opt = {});

/// max |v(t_a - t) - v(t)| over the samples, with v on [t_a/2, t_a]
/// integrated backward from the state at t_a.
double reflection_defect(const DimensionParams& params, const DelaunayOrbit& orbit,
                         const ShootingOptions& opt = {});

struct SweepPoint {
  double a = 0.0;
  std::optional<DelaunayOrbit> orbit;
  std::optional<ErrorKind> failure;
  std::string message;
};

struct SweepReport {
  std::vector<SweepPoint> points;
  bool period_increasing = true;
  bool eps_decreasing = true;
  bool energy_in_range = true;
  bool defects_within_tol = true;
  bool curves_nested = true;

  std::size_t failures() const;
};

/// Orbits for every grid value (strictly increasing). Points that fail are
/// recorded with their error kind; the sweep continues. Runs on up to
/// `threads` worker threads (0 = hardware concurrency); output order follows
/// the grid.
SweepReport sweep(const DimensionParams& params, std::span<const double> a_grid,
                  const ShootingOptions& opt = {}, unsigned threads = 0);

/// Closed (v, v1) polyline of one period, first point repeated at the end.
std::vector<std::array<double, 2>> phase_polyline(const DelaunayOrbit& orbit);

}  // namespace qdelaunay
