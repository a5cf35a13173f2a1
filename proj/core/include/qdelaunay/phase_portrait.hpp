#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qdelaunay/delaunay_solver.hpp"
#include "qdelaunay/dimension_params.hpp"
#include "qdelaunay/polyline.hpp"

namespace qdelaunay {

struct PortraitCurve {
  std::string label;
  std::optional<double> a;
  bool closed = true;
  std::vector<PlanePoint> points;  ///< (v, v')
};

struct PortraitMarker {
  std::string label;
  double v = 0.0;
  double v1 = 0.0;
};

struct PortraitSet {
  int n = 0;
  std::vector<PortraitCurve> curves;
  std::vector<PortraitMarker> markers;
};

struct PortraitOptions {
  bool include_sphere = false;
  /// The sphere loop is cut where v_sph drops below this.
  double sphere_cutoff = 1e-3;
  int sphere_points = 1025;
  unsigned threads = 0;
};

/// One closed curve per a (in the given order) from genuine Delaunay orbits,
/// the spherical loop if requested, the cylinder marker (v_cyl, 0) and, with
/// the sphere, the origin. Throws the first solver error encountered.
PortraitSet build_portrait(const DimensionParams& params, std::span<const double> a_list,
                           const PortraitOptions& popt = {}, const ShootingOptions& opt = {});

/// Half width T with v_sph(+-T) equal to the cutoff.
double sphere_span(const DimensionParams& params, double cutoff);

/// Integrates from v_sph's state at t = 0 over [-t_max, t_max] and returns the
/// max deviation of (v, v') from the closed form. The homoclinic loop is
/// unstable, so only moderate t_max are meaningful.
double sphere_integration_deviation(const DimensionParams& params, double t_max = 5.0);

struct PortraitChecks {
  double worst_closure = 0.0;     ///< max |first - last| over closed curves
  double worst_asymmetry = 0.0;   ///< v' -> -v' mismatch over Delaunay curves
  bool cylinder_marker_ok = false;
  bool nested = true;             ///< Delaunay curves pairwise nested without crossings
  bool inside_sphere = true;      ///< every Delaunay point inside the spherical loop (if present)
};

PortraitChecks check_portrait(const DimensionParams& params, const PortraitSet& set);

}  // namespace qdelaunay
