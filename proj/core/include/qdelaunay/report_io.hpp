#pragma once

#include <nlohmann/json.hpp>
#include <ostream>
#include <string>

#include "qdelaunay/convergence.hpp"
#include "qdelaunay/delaunay_solver.hpp"
#include "qdelaunay/dimension_params.hpp"
#include "qdelaunay/phase_portrait.hpp"
#include "qdelaunay/q_functionals.hpp"
#include "qdelaunay/selfcheck.hpp"
#include "qdelaunay/stability.hpp"

namespace qdelaunay {

using Json = nlohmann::ordered_json;

/// What produced an output file; written as its first line (CSV) or as the
/// "provenance" member (JSON).
struct Provenance {
  std::string command;
  int n = 0;
  double rtol = 0.0;
  double atol = 0.0;
  double shoot_tol = 0.0;
};

/// 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double x, int digits = 17);
/// x rounded to the given number of significant digits.
double round_significant(double x, int digits);

std::string provenance_line(const Provenance& p);
Json provenance_json(const Provenance& p);

Json to_json(const DimensionParams& params);
/// Scalar summary: a, b, T_a, eps_a, H, I_a, Y and the audit quantities.
Json orbit_summary_json(const DimensionParams& params, const DelaunayOrbit& orbit);
/// The stored samples (t, v, v1, v2, v3) over one period.
Json orbit_samples_json(const DelaunayOrbit& orbit);
Json to_json(const DimensionParams& params, const SweepReport& report);
Json to_json(const ConvergenceReport& report);
/// Coordinates at 9 significant digits.
Json to_json(const PortraitSet& set);
Json to_json(const SpectrumReport& report);
Json to_json(const MetricCount& count);
Json to_json(const SelfcheckReport& report);

/// t,v,v1,v2,v3,H: one row per stored sample of one period.
void write_orbit_csv(std::ostream& os, const Provenance& p, const DimensionParams& params, const DelaunayOrbit& orbit);
/// t,v,v1,v2,v3,H: one row per accepted step.
void write_trajectory_csv(std::ostream& os, const Provenance& p, const DimensionParams& params,
                          const Trajectory& trajectory);
/// t,v,v1,v2,v3,H: accepted steps of both legs over [0, T_a/2].
void write_orbit_steps_csv(std::ostream& os, const Provenance& p, const DimensionParams& params,
                           const DelaunayOrbit& orbit);
void write_sweep_csv(std::ostream& os, const Provenance& p, const DimensionParams& params, const SweepReport& report);
void write_convergence_csv(std::ostream& os, const Provenance& p, const ConvergenceReport& report);
void write_portrait_csv(std::ostream& os, const Provenance& p, const PortraitSet& set);
void write_spectrum_csv(std::ostream& os, const Provenance& p, const SpectrumReport& report);

/// Pretty-printed with a trailing newline.
void write_json(std::ostream& os, const Json& doc);

}  // namespace qdelaunay
