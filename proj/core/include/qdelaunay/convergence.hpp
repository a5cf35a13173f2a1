#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdelaunay/delaunay_solver.hpp"
#include "qdelaunay/dimension_params.hpp"

namespace qdelaunay {

struct ConvergenceRow {
  int k = 0;
  double a = 0.0;  ///< 1 - 10^-k
  bool ok = false;
  double t_a = 0.0;
  double i_a = 0.0;
  double y = 0.0;
  double ratio = 0.0;  ///< Y / y_sph
  std::string error;
};

struct ConvergenceReport {
  int n = 0;
  double y_sph = 0.0;
  std::vector<ConvergenceRow> rows;
  bool increasing = false;
  bool below_one = false;
  double final_ratio = 0.0;

  /// Every row solved, ratios strictly increasing and all below 1.
  bool converging() const;
};

/// Orbits at a_k = 1 - 10^-k, k = 1..k_max. Row failures are recorded and the
/// study continues. Throws InvalidParameter unless 1 <= k_max <= 4.
ConvergenceReport convergence_study(const DimensionParams& params, int k_max, const ShootingOptions& opt = {},
                                    unsigned threads = 0);

}  // namespace qdelaunay
