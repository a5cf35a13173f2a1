#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qdelaunay/dimension_params.hpp"

namespace qdelaunay {

struct CheckResult {
  std::string module;
  std::string name;
  bool passed = false;
  double value = 0.0;      ///< measured quantity (error, count, ...)
  double threshold = 0.0;  ///< bound it was compared against
  std::string detail;
};

/// Which of the two closed forms for the cylinder frequency agrees with the
/// quartic root and with the extrapolated small-amplitude Delaunay period.
struct MuAdjudication {
  double mu_quartic = 0.0;
  double mu_plus8 = 0.0;
  double mu_minus8 = 0.0;
  double quartic_residual_plus8 = 0.0;
  double quartic_residual_minus8 = 0.0;
  double t_cyl_extrapolated = 0.0;  ///< from T_a at a - v_cyl = 1e-2, 1e-3, 1e-4
  double rel_err_plus8 = 0.0;       ///< |2 pi / mu_plus8 - extrapolated| / extrapolated
  double rel_err_minus8 = 0.0;
  std::string matching;  ///< "minus8", "plus8" or "none"
};

/// Which exponent in q_bar (area_s I_a)^e, with or without the 2/(n-4)
/// prefactor, reproduces the directly integrated functional on an orbit.
struct ExponentAdjudication {
  double a = 0.0;
  double q_direct = 0.0;
  double y_four_over_n = 0.0;
  double y_printed = 0.0;  ///< 2/(n-4) q_bar (area_s I_a)^{n/4}
  double rel_err_four_over_n = 0.0;
  double rel_err_printed = 0.0;
  std::string matching;  ///< "4/n", "printed" or "none"
};

/// H(v_cyl) against the closed form with exponent (n-4)/4 and the variant
/// with (n-4)/8.
struct EnergyExponentAdjudication {
  double h_cyl = 0.0;
  double closed_quarter = 0.0;
  double closed_eighth = 0.0;
  double rel_err_quarter = 0.0;
  double rel_err_eighth = 0.0;
  std::string matching;  ///< "(n-4)/4", "(n-4)/8" or "none"
};

struct SelfcheckReport {
  int n = 0;
  std::vector<CheckResult> checks;
  MuAdjudication mu;
  ExponentAdjudication exponent;
  EnergyExponentAdjudication energy_exponent;

  bool all_passed() const;
  std::vector<CheckResult> failures() const;
};

struct SelfcheckOptions {
  unsigned threads = 0;
  int sweep_points = 16;
  std::uint64_t seed = 20240611;
};

/// Runs every invariant of every module for this dimension. Numerical errors
/// inside a check are caught and recorded as a failed check.
SelfcheckReport run_selfcheck(const DimensionParams& params, const SelfcheckOptions& opt = {});

MuAdjudication adjudicate_mu(const DimensionParams& params);
ExponentAdjudication adjudicate_exponent(const DimensionParams& params, double a);
EnergyExponentAdjudication adjudicate_energy_exponent(const DimensionParams& params);

/// Value at 0 of the quadratic through (x_i, y_i), i = 0..2.
double extrapolate_to_zero(const std::array<double, 3>& x, const std::array<double, 3>& y);

}  // namespace qdelaunay
