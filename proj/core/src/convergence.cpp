#include "qdelaunay/convergence.hpp"

#include <cmath>

#include "qdelaunay/errors.hpp"
#include "qdelaunay/q_functionals.hpp"

namespace qdelaunay {

bool ConvergenceReport::converging() const {
  if (rows.empty()) return false;
  for (const ConvergenceRow& r : rows) {
    if (!r.ok) return false;
  }
  return increasing && below_one;
}

ConvergenceReport convergence_study(const DimensionParams& params, int k_max, const ShootingOptions& opt,
                                    unsigned threads) {
  if (k_max < 1 || k_max > 4) throw InvalidParameter("k_max must lie in 1..4");
  std::vector<double> grid;
  for (int k = 1; k <= k_max; ++k) grid.push_back(1.0 - std::pow(10.0, -k));
  const SweepReport sw = sweep(params, grid, opt, threads);

  ConvergenceReport out;
  out.n = params.n;
  out.y_sph = params.y_sph;
  out.increasing = true;
  out.below_one = true;
  for (std::size_t i = 0; i < sw.points.size(); ++i) {
    const SweepPoint& pt = sw.points[i];
    ConvergenceRow row;
    row.k = int(i) + 1;
    row.a = pt.a;
    if (pt.orbit) {
      row.ok = true;
      row.t_a = pt.orbit->t_a;
      row.i_a = pt.orbit->i_a;
      row.y = invariant_value(params, *pt.orbit);
      row.ratio = row.y / params.y_sph;
      if (!(row.ratio < 1.0)) out.below_one = false;
      if (!out.rows.empty() && out.rows.back().ok && !(row.ratio > out.rows.back().ratio)) out.increasing = false;
      out.final_ratio = row.ratio;
    } else {
      row.error = pt.message;
    }
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace qdelaunay
