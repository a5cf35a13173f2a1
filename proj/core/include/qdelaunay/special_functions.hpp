#pragma once

#include <functional>

namespace qdelaunay {

/// Surface measure of the unit k-sphere in R^{k+1}: 2 pi^{(k+1)/2} / Gamma((k+1)/2).
double unit_sphere_measure(int k);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod (7-15) quadrature on [lo, hi]. Throws
/// QuadratureFailure if the error estimate stays above abs_tol.
QuadratureResult adaptive_gauss_kronrod(const std::function<double(double)>& f, double lo,
                                        double hi, double abs_tol, unsigned max_depth = 30);

}  // namespace qdelaunay
