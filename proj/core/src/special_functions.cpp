#include "qdelaunay/special_functions.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qdelaunay/errors.hpp"

namespace qdelaunay {

double unit_sphere_measure(int k) {
  if (k < 0) throw InvalidParameter("unit_sphere_measure: negative dimension");
  const double h = 0.5 * (k + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

QuadratureResult adaptive_gauss_kronrod(const std::function<double(double)>& f, double lo,
                                        double hi, double abs_tol, unsigned max_depth) {
  if (!(abs_tol > 0.0)) throw InvalidParameter("quadrature tolerance must be positive");
  QuadratureResult out;
  // boost sums leaf |K - G| on the reference interval; scaling by the half
  // width bounds the absolute error since no leaf is wider than the whole.
  out.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, hi, max_depth, 1e-14,
                                                                          &out.error_estimate);
  out.error_estimate *= 0.5 * std::abs(hi - lo);
  if (!std::isfinite(out.value) || out.error_estimate > abs_tol) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "Gauss-Kronrod error estimate " << out.error_estimate << " above " << abs_tol << " on ["
        << lo << ", " << hi << "]";
    throw QuadratureFailure(msg.str());
  }
  return out;
}

}  // namespace qdelaunay
