#include "qdelaunay/spectral.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <unsupported/Eigen/FFT>

#include "qdelaunay/errors.hpp"

namespace qdelaunay {

namespace {

// (i k)^order for bin j of an n-point transform, k = 2 pi m / period with m
// the signed frequency.
std::complex<double> symbol(std::size_t j, std::size_t n, double period, int order) {
  long m = long(j);
  if (j > n / 2) m -= long(n);
  if (n % 2 == 0 && j == n / 2 && order % 2 == 1) return {0.0, 0.0};
  const double k = 2.0 * std::numbers::pi * double(m) / period;
  std::complex<double> out(1.0, 0.0);
  for (int i = 0; i < order; ++i) out *= std::complex<double>(0.0, k);
  return out;
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::vector<double> spectral_derivative(std::span<const double> values, double period, int order) {
  const std::size_t n = values.size();
  if (n == 0) return {};
  if (!(period > 0.0) || order < 0) throw InvalidParameter("spectral_derivative: bad period or order");
  Eigen::FFT<double> fft;
  std::vector<double> in(values.begin(), values.end());
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, in);
  for (std::size_t j = 0; j < n; ++j) spec[j] *= symbol(j, n, period, order);
  std::vector<double> out;
  fft.inv(out, spec);
  return out;
}

std::vector<double> spectral_derivative_row(std::size_t n, double period, int order) {
  if (order % 2 != 0) throw InvalidParameter("spectral_derivative_row needs an even order");
  if (n == 0) return {};
  std::vector<std::complex<double>> spec(n);
  for (std::size_t j = 0; j < n; ++j) spec[j] = symbol(j, n, period, order);
  Eigen::FFT<double> fft;
  std::vector<double> out;
  fft.inv(out, spec);
  return out;
}

double periodic_trapezoid(std::span<const double> values, double period) {
  if (values.empty()) return 0.0;
  return period / double(values.size()) * std::accumulate(values.begin(), values.end(), 0.0);
}

}  // namespace qdelaunay
