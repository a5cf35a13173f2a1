#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qdelaunay {

bool is_power_of_two(std::size_t n);

/// Derivative of the given order of the trigonometric interpolant of
/// uniformly spaced periodic samples on [0, period). For even sample counts
/// the Nyquist mode is kept for even orders and dropped for odd orders.
std::vector<double> spectral_derivative(std::span<const double> values, double period, int order);

/// First row c of the circulant spectral differentiation matrix of even
/// order on n points: (D u)_j = sum_l c[(j - l) mod n] u_l. Symmetric.
std::vector<double> spectral_derivative_row(std::size_t n, double period, int order);

/// Periodic trapezoidal rule: period / n * sum(values).
double periodic_trapezoid(std::span<const double> values, double period);

}  // namespace qdelaunay
