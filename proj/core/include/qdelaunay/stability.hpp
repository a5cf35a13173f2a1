#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qdelaunay/delaunay_solver.hpp"
#include "qdelaunay/dimension_params.hpp"

namespace qdelaunay {

/// Connected arcs of {v' > 0} on the circle of circumference l t_a, sampled
/// at the midpoints of the orbit's sample grid so that the extrema (where
/// v' vanishes) are never sampled. Throws InvalidParameter for l < 1.
int nodal_arcs(const DelaunayOrbit& orbit, int l);

/// #{m in Z : symbol_cyl(2 pi m / T) < 0}, by enumeration.
int cylinder_negative_modes(const DimensionParams& params, double period);
/// 2 floor(T / t_cyl) + 1.
int cylinder_negative_modes_closed_form(const DimensionParams& params, double period);

struct SpectrumReport {
  std::string tag;             ///< "cylinder" or "delaunay"
  double circumference = 0.0;  ///< l t_a, or T for the cylinder
  std::optional<double> a;
  int copies = 1;
  std::size_t grid = 0;
  /// Lowest eigenvalues, ascending: at least 2l+3 and always every negative one plus two.
  std::vector<double> eigenvalues;
  int negative_count = 0;
  double largest_magnitude = 0.0;  ///< max |lambda| over the full discrete spectrum
  double near_zero = 0.0;          ///< eigenvalue of smallest magnitude
  /// |<e, v'>| / (|e| |v'|) for the near-zero eigenvector e; 0 for the cylinder.
  double translation_correlation = 0.0;
};

/// Spectrum of w -> w'''' - c2 w'' + (c0 - p r v^(p-1)) w on N uniform points
/// over l periods of the orbit, with Fourier differentiation matrices.
/// Throws InvalidParameter (N not a power of two >= 128, l < 1) or EigenFailure.
SpectrumReport discretized_spectrum(const DimensionParams& params, const DelaunayOrbit& orbit, int l,
                                    std::size_t grid = 256);
/// Same operator around v_cyl on the circle of circumference T.
SpectrumReport cylinder_spectrum(const DimensionParams& params, double period, std::size_t grid = 256);

/// Integrates the orbit together with its variational equation from the
/// state at t = 0 with w(0) = (v', v'', v''', v'''')(0), forward and backward
/// over half a period each, and returns max |w - (v', v'', v''', v'''')|
/// relative to max |(v', v'', v''', v'''')|.
double variational_residual(const DimensionParams& params, const DelaunayOrbit& orbit, double rtol = 1e-12);
/// Same from an arbitrary state over [-period/2, period/2]. At the cylinder
/// the flow derivative is w = 0 and the residual is exactly 0.
double variational_residual(const DimensionParams& params, const CylinderState& s0, double period,
                            double rtol = 1e-12);

}  // namespace qdelaunay
