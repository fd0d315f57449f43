#pragma once

#include <array>
#include <vector>

#include "qhd/grid.hpp"

namespace qhd {

using Polyline = std::vector<std::array<double, 2>>;

struct IsolineSet {
  std::vector<double> levels;
  std::vector<std::vector<Polyline>> polylines; // one chain list per level
};

/// Stream function of the solenoidal mass flux u - w: column-wise
/// trapezoidal integration of (u_x - w_x) upward from psi = 0 on the lower
/// wall. Its value at the upper wall approximates the flow rate J.
ScalarField stream_function(const VectorField& u, const WField& w,
                            const GridSpec& g);

/// Reattachment distance of the recirculation bubble: the last negative to
/// non-negative crossing of psi along the first node row above the lower
/// wall, linearly interpolated. Zero when no negative region exists; the
/// channel length when the bubble still touches the outlet.
double separation_length(const ScalarField& psi, const GridSpec& g);

/// Trapezoidal integral of (u_x - w_x) over one grid column. Shares the
/// accumulation with stream_function, so it equals psi(top) - psi(bottom)
/// exactly.
double mass_flux(const VectorField& u, const WField& w, const GridSpec& g,
                 int column);

/// Marching-squares contour extraction with linear edge interpolation.
IsolineSet extract_isolines(const ScalarField& psi,
                            const std::vector<double>& levels,
                            const GridSpec& g);

} // namespace qhd
