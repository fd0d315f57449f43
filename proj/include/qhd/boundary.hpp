#pragma once

#include "qhd/config.hpp"
#include "qhd/grid.hpp"

namespace qhd {

/// Inflow data for the left boundary: Poiseuille parabola between the step
/// lip and the upper wall, carrying mass flow rate J.
struct InflowSpec {
  double re = 0.0;
  double h_ratio = 0.0;
  double flow_rate = 0.0;        // J
  double profile_gradient = 0.0; // parabola coefficient, always J-consistent
  double pressure_gradient = 0.0; // Neumann datum dp/dx at the inlet

  double u0(double y) const;
};

/// dp/dx that makes the Poiseuille inflow carry mass flow rate J,
/// including the tau correction of the QHD mass flux.
double inlet_gradient(double re, double h_ratio, double flow_rate, double tau);

/// Poiseuille parabola u0(y) on [h_ratio, 1]; zero at both endpoints.
double inflow_profile(double y, double re, double h_ratio, double gradient);

/// Dimensionless smoothing parameter: physical term plus the tau0 offset.
double compute_tau(double gamma, double schmidt, double mach, double re_s,
                   double tau0);

InflowSpec make_inflow_spec(const Config& cfg);

/// In-place boundary sweep: walls and step corner zeroed, inlet set from the
/// profile, outlet copies the neighbouring column (zero-gradient outflow).
void apply_velocity_bcs(VectorField& u, const InflowSpec& spec,
                        const GridSpec& g);

} // namespace qhd
