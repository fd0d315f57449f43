#include "qhd/boundary.hpp"

#include <cmath>
#include <stdexcept>

namespace qhd {

double inlet_gradient(double re, double h_ratio, double flow_rate, double tau) {
  if (!(re > 0.0)) throw std::invalid_argument("inlet_gradient: re must be > 0");
  if (!(h_ratio >= 0.0 && h_ratio < 1.0))
    throw std::invalid_argument("inlet_gradient: h_ratio must lie in [0, 1)");
  if (!(tau >= 0.0)) throw std::invalid_argument("inlet_gradient: tau must be >= 0");
  const double b = 1.0 - h_ratio;
  return -12.0 * flow_rate / (re * b * b * b) /
         (1.0 + 12.0 * tau / (re * b * b));
}

double inflow_profile(double y, double re, double h_ratio, double gradient) {
  if (y < h_ratio - 1e-12 || y > 1.0 + 1e-12)
    throw std::out_of_range("inflow_profile: y outside the inlet segment");
  return 0.5 * re * gradient * (1.0 - y) * (h_ratio - y);
}

double compute_tau(double gamma, double schmidt, double mach, double re_s,
                   double tau0) {
  if (!(gamma >= 0.0) || !(mach >= 0.0) || !(tau0 >= 0.0))
    throw std::invalid_argument("compute_tau: inputs must be >= 0");
  if (!(schmidt > 0.0)) throw std::invalid_argument("compute_tau: schmidt must be > 0");
  if (!(re_s > 0.0)) throw std::invalid_argument("compute_tau: re_s must be > 0");
  return (gamma / schmidt) * (mach / re_s) + tau0;
}

double InflowSpec::u0(double y) const {
  return inflow_profile(y, re, h_ratio, profile_gradient);
}

InflowSpec make_inflow_spec(const Config& cfg) {
  InflowSpec spec;
  spec.re = cfg.re;
  spec.h_ratio = cfg.h_ratio;
  spec.flow_rate = cfg.flow_rate;
  const double tau = resolved_tau(cfg);
  spec.profile_gradient = inlet_gradient(cfg.re, cfg.h_ratio, cfg.flow_rate, tau);
  // An override moves only the pressure-BC datum; the parabola keeps
  // carrying the requested flow rate.
  spec.pressure_gradient =
      cfg.inlet_gradient ? *cfg.inlet_gradient : spec.profile_gradient;
  return spec;
}

void apply_velocity_bcs(VectorField& u, const InflowSpec& spec,
                        const GridSpec& g) {
  require_same_grid(u.grid(), g, "apply_velocity_bcs");
  ScalarField& ux = u.x();
  ScalarField& uy = u.y();
  for (int i = 0; i < g.nx; ++i) {
    ux(i, 0) = 0.0;
    uy(i, 0) = 0.0;
    ux(i, g.ny - 1) = 0.0;
    uy(i, g.ny - 1) = 0.0;
  }
  for (int j = 1; j < g.ny - 1; ++j) {
    if (classify(g, 0, j) == NodeClass::Inlet) {
      ux(0, j) = spec.u0(g.y(j));
      uy(0, j) = 0.0;
    } else { // left solid wall or step corner
      ux(0, j) = 0.0;
      uy(0, j) = 0.0;
    }
    // zero-gradient outflow: copy the neighbouring column
    ux(g.nx - 1, j) = ux(g.nx - 2, j);
    uy(g.nx - 1, j) = uy(g.nx - 2, j);
  }
}

} // namespace qhd
