#pragma once

#include <optional>

namespace qhd {

enum class Preconditioner { Jacobi, IncompleteCholesky };

enum class InitMode { Rest, Developed };

/// All run parameters in dimensionless form. Defaults encode the laminar
/// backward-facing-step benchmark setup.
struct Config {
  double re = 100.0;    // Reynolds number; kinematic viscosity is 1/re
  double h_ratio = 0.5; // step height h/H; 0 selects the straight channel
  double length = 7.5;  // channel length L/H
  double dx = 0.025;
  double dy = 0.025;
  int nx = 0; // optional explicit node counts; 0 means derive from dx/dy
  int ny = 0;
  double dt = 1e-4;
  std::optional<double> tau0; // smoothing-parameter offset; default 0.5/re
  double gamma = 1.4;         // isentropic exponent (physical tau term)
  double schmidt = 1.0;
  double mach = 0.0;
  double re_s = 2e6; // Reynolds number built on the speed of sound
  double flow_rate = 1.0; // inlet mass flow rate J
  double conv_tol = 1e-3; // steady-state criterion on max|dp/dt|
  double t_max = 20.0;
  double poisson_tol = 1e-8;
  int poisson_max_iter = 20000;
  Preconditioner preconditioner = Preconditioner::Jacobi;
  long snapshot_every = 2000;
  long conv_check_every = 1;
  std::optional<double> inlet_gradient; // pressure-BC datum override
  InitMode init = InitMode::Rest;

  bool operator==(const Config&) const = default;
};

/// Range-checks every field; throws std::invalid_argument naming the key.
void validate(const Config& cfg);

double resolved_tau0(const Config& cfg);

/// Smoothing parameter actually used by a run (physical term + tau0).
double resolved_tau(const Config& cfg);

} // namespace qhd
