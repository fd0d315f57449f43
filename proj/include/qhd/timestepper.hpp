#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "qhd/boundary.hpp"
#include "qhd/config.hpp"
#include "qhd/grid.hpp"
#include "qhd/poisson.hpp"

namespace qhd {

struct State {
  VectorField u;
  ScalarField p;
  double t = 0.0;
  long n = 0;
};

struct StepStats {
  double delta_p = 0.0; // max |p_new - p_old| / dt
  double max_speed = 0.0;
  SolveReport poisson;
};

struct RunSummary {
  bool converged = false;
  long n_steps = 0;
  double final_delta_p = std::numeric_limits<double>::infinity();
  double separation_length = 0.0;
  double separation_over_h = 0.0;
  double mass_flux_error = 0.0;    // max over columns of |flux - J|
  double psi_top_error = 0.0;      // max over columns of |psi(top) - J|
  double max_mass_divergence = 0.0; // max |div(u - w)| at the final state
  double wall_seconds = 0.0;
  long poisson_iterations_total = 0;

  // resolved parameters echoed for reporting
  double tau = 0.0;
  double nu = 0.0;
  double inlet_pressure_gradient = 0.0;
  double profile_gradient = 0.0;
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;
  bool uniform_spacing = true;
};

/// Raised when a step produces a non-finite field or the pressure solve
/// fails; carries the step index for diagnostics.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, long step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"),
        step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

struct RunObservers {
  std::function<void(const State&, const StepStats&)> on_step;
  std::function<void(const State&, const WField&, const ScalarField&)>
      on_snapshot; // state, w field, stream function
};

/// max |p_new - p_prev| / dt over all nodes.
double delta_p(const ScalarField& p_prev, const ScalarField& p_new, double dt);

/// Explicit time marching of the coupled system. Owns the grid, the inflow
/// data and the pressure solver workspace.
class TimeStepper {
 public:
  explicit TimeStepper(const Config& cfg);

  const GridSpec& grid() const { return grid_; }
  const InflowSpec& inflow() const { return inflow_; }
  double tau() const { return tau_; }
  double nu() const { return nu_; }

  State initial_state() const;

  /// One forward-Euler step in place: velocity BCs, w, momentum update,
  /// velocity BCs again, pressure solve (warm-started from the previous p).
  StepStats advance(State& s);

  /// Steps until max|dp/dt| < conv_tol or t reaches t_max; computes the
  /// final diagnostics. Throws SolverFailure on blow-up.
  RunSummary run(State& s, const RunObservers& obs = {});

 private:
  Config cfg_;
  GridSpec grid_;
  InflowSpec inflow_;
  double tau_ = 0.0;
  double nu_ = 0.0;
  PoissonSolver poisson_;
  // step workspace
  WField w_;
  VectorField rhs_;
  VectorField u_new_;
  ScalarField p_new_;
  ScalarField p_prev_; // previous pressure level for the warm-start guess
  ScalarField poisson_rhs_;
  bool have_prev_ = false;
};

// Single-shot convenience wrappers matching the operation contracts. The
// free step() builds a fresh solver per call; use TimeStepper for loops.
State init_state(const Config& cfg, const GridSpec& grid);
State step(const State& s, const Config& cfg);
RunSummary run(const Config& cfg, const RunObservers& obs = {});

} // namespace qhd
