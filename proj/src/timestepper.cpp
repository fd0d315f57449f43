#include "qhd/timestepper.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <utility>

#include "qhd/diagnostics.hpp"
#include "qhd/io.hpp"
#include "qhd/operators.hpp"

namespace qhd {

double delta_p(const ScalarField& p_prev, const ScalarField& p_new, double dt) {
  require_same_grid(p_prev.grid(), p_new.grid(), "delta_p");
  if (!(dt > 0.0)) throw std::invalid_argument("delta_p: dt must be > 0");
  const std::vector<double>& a = p_prev.data();
  const std::vector<double>& b = p_new.data();
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    m = std::max(m, std::abs(b[k] - a[k]));
  return m / dt;
}

TimeStepper::TimeStepper(const Config& cfg)
    : cfg_(cfg),
      grid_(build_grid(cfg)),
      inflow_(make_inflow_spec(cfg)),
      tau_(resolved_tau(cfg)),
      nu_(1.0 / cfg.re),
      poisson_(grid_, cfg.preconditioner),
      w_(grid_),
      rhs_(grid_),
      u_new_(grid_),
      p_new_(grid_),
      p_prev_(grid_),
      poisson_rhs_(grid_) {
  validate(cfg);
}

State TimeStepper::initial_state() const { return init_state(cfg_, grid_); }

StepStats TimeStepper::advance(State& s) {
  require_same_grid(s.u.grid(), grid_, "TimeStepper::advance");

  apply_velocity_bcs(s.u, inflow_, grid_);
  detail::compute_w_into(w_, s.u, s.p, tau_, grid_);
  detail::momentum_rhs_into(rhs_, s.u, s.p, w_, nu_, grid_);

  // forward Euler on the interior; boundary values come from the BC sweep
  u_new_.x().data() = s.u.x().data();
  u_new_.y().data() = s.u.y().data();
  {
    const int nx = grid_.nx;
    double* nx_ = u_new_.x().data().data();
    double* ny_ = u_new_.y().data().data();
    const double* rx = rhs_.x().data().data();
    const double* ry = rhs_.y().data().data();
    const double dt = cfg_.dt;
#pragma omp parallel for schedule(static)
    for (int j = 1; j < grid_.ny - 1; ++j) {
      for (int i = 1; i < nx - 1; ++i) {
        const int k = j * nx + i;
        nx_[k] += dt * rx[k];
        ny_[k] += dt * ry[k];
      }
    }
  }
  apply_velocity_bcs(u_new_, inflow_, grid_);
  if (!u_new_.all_finite())
    throw SolverFailure("velocity field became non-finite", s.n + 1);

  // pressure from the updated velocity, warm-started by linear
  // extrapolation from the two previous levels
  detail::assemble_rhs_into(poisson_rhs_, rhs_, u_new_, tau_, grid_);

  {
    const std::vector<double>& pn = s.p.data();
    std::vector<double>& guess = p_new_.data();
    const std::vector<double>& prev = p_prev_.data();
    if (have_prev_) {
#pragma omp parallel for schedule(static)
      for (int k = 0; k < grid_.size(); ++k)
        guess[k] = 2.0 * pn[k] - prev[k];
    } else {
      guess = pn;
    }
    p_prev_.data() = pn;
    have_prev_ = true;
  }
  StepStats st;
  st.poisson = poisson_.solve(poisson_rhs_, inflow_.pressure_gradient, p_new_,
                              cfg_.poisson_tol, cfg_.poisson_max_iter);
  if (!st.poisson.converged)
    throw SolverFailure("pressure solve did not converge (residual " +
                            std::to_string(st.poisson.final_residual) + ")",
                        s.n + 1);
  if (!p_new_.all_finite())
    throw SolverFailure("pressure field became non-finite", s.n + 1);

  st.delta_p = delta_p(s.p, p_new_, cfg_.dt);
  st.max_speed = std::max(u_new_.x().max_abs(), u_new_.y().max_abs());
  // a blow-up can pass through finite-but-absurd magnitudes where the warm
  // started solver quits immediately and delta_p looks converged
  if (st.max_speed > 1e6)
    throw SolverFailure("velocity magnitude exceeded 1e6, the run blew up",
                        s.n + 1);

  std::swap(s.u.x().data(), u_new_.x().data());
  std::swap(s.u.y().data(), u_new_.y().data());
  std::swap(s.p.data(), p_new_.data());
  s.n += 1;
  s.t = static_cast<double>(s.n) * cfg_.dt;
  return st;
}

RunSummary TimeStepper::run(State& s, const RunObservers& obs) {
  const auto t_start = std::chrono::steady_clock::now();

  RunSummary sum;
  sum.tau = tau_;
  sum.nu = nu_;
  sum.inlet_pressure_gradient = inflow_.pressure_gradient;
  sum.profile_gradient = inflow_.profile_gradient;
  sum.nx = grid_.nx;
  sum.ny = grid_.ny;
  sum.dx = grid_.dx;
  sum.dy = grid_.dy;
  sum.uniform_spacing = grid_.uniform_spacing();

  // advisory stability numbers; large values usually mean a blow-up ahead
  {
    const double umax = std::max(s.u.x().max_abs(), s.u.y().max_abs());
    const double cfl = umax * cfg_.dt / std::min(grid_.dx, grid_.dy);
    const double diff = (nu_ + 2.0 * tau_ * umax * umax) * cfg_.dt *
                        (1.0 / (grid_.dx * grid_.dx) + 1.0 / (grid_.dy * grid_.dy));
    if (log_level() >= 1 && (cfl > 0.5 || diff > 0.5))
      std::fprintf(stderr,
                   "[qhd] warning: advisory stability numbers are large "
                   "(convective %.3g, diffusive %.3g)\n",
                   cfl, diff);
    else if (log_level() >= 2)
      std::fprintf(stderr, "[qhd] advisory stability numbers: convective %.3g, diffusive %.3g\n",
                   cfl, diff);
  }

  bool converged = false;
  double last_dp = std::numeric_limits<double>::infinity();
  while (s.t < cfg_.t_max && !converged) {
    const StepStats st = advance(s);
    sum.poisson_iterations_total += st.poisson.iterations;
    last_dp = st.delta_p;
    if (obs.on_step) obs.on_step(s, st);
    if (cfg_.snapshot_every > 0 && obs.on_snapshot &&
        s.n % cfg_.snapshot_every == 0) {
      const WField w = compute_w(s.u, s.p, tau_, grid_);
      obs.on_snapshot(s, w, stream_function(s.u, w, grid_));
    }
    if (s.n % cfg_.conv_check_every == 0 && st.delta_p < cfg_.conv_tol)
      converged = true;
    if (log_level() >= 2 && s.n % 1000 == 0)
      std::fprintf(stderr, "[qhd] step %ld t=%.4f delta_p=%.3e pcg_iters=%d\n",
                   s.n, s.t, st.delta_p, st.poisson.iterations);
  }

  sum.converged = converged;
  sum.n_steps = s.n;
  sum.final_delta_p = last_dp;

  const WField w = compute_w(s.u, s.p, tau_, grid_);
  const ScalarField psi = stream_function(s.u, w, grid_);
  sum.separation_length = separation_length(psi, grid_);
  sum.separation_over_h =
      grid_.step_ratio > 0.0 ? sum.separation_length / grid_.step_ratio : 0.0;

  double flux_err = 0.0;
  double psi_top_err = 0.0;
  for (int i = 0; i < grid_.nx; ++i) {
    flux_err = std::max(
        flux_err, std::abs(mass_flux(s.u, w, grid_, i) - cfg_.flow_rate));
    psi_top_err = std::max(
        psi_top_err, std::abs(psi(i, grid_.ny - 1) - cfg_.flow_rate));
  }
  sum.mass_flux_error = flux_err;
  sum.psi_top_error = psi_top_err;

  VectorField mass_vel(grid_);
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i) {
      mass_vel.x()(i, j) = s.u.x()(i, j) - w.x()(i, j);
      mass_vel.y()(i, j) = s.u.y()(i, j) - w.y()(i, j);
    }
  sum.max_mass_divergence = divergence(mass_vel, grid_).max_abs();

  sum.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return sum;
}

State init_state(const Config& cfg, const GridSpec& grid) {
  const GridSpec expected = build_grid(cfg);
  require_same_grid(grid, expected, "init_state");

  State s{VectorField(grid), ScalarField(grid), 0.0, 0};
  const InflowSpec inflow = make_inflow_spec(cfg);

  if (cfg.init == InitMode::Developed) {
    for (int j = 0; j < grid.ny; ++j) {
      const double y = grid.y(j);
      if (y >= grid.step_ratio) {
        const double v = inflow.u0(y);
        for (int i = 0; i < grid.nx; ++i) s.u.x()(i, j) = v;
      }
    }
  }
  apply_velocity_bcs(s.u, inflow, grid);

  // p(x, y, 0) = g (x - L/H): constant gradient, exactly zero at the outlet
  const double g_bc = inflow.pressure_gradient;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      s.p(i, j) = g_bc * grid.dx * static_cast<double>(i - (grid.nx - 1));
  return s;
}

State step(const State& s, const Config& cfg) {
  TimeStepper stepper(cfg);
  State next = s;
  stepper.advance(next);
  return next;
}

RunSummary run(const Config& cfg, const RunObservers& obs) {
  TimeStepper stepper(cfg);
  State s = stepper.initial_state();
  return stepper.run(s, obs);
}

} // namespace qhd
