#include "qhd/verification.hpp"

#include <cmath>
#include <numbers>

#include "qhd/boundary.hpp"
#include "qhd/operators.hpp"
#include "qhd/poisson.hpp"
#include "qhd/timestepper.hpp"

namespace qhd::verification {

namespace {

GridSpec unit_square(int n) {
  Config cfg;
  cfg.length = 1.0;
  cfg.h_ratio = 0.5;
  cfg.nx = n;
  cfg.ny = n;
  return build_grid(cfg);
}

void fill_ratios(OrderStudy& s) {
  for (std::size_t k = 1; k < s.error.size(); ++k)
    s.ratio.push_back(s.error[k - 1] / s.error[k]);
}

} // namespace

bool OrderStudy::ratios_within(double lo, double hi) const {
  if (ratio.empty()) return false;
  for (double r : ratio)
    if (!(r >= lo && r <= hi)) return false;
  return true;
}

OrderStudy momentum_rhs_order(const std::vector<int>& node_counts, double nu) {
  OrderStudy study;
  study.name = "momentum_rhs";
  for (int n : node_counts) {
    const GridSpec g = unit_square(n);
    VectorField u(g);
    ScalarField p(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double x = g.x(i), y = g.y(j);
        u.x()(i, j) = std::sin(x) * std::cos(y);
        u.y()(i, j) = -std::cos(x) * std::sin(y);
      }
    const WField w(g); // tau = 0 limit
    const MomentumRhs rhs = momentum_rhs(u, p, w, nu, g);

    double err = 0.0;
    for (int j = 1; j < g.ny - 1; ++j)
      for (int i = 1; i < g.nx - 1; ++i) {
        const double x = g.x(i), y = g.y(j);
        const double cx = std::cos(x), sx = std::sin(x);
        const double cy = std::cos(y), sy = std::sin(y);
        const double exact_x = -std::sin(2 * x) * cy * cy +
                               0.5 * std::sin(2 * x) * std::cos(2 * y) -
                               2.0 * nu * sx * cy;
        const double exact_y = 0.5 * std::cos(2 * x) * std::sin(2 * y) -
                               cx * cx * std::sin(2 * y) +
                               2.0 * nu * cx * sy;
        err = std::max(err, std::abs(rhs.x()(i, j) - exact_x));
        err = std::max(err, std::abs(rhs.y()(i, j) - exact_y));
      }
    study.h.push_back(g.dx);
    study.error.push_back(err);
  }
  fill_ratios(study);
  return study;
}

OrderStudy divergence_order(const std::vector<int>& node_counts) {
  OrderStudy study;
  study.name = "divergence";
  for (int n : node_counts) {
    const GridSpec g = unit_square(n);
    VectorField v(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double x = g.x(i), y = g.y(j);
        v.x()(i, j) = std::sin(x) * std::cos(y);
        v.y()(i, j) = std::cos(x) * std::sin(y);
      }
    const ScalarField div = divergence(v, g);
    double err = 0.0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double exact = 2.0 * std::cos(g.x(i)) * std::cos(g.y(j));
        err = std::max(err, std::abs(div(i, j) - exact));
      }
    study.h.push_back(g.dx);
    study.error.push_back(err);
  }
  fill_ratios(study);
  return study;
}

OrderStudy assemble_rhs_order(const std::vector<int>& node_counts, double tau) {
  OrderStudy study;
  study.name = "assemble_rhs";
  for (int n : node_counts) {
    const GridSpec g = unit_square(n);
    VectorField u(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double x = g.x(i), y = g.y(j);
        u.x()(i, j) = std::sin(x) * std::cos(y);
        u.y()(i, j) = std::cos(x) * std::sin(y);
      }
    const ScalarField rhs = assemble_rhs(u, tau, g);
    double err = 0.0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double x = g.x(i), y = g.y(j);
        const double exact = (2.0 / tau) * std::cos(x) * std::cos(y) -
                             2.0 * std::cos(2 * x) * std::cos(2 * y);
        err = std::max(err, std::abs(rhs(i, j) - exact));
      }
    study.h.push_back(g.dx);
    study.error.push_back(err);
  }
  fill_ratios(study);
  return study;
}

OrderStudy poisson_order(const std::vector<int>& node_counts) {
  using std::numbers::pi;
  OrderStudy study;
  study.name = "poisson";
  for (int n : node_counts) {
    // straight channel: the manufactured constant inlet slope applies on
    // the whole left boundary
    Config cfg;
    cfg.length = 1.0;
    cfg.h_ratio = 0.0;
    cfg.nx = n;
    cfg.ny = n;
    const GridSpec g = build_grid(cfg);
    const double L = g.length;
    const double a = 0.7; // inlet slope magnitude
    const double b = 1.3;
    const double k = pi / (2.0 * L);

    auto exact = [&](double x, double y) {
      return a * (L - x) + b * std::sin(k * (L - x)) * std::cos(pi * y);
    };

    PoissonProblem prob;
    prob.grid = g;
    prob.rhs = ScalarField(g);
    prob.inlet_gradient = -a;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        prob.rhs(i, j) = -b * (k * k + pi * pi) *
                         std::sin(k * (L - g.x(i))) * std::cos(pi * g.y(j));

    auto [p, rep] = pcg_solve(prob, ScalarField(g), 1e-12, 200000,
                              Preconditioner::IncompleteCholesky);
    double err = 0.0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        err = std::max(err, std::abs(p(i, j) - exact(g.x(i), g.y(j))));
    study.h.push_back(g.dx);
    study.error.push_back(err);
  }
  fill_ratios(study);
  return study;
}

PoiseuilleReport poiseuille_fixed_point(double re, double length,
                                        double spacing, long n_steps) {
  Config cfg;
  cfg.re = re;
  cfg.h_ratio = 0.0; // straight channel, inflow spans the whole left boundary
  cfg.length = length;
  cfg.dx = spacing;
  cfg.dy = spacing;
  cfg.init = InitMode::Developed;
  cfg.conv_tol = 1e-300; // never triggers; run exactly n_steps
  cfg.t_max = static_cast<double>(n_steps) * cfg.dt;
  cfg.snapshot_every = 0;

  TimeStepper stepper(cfg);
  State s = stepper.initial_state();

  PoiseuilleReport rep;
  StepStats last;
  for (long k = 0; k < n_steps; ++k) last = stepper.advance(s);
  rep.final_delta_p = last.delta_p;
  rep.n_steps = s.n;

  const InflowSpec& inflow = stepper.inflow();
  const GridSpec& g = stepper.grid();
  double err = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    const double u0 = inflow.u0(g.y(j));
    for (int i = 0; i < g.nx; ++i) {
      err = std::max(err, std::abs(s.u.x()(i, j) - u0));
      err = std::max(err, std::abs(s.u.y()(i, j)));
    }
  }
  rep.max_velocity_error = err;
  return rep;
}

} // namespace qhd::verification
