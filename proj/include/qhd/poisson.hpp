#pragma once

#include <utility>
#include <vector>

#include "qhd/config.hpp"
#include "qhd/grid.hpp"

namespace qhd {

/// Discrete pressure problem: 5-point Laplacian with homogeneous Neumann
/// rows on the walls, an inhomogeneous Neumann datum on the inlet rows and
/// p = 0 on the outlet column.
struct PoissonProblem {
  GridSpec grid;
  ScalarField rhs;             // PDE right side at every node
  double inlet_gradient = 0.0; // dp/dx datum on the inlet rows
};

struct SolveReport {
  int iterations = 0;
  double final_residual = 0.0; // relative two-norm
  bool converged = false;
};

/// (1/tau) div u - div((u . grad) u), the right side of the pressure
/// equation, with all derivatives second order.
ScalarField assemble_rhs(const VectorField& u, double tau, const GridSpec& g);

namespace detail {
// Reusable-buffer variant; conv_scratch holds (u . grad) u on exit.
void assemble_rhs_into(ScalarField& out, VectorField& conv_scratch,
                       const VectorField& u, double tau, const GridSpec& g);
} // namespace detail

/// Row-wise action of the discrete pressure system on p. Neumann ghost
/// values are eliminated (wall rows use a mirror, inlet rows fold in the
/// gradient datum), Dirichlet rows return p itself, and boundary rows carry
/// half-cell weights; the sign is chosen so the linear part is symmetric
/// positive definite on the non-Dirichlet nodes. At the solution,
/// apply_operator(p, prob) equals rhs_vector(prob).
ScalarField apply_operator(const ScalarField& p, const PoissonProblem& prob);

/// The vector apply_operator matches at the solution (scaled, sign-adjusted
/// problem.rhs; zero on the outlet column).
ScalarField rhs_vector(const PoissonProblem& prob);

/// Preconditioned conjugate-gradient solve (conjugate-residual variant, so
/// the residual measure it minimizes is non-increasing), warm-started from
/// p0. residual_history, when given, receives that monotone preconditioned
/// residual norm per iteration; the stopping test and the report use the
/// plain relative two-norm. On failure the report carries converged = false
/// and the last iterate is still returned.
std::pair<ScalarField, SolveReport> pcg_solve(
    const PoissonProblem& prob, const ScalarField& p0, double tol,
    int max_iter, Preconditioner pc = Preconditioner::Jacobi,
    std::vector<double>* residual_history = nullptr);

/// Holds the assembled stencil weights, the preconditioner and the Krylov
/// workspace for repeated solves on one grid. Not shareable during a solve.
class PoissonSolver {
 public:
  PoissonSolver(const GridSpec& g, Preconditioner pc);

  /// Solves in place, using the incoming p as the initial guess.
  SolveReport solve(const ScalarField& rhs, double inlet_gradient,
                    ScalarField& p, double tol, int max_iter,
                    std::vector<double>* residual_history = nullptr);

 private:
  void apply(const double* x, double* y) const;
  void precondition(const double* r, double* z) const;

  GridSpec grid_;
  Preconditioner pc_;
  std::vector<unsigned char> inlet_row_;
  std::vector<double> inv_diag_; // Jacobi
  std::vector<double> ic_d_;     // modified-incomplete-Cholesky diagonal
  std::vector<double> b_, r_, z_, d_, q_, mq_, az_, maz_;
};

} // namespace qhd
