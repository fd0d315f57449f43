#include "qhd/poisson.hpp"

#include <cmath>
#include <stdexcept>

#include "qhd/operators.hpp"

namespace qhd {

namespace {

inline double row_scale(const GridSpec& g, int i, int j) {
  double s = 1.0;
  if (i == 0) s *= 0.5;
  if (j == 0 || j == g.ny - 1) s *= 0.5;
  return s;
}

// The inlet gradient datum applies on the closure of the inflow segment:
// every x = 0 row above the step corner (wall corners abutting the inlet
// included). The step corner itself keeps the wall condition.
inline bool inlet_datum_row(const GridSpec& g, int j) {
  if (g.step_ratio == 0.0) return true;
  return j > g.step_index;
}

// Row-wise action of the pressure system: negated 5-point Laplacian with
// Neumann ghosts eliminated by mirroring, scaled by the half-cell weights so
// the matrix is symmetric. Dirichlet rows (outlet column) pass x through.
// Edge nodes are peeled off so the interior loops stay branch-free.
void apply_stencil(const GridSpec& g, const double* __restrict__ x, double* __restrict__ y) {
  const int nx = g.nx;
  const int ny = g.ny;
  const double idx2 = 1.0 / (g.dx * g.dx);
  const double idy2 = 1.0 / (g.dy * g.dy);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    const double sy = (j == 0 || j == ny - 1) ? 0.5 : 1.0;
    const int row = j * nx;
    {
      const int k = row;
      const double xpart = 2.0 * (x[k] - x[k + 1]) * idx2;
      double ypart;
      if (j == 0)
        ypart = 2.0 * (x[k] - x[k + nx]) * idy2;
      else if (j == ny - 1)
        ypart = 2.0 * (x[k] - x[k - nx]) * idy2;
      else
        ypart = (2.0 * x[k] - x[k - nx] - x[k + nx]) * idy2;
      y[k] = 0.5 * sy * (xpart + ypart);
    }
    if (j == 0) {
      for (int k = row + 1; k < row + nx - 1; ++k)
        y[k] = sy * ((2.0 * x[k] - x[k - 1] - x[k + 1]) * idx2 +
                     2.0 * (x[k] - x[k + nx]) * idy2);
    } else if (j == ny - 1) {
      for (int k = row + 1; k < row + nx - 1; ++k)
        y[k] = sy * ((2.0 * x[k] - x[k - 1] - x[k + 1]) * idx2 +
                     2.0 * (x[k] - x[k - nx]) * idy2);
    } else {
      for (int k = row + 1; k < row + nx - 1; ++k)
        y[k] = (2.0 * x[k] - x[k - 1] - x[k + 1]) * idx2 +
               (2.0 * x[k] - x[k - nx] - x[k + nx]) * idy2;
    }
    y[row + nx - 1] = x[row + nx - 1];
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  const std::size_t n = a.size();
#pragma omp simd reduction(+ : s)
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

} // namespace

namespace detail {

void assemble_rhs_into(ScalarField& out, VectorField& conv,
                       const VectorField& u, double tau, const GridSpec& g) {
  const double inv_tau = 1.0 / tau;
  // convective derivative (u . grad) u at every node
#pragma omp parallel for schedule(static)
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double a = u.x()(i, j);
      const double b = u.y()(i, j);
      conv.x()(i, j) = a * ddx(u.x(), i, j) + b * ddy(u.x(), i, j);
      conv.y()(i, j) = a * ddx(u.y(), i, j) + b * ddy(u.y(), i, j);
    }
  }
#pragma omp parallel for schedule(static)
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double div_u = ddx(u.x(), i, j) + ddy(u.y(), i, j);
      const double div_conv = ddx(conv.x(), i, j) + ddy(conv.y(), i, j);
      out(i, j) = inv_tau * div_u - div_conv;
    }
  }
}

} // namespace detail

ScalarField assemble_rhs(const VectorField& u, double tau, const GridSpec& g) {
  require_same_grid(u.grid(), g, "assemble_rhs");
  if (!(tau > 0.0)) throw std::invalid_argument("assemble_rhs: tau must be > 0");
  VectorField conv(g);
  ScalarField rhs(g);
  detail::assemble_rhs_into(rhs, conv, u, tau, g);
  return rhs;
}

ScalarField apply_operator(const ScalarField& p, const PoissonProblem& prob) {
  require_same_grid(p.grid(), prob.grid, "apply_operator");
  ScalarField out(prob.grid);
  apply_stencil(prob.grid, p.data().data(), out.data().data());
  if (prob.inlet_gradient != 0.0) {
    const GridSpec& g = prob.grid;
    for (int j = 0; j < g.ny; ++j)
      if (inlet_datum_row(g, j))
        out(0, j) += row_scale(g, 0, j) * 2.0 * prob.inlet_gradient / g.dx;
  }
  return out;
}

ScalarField rhs_vector(const PoissonProblem& prob) {
  require_same_grid(prob.rhs.grid(), prob.grid, "rhs_vector");
  const GridSpec& g = prob.grid;
  ScalarField b(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      b(i, j) = (i == g.nx - 1) ? 0.0 : -row_scale(g, i, j) * prob.rhs(i, j);
  return b;
}

PoissonSolver::PoissonSolver(const GridSpec& g, Preconditioner pc)
    : grid_(g), pc_(pc) {
  const int n = g.size();
  inlet_row_.assign(static_cast<std::size_t>(g.ny), 0);
  for (int j = 0; j < g.ny; ++j) inlet_row_[j] = inlet_datum_row(g, j) ? 1 : 0;

  const double idx2 = 1.0 / (g.dx * g.dx);
  const double idy2 = 1.0 / (g.dy * g.dy);
  const double diag_unit = 2.0 * idx2 + 2.0 * idy2;

  inv_diag_.assign(static_cast<std::size_t>(n), 1.0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx - 1; ++i)
      inv_diag_[g.index(i, j)] = 1.0 / (row_scale(g, i, j) * diag_unit);

  if (pc_ == Preconditioner::IncompleteCholesky) {
    // Gustafsson-modified incomplete Cholesky, diagonal-only storage:
    // M = (D + L) D^-1 (D + L'), with L the strict lower triangle of A and
    // D chosen so that the fill dropped when eliminating a node is lumped
    // onto the diagonals of its east/north neighbours.
    ic_d_.assign(static_cast<std::size_t>(n), 1.0);
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const int k = g.index(i, j);
        if (i == g.nx - 1) continue; // Dirichlet: identity row
        const double s = row_scale(g, i, j);
        double t = s * diag_unit;
        if (i > 0) {
          const int m = k - 1; // west neighbour (never Dirichlet)
          const double a_w = -s * idx2;
          const double a_n_m =
              (j < g.ny - 1) ? -row_scale(g, i - 1, j) * ((j == 0) ? 2.0 : 1.0) * idy2
                             : 0.0;
          t -= a_w * (a_w + a_n_m) / ic_d_[m];
        }
        if (j > 0) {
          const int m = k - g.nx; // south neighbour, same column
          const double a_s = -s * ((j == g.ny - 1) ? 2.0 : 1.0) * idy2;
          const double a_e_m =
              (i < g.nx - 2) ? -row_scale(g, i, j - 1) * ((i == 0) ? 2.0 : 1.0) * idx2
                             : 0.0;
          t -= a_s * (a_s + a_e_m) / ic_d_[m];
        }
        if (!(t > 0.0)) t = s * diag_unit; // breakdown guard
        ic_d_[k] = t;
      }
    }
  }

  b_.resize(n);
  r_.resize(n);
  z_.resize(n);
  d_.resize(n);
  q_.resize(n);
  mq_.resize(n);
  az_.resize(n);
  maz_.resize(n);
}

void PoissonSolver::apply(const double* x, double* y) const {
  apply_stencil(grid_, x, y);
}

void PoissonSolver::precondition(const double* __restrict__ r, double* __restrict__ z) const {
  const int n = grid_.size();
  if (pc_ == Preconditioner::Jacobi) {
#pragma omp parallel for schedule(static)
    for (int k = 0; k < n; ++k) z[k] = r[k] * inv_diag_[k];
    return;
  }
  // forward then backward substitution with A's own off-diagonals and the
  // modified diagonal (sequential recurrences)
  const int nx = grid_.nx;
  const int ny = grid_.ny;
  const double idx2 = 1.0 / (grid_.dx * grid_.dx);
  const double idy2 = 1.0 / (grid_.dy * grid_.dy);
  for (int j = 0; j < ny; ++j) {
    const double sy = (j == 0 || j == ny - 1) ? 0.5 : 1.0;
    const double ys = (j == ny - 1) ? 2.0 : 1.0;
    const int row = j * nx;
    for (int i = 0; i < nx; ++i) {
      const int k = row + i;
      if (i == nx - 1) {
        z[k] = r[k];
        continue;
      }
      const double s = (i == 0) ? 0.5 * sy : sy;
      double v = r[k];
      if (i > 0) v += s * idx2 * z[k - 1];
      if (j > 0) v += s * ys * idy2 * z[k - nx];
      z[k] = v / ic_d_[k];
    }
  }
  for (int j = ny - 1; j >= 0; --j) {
    const double sy = (j == 0 || j == ny - 1) ? 0.5 : 1.0;
    const double yn = (j == 0) ? 2.0 : 1.0;
    const int row = j * nx;
    for (int i = nx - 1; i >= 0; --i) {
      const int k = row + i;
      if (i == nx - 1) continue; // Dirichlet: z already equals r
      const double s = (i == 0) ? 0.5 * sy : sy;
      double v = 0.0;
      if (i < nx - 2) v += s * ((i == 0) ? 2.0 : 1.0) * idx2 * z[k + 1];
      if (j < ny - 1) v += s * yn * idy2 * z[k + nx];
      z[k] += v / ic_d_[k];
    }
  }
}

SolveReport PoissonSolver::solve(const ScalarField& rhs, double inlet_gradient,
                                 ScalarField& p, double tol, int max_iter,
                                 std::vector<double>* residual_history) {
  require_same_grid(rhs.grid(), grid_, "PoissonSolver::solve");
  require_same_grid(p.grid(), grid_, "PoissonSolver::solve");
  if (!(tol > 0.0)) throw std::invalid_argument("PoissonSolver: tol must be > 0");

  const GridSpec& g = grid_;
  const int n = g.size();
  const int nx = g.nx;
  double* x = p.data().data();
  const double* f = rhs.data().data();

  // b = -D*rhs - datum, zero on the Dirichlet column; pin the iterate there
  for (int j = 0; j < g.ny; ++j) {
    const double sy = (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
    for (int i = 0; i < nx; ++i) {
      const int k = j * nx + i;
      if (i == nx - 1) {
        b_[k] = 0.0;
        x[k] = 0.0;
        continue;
      }
      const double s = (i == 0) ? 0.5 * sy : sy;
      double bk = -s * f[k];
      if (i == 0 && inlet_row_[j])
        bk -= s * 2.0 * inlet_gradient / g.dx;
      b_[k] = bk;
    }
  }

  const double norm_b = norm2(b_);
  const double denom = (norm_b > 0.0) ? norm_b : 1.0;

  SolveReport rep;
  if (residual_history) residual_history->clear();

  // Preconditioned conjugate residuals: minimizes the preconditioned
  // residual norm sqrt(r' M^-1 r), which is therefore non-increasing; the
  // stopping test uses the plain relative two-norm.
  apply(x, q_.data());
  for (int k = 0; k < n; ++k) r_[k] = b_[k] - q_[k];
  precondition(r_.data(), z_.data());
  double res = norm2(r_);
  if (residual_history)
    residual_history->push_back(std::sqrt(std::max(0.0, dot(r_, z_))));
  if (res <= tol * denom) {
    rep.iterations = 0;
    rep.final_residual = res / denom;
    rep.converged = true;
    return rep;
  }

  d_ = z_;                     // search direction
  apply(d_.data(), q_.data()); // q = A d
  precondition(q_.data(), mq_.data());
  double rho = dot(z_, q_); // = (z, A z) while d = z
  double sigma = dot(q_, mq_);

  int it = 0;
  while (it < max_iter) {
    if (!(sigma > 0.0) || !(rho > 0.0)) break; // finite-precision breakdown
    const double alpha = rho / sigma;
    double res2 = 0.0;
#pragma omp parallel for simd schedule(static) reduction(+ : res2)
    for (int k = 0; k < n; ++k) {
      x[k] += alpha * d_[k];
      const double rk = r_[k] - alpha * q_[k];
      r_[k] = rk;
      z_[k] -= alpha * mq_[k];
      res2 += rk * rk;
    }
    ++it;
    res = std::sqrt(res2);
    if (residual_history)
      residual_history->push_back(std::sqrt(std::max(0.0, dot(r_, z_))));
    if (res <= tol * denom) break;

    apply(z_.data(), az_.data());
    precondition(az_.data(), maz_.data());
    const double rho_new = dot(z_, az_);
    if (!(rho_new > 0.0)) break;
    const double beta = rho_new / rho;
    rho = rho_new;
    double sig = 0.0;
#pragma omp parallel for simd schedule(static) reduction(+ : sig)
    for (int k = 0; k < n; ++k) {
      d_[k] = z_[k] + beta * d_[k];
      const double qk = az_[k] + beta * q_[k];
      q_[k] = qk;
      const double mk = maz_[k] + beta * mq_[k];
      mq_[k] = mk;
      sig += qk * mk;
    }
    sigma = sig;
  }

  rep.iterations = it;
  rep.final_residual = res / denom;
  rep.converged = (res <= tol * denom);
  return rep;
}

std::pair<ScalarField, SolveReport> pcg_solve(
    const PoissonProblem& prob, const ScalarField& p0, double tol,
    int max_iter, Preconditioner pc, std::vector<double>* residual_history) {
  PoissonSolver solver(prob.grid, pc);
  ScalarField p = p0;
  SolveReport rep = solver.solve(prob.rhs, prob.inlet_gradient, p, tol,
                                 max_iter, residual_history);
  return {std::move(p), rep};
}

} // namespace qhd
