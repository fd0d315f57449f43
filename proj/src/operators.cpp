#include "qhd/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace qhd {

namespace detail {

// One-sided stencils are grouped as differences so that constant fields
// differentiate to exactly zero in floating point.
double ddx(const ScalarField& f, int i, int j) {
  const GridSpec& g = f.grid();
  const double inv2 = 1.0 / (2.0 * g.dx);
  if (i == 0)
    return (4.0 * (f(1, j) - f(0, j)) - (f(2, j) - f(0, j))) * inv2;
  if (i == g.nx - 1)
    return (4.0 * (f(i, j) - f(i - 1, j)) - (f(i, j) - f(i - 2, j))) * inv2;
  return (f(i + 1, j) - f(i - 1, j)) * inv2;
}

double ddy(const ScalarField& f, int i, int j) {
  const GridSpec& g = f.grid();
  const double inv2 = 1.0 / (2.0 * g.dy);
  if (j == 0)
    return (4.0 * (f(i, 1) - f(i, 0)) - (f(i, 2) - f(i, 0))) * inv2;
  if (j == g.ny - 1)
    return (4.0 * (f(i, j) - f(i, j - 1)) - (f(i, j) - f(i, j - 2))) * inv2;
  return (f(i, j + 1) - f(i, j - 1)) * inv2;
}

void compute_w_into(WField& w, const VectorField& u, const ScalarField& p,
                    double tau, const GridSpec& g) {
  const ScalarField& ux = u.x();
  const ScalarField& uy = u.y();
  ScalarField& wx = w.x();
  ScalarField& wy = w.y();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double a = ux(i, j);
      const double b = uy(i, j);
      wx(i, j) = tau * (a * ddx(ux, i, j) + b * ddy(ux, i, j) + ddx(p, i, j));
      wy(i, j) = tau * (a * ddx(uy, i, j) + b * ddy(uy, i, j) + ddy(p, i, j));
    }
  }
}

void divergence_into(ScalarField& out, const VectorField& v,
                     const GridSpec& g) {
#pragma omp parallel for schedule(static)
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out(i, j) = ddx(v.x(), i, j) + ddy(v.y(), i, j);
}

void momentum_rhs_into(MomentumRhs& out, const VectorField& u,
                       const ScalarField& p, const WField& w, double nu,
                       const GridSpec& g) {
  const int nx = g.nx;
  const double i2dx = 1.0 / (2.0 * g.dx);
  const double i2dy = 1.0 / (2.0 * g.dy);
  const double idx2 = 1.0 / (g.dx * g.dx);
  const double idy2 = 1.0 / (g.dy * g.dy);
  const double i4dxdy = 1.0 / (4.0 * g.dx * g.dy);

  const double* ux = u.x().data().data();
  const double* uy = u.y().data().data();
  const double* pp = p.data().data();
  const double* wx = w.x().data().data();
  const double* wy = w.y().data().data();
  double* ox = out.x().data().data();
  double* oy = out.y().data().data();

#pragma omp parallel for schedule(static)
  for (int j = 1; j < g.ny - 1; ++j) {
    for (int i = 1; i < nx - 1; ++i) {
      const int k = j * nx + i;
      const int e = k + 1, wv = k - 1, n = k + nx, s = k - nx;
      const int ne = n + 1, nw = n - 1, se = s + 1, sw = s - 1;

      // conservative convection
      const double conv_x = (ux[e] * ux[e] - ux[wv] * ux[wv]) * i2dx +
                            (uy[n] * ux[n] - uy[s] * ux[s]) * i2dy;
      const double conv_y = (ux[e] * uy[e] - ux[wv] * uy[wv]) * i2dx +
                            (uy[n] * uy[n] - uy[s] * uy[s]) * i2dy;

      const double dpdx = (pp[e] - pp[wv]) * i2dx;
      const double dpdy = (pp[n] - pp[s]) * i2dy;

      // viscous terms: 2 nu u_x,xx + nu (u_x,yy + u_y,xy) and the mirror set
      const double visc_x =
          2.0 * nu * (ux[e] - 2.0 * ux[k] + ux[wv]) * idx2 +
          nu * (ux[n] - 2.0 * ux[k] + ux[s]) * idy2 +
          nu * (uy[ne] - uy[nw] - uy[se] + uy[sw]) * i4dxdy;
      const double visc_y =
          nu * (ux[ne] - ux[nw] - ux[se] + ux[sw]) * i4dxdy +
          nu * (uy[e] - 2.0 * uy[k] + uy[wv]) * idx2 +
          2.0 * nu * (uy[n] - 2.0 * uy[k] + uy[s]) * idy2;

      // QHD cross fluxes
      const double qhd_x =
          2.0 * (ux[e] * wx[e] - ux[wv] * wx[wv]) * i2dx +
          (uy[n] * wx[n] - uy[s] * wx[s]) * i2dy +
          (ux[n] * wy[n] - ux[s] * wy[s]) * i2dy;
      const double qhd_y =
          (ux[e] * wy[e] - ux[wv] * wy[wv]) * i2dx +
          (uy[e] * wx[e] - uy[wv] * wx[wv]) * i2dx +
          2.0 * (uy[n] * wy[n] - uy[s] * wy[s]) * i2dy;

      ox[k] = -conv_x - dpdx + visc_x + qhd_x;
      oy[k] = -conv_y - dpdy + visc_y + qhd_y;
    }
  }
}

} // namespace detail

WField compute_w(const VectorField& u, const ScalarField& p, double tau,
                 const GridSpec& g) {
  require_same_grid(u.grid(), g, "compute_w");
  require_same_grid(p.grid(), g, "compute_w");
  if (!(tau >= 0.0)) throw std::invalid_argument("compute_w: tau must be >= 0");
  WField w(g);
  detail::compute_w_into(w, u, p, tau, g);
  return w;
}

MomentumRhs momentum_rhs(const VectorField& u, const ScalarField& p,
                         const WField& w, double nu, const GridSpec& g) {
  require_same_grid(u.grid(), g, "momentum_rhs");
  require_same_grid(p.grid(), g, "momentum_rhs");
  require_same_grid(w.grid(), g, "momentum_rhs");
  if (!(nu > 0.0)) throw std::invalid_argument("momentum_rhs: nu must be > 0");
  if (!u.all_finite() || !p.all_finite() || !w.all_finite())
    throw std::invalid_argument("momentum_rhs: non-finite input field");
  MomentumRhs out(g);
  detail::momentum_rhs_into(out, u, p, w, nu, g);
  return out;
}

ScalarField divergence(const VectorField& v, const GridSpec& g) {
  require_same_grid(v.grid(), g, "divergence");
  ScalarField out(g);
  detail::divergence_into(out, v, g);
  return out;
}

ScalarField dissipation(const VectorField& u, const WField& w, double nu,
                        double tau, const GridSpec& g) {
  require_same_grid(u.grid(), g, "dissipation");
  require_same_grid(w.grid(), g, "dissipation");
  if (!(tau > 0.0)) throw std::invalid_argument("dissipation: tau must be > 0");
  const double eta = nu; // rho = 1 in dimensionless form
  ScalarField out(g);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double dudx = detail::ddx(u.x(), i, j);
      const double dudy = detail::ddy(u.x(), i, j);
      const double dvdx = detail::ddx(u.y(), i, j);
      const double dvdy = detail::ddy(u.y(), i, j);
      const double pxx = 2.0 * eta * dudx;
      const double pyy = 2.0 * eta * dvdy;
      const double pxy = eta * (dudy + dvdx);
      const double contraction = pxx * pxx + pyy * pyy + 2.0 * pxy * pxy;
      const double wx = w.x()(i, j);
      const double wy = w.y()(i, j);
      out(i, j) = contraction / (2.0 * eta) + (wx * wx + wy * wy) / tau;
    }
  }
  return out;
}

} // namespace qhd
