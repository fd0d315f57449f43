#pragma once

#include "qhd/grid.hpp"

namespace qhd {

/// Time-derivative contributions of the momentum equations (everything but
/// du/dt moved to the right side). Boundary nodes are left at zero; their
/// values come from the boundary conditions, not from this operator.
using MomentumRhs = VectorField;

/// w = tau * ((u . grad) u + grad p), central differences at interior nodes
/// and second-order one-sided differences on the boundary.
WField compute_w(const VectorField& u, const ScalarField& p, double tau,
                 const GridSpec& g);

/// Conservative-form QHD momentum right-hand side at interior nodes:
/// convection, pressure gradient, viscous terms and the w cross fluxes.
MomentumRhs momentum_rhs(const VectorField& u, const ScalarField& p,
                         const WField& w, double nu, const GridSpec& g);

/// d(v_x)/dx + d(v_y)/dy at every node (one-sided on the boundary).
ScalarField divergence(const VectorField& v, const GridSpec& g);

/// Pointwise dissipative function: (Pi:Pi)/(2 eta) + |w|^2/tau with
/// Pi = eta (grad u + grad u^T). Non-negative by construction.
ScalarField dissipation(const VectorField& u, const WField& w, double nu,
                        double tau, const GridSpec& g);

namespace detail {
// Reusable-buffer variants for the time-stepping loop.
void compute_w_into(WField& w, const VectorField& u, const ScalarField& p,
                    double tau, const GridSpec& g);
void momentum_rhs_into(MomentumRhs& out, const VectorField& u,
                       const ScalarField& p, const WField& w, double nu,
                       const GridSpec& g);
void divergence_into(ScalarField& out, const VectorField& v,
                     const GridSpec& g);

// Second-order first derivatives, one-sided at the boundary nodes.
double ddx(const ScalarField& f, int i, int j);
double ddy(const ScalarField& f, int i, int j);
} // namespace detail

} // namespace qhd
