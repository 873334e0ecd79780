#pragma once

#include "polyflow/grid.hpp"
#include "polyflow/operators.hpp"

namespace polyflow {

// Operators on the joint density ratio for a single-spring chain, stored
// flat with the configuration node innermost: index = cell * nq + qnode.
// All bilinear forms are graph Dirichlet forms, so symmetry, positive
// semidefiniteness and annihilation of constants hold exactly.

// <psi, phi> with cell measure times configuration weight
double psi_mass_form(const OmegaGrid& og, const ConfigGrid& cg, const Field& a,
                     const Field& b);
void psi_mass_apply(const OmegaGrid& og, const ConfigGrid& cg, const Field& psi,
                    Field& out);

// Maxwellian-weighted spatial diffusion (no-flux or periodic faces)
double psi_xdiff_form(const OmegaGrid& og, const ConfigGrid& cg, const Field& a,
                      const Field& b);
void psi_xdiff_apply(const OmegaGrid& og, const ConfigGrid& cg, const Field& psi,
                     Field& out);

// Maxwellian-weighted configuration diffusion over the polar edge graph
double psi_qdiff_form(const OmegaGrid& og, const ConfigGrid& cg, const Field& a,
                      const Field& b);
void psi_qdiff_apply(const OmegaGrid& og, const ConfigGrid& cg, const Field& psi,
                     Field& out);

// Jacobi diagonal of mass + dt_eps * xdiff + dt_qc * qdiff
void psi_system_diag(const OmegaGrid& og, const ConfigGrid& cg, double dt_eps,
                     double dt_qc, Field& diag);

// Drag functional: for each cell and configuration edge, the elastic flux
// sigma(x) q_e projected on the edge tangent, weighted by the cutoff edge
// coefficient of the lagged iterate. Adds the representer into out.
void psi_drag_rhs(const OmegaGrid& og, const ConfigGrid& cg, const VelGrad& sigma,
                  const Field& psi_lag, double L, double delta, Field& out);

// Transport functional over spatial faces with face-averaged velocity and the
// same cutoff edge coefficient. Adds the representer into out. When xi_bar_x
// and xi_bar_y are non-null they receive the configuration averages
// sum_q W_q xi_f(q) per face, which the momentum assembly reuses.
void psi_transport_rhs(const OmegaGrid& og, const ConfigGrid& cg, const Field& ux,
                       const Field& uy, const Field& psi_lag, double L,
                       double delta, Field& out, Field* xi_bar_x, Field* xi_bar_y);

// spatial marginal: varrho[c] = sum_q W_q psi[c,q]
void psi_marginal(const OmegaGrid& og, const ConfigGrid& cg, const Field& psi,
                  Field& varrho);

// graph Fisher information of sqrt(psi) (negative parts clamped to zero)
double psi_fisher_q(const OmegaGrid& og, const ConfigGrid& cg, const Field& psi);
double psi_fisher_x(const OmegaGrid& og, const ConfigGrid& cg, const Field& psi);

}  // namespace polyflow
