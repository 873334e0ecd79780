#pragma once

#include "polyflow/grid.hpp"
#include "polyflow/model.hpp"
#include "polyflow/operators.hpp"

namespace polyflow {

// Initial-data mollifications. Each solves a small elliptic system whose
// weak form preserves the mean of the data exactly and whose energy is
// bounded by the energy of the raw data.

// (I + alpha * Laplacian penalty) projection of the starting density
void project_initial_density(const OmegaGrid& og, double alpha, const Field& rho_raw,
                             Field& rho0);

// mass-weighted projection of the starting velocity with dt gradient penalty
void project_initial_velocity(const OmegaGrid& og, const Field& rho0, double dt,
                              const Field& ux_raw, const Field& uy_raw, Field& ux0,
                              Field& uy0);

// configuration-density smoothing: mass + dt (spatial + configuration)
// diffusion applied to the cutoff of the raw ratio
void smooth_initial_psi(const OmegaGrid& og, const ConfigGrid& cg, double dt,
                        double L_cut, const Field& psi_raw, Field& psi0);

// One transport slab: m_sub implicit upwind substeps of the regularized
// continuity equation at the current velocity iterate. Besides the final
// density it carries the face-flux pressure averages the momentum assembly
// pairs with, and the slab dissipation integrals of the augmented pressure.
struct SlabDensity {
    Field rho_end;
    Field face_px, face_py;      // (1/m) sum_s mean(rho_s) * diff(P'(rho_s)) per face
    double diss_quartic = 0.0;   // sum_s dtau * |grad rho_s^2|^2 (graph form)
    double diss_gamma = 0.0;     // sum_s dtau * |grad rho_s^(Gamma/2)|^2
    int max_iters = 0;           // worst substep solve
};

SlabDensity continuity_slab(const OmegaGrid& og, const ModelParams& mp,
                            const Field& rho_prev, const Field& ux, const Field& uy,
                            double dt, int m_sub, double solver_rel_tol);

// Momentum update. All elastic, interaction and pressure forcings enter as
// precomputed RHS pieces so that the same assembly feeds the energy ledger.
struct MomentumInput {
    const Field* rho_new = nullptr;   // slab end density
    const Field* rho_prev = nullptr;
    const Field* ux_prev = nullptr;
    const Field* uy_prev = nullptr;
    const Field* fx = nullptr;        // body force (may be null for none)
    const Field* fy = nullptr;
    const VelGrad* stress_graph = nullptr;  // elastic stress tensor G
    const Field* varrho = nullptr;          // number density of current psi
    const Field* xi_bar_x = nullptr;        // cutoff face means (interaction term)
    const Field* xi_bar_y = nullptr;
    const Field* face_px = nullptr;         // slab pressure face averages
    const Field* face_py = nullptr;
    double dt = 0.0;
};

struct MomentumResult {
    Field ux, uy;
    int iters = 0;
};

MomentumResult momentum_solve(const OmegaGrid& og, const ModelParams& mp,
                              const MomentumInput& in, const Field& ux_guess,
                              const Field& uy_guess, double solver_rel_tol);

// builds the momentum RHS representer (shared with the ledger)
void momentum_rhs(const OmegaGrid& og, const ModelParams& mp, const MomentumInput& in,
                  Field& rx, Field& ry);

// Fokker-Planck update: implicit mass + diffusion against explicit drag and
// transport evaluated at the lagged cutoff. Symmetric positive definite.
struct FokkerPlanckResult {
    Field psi;
    Field xi_bar_x, xi_bar_y;  // face cutoff means reused by the momentum step
    int iters = 0;
};

FokkerPlanckResult fokker_planck_solve(const OmegaGrid& og, const ConfigGrid& cg,
                                       const ModelParams& mp, const Field& psi_prev,
                                       const Field& ux, const Field& uy,
                                       const Field& psi_lag, double dt,
                                       const Field& psi_guess,
                                       double solver_rel_tol);

}  // namespace polyflow
