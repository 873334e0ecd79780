#pragma once

#include <vector>

#include "polyflow/grid.hpp"

namespace polyflow {

using Field = std::vector<double>;

// Ghost-cell policy at non-periodic boundaries. Zero suits fields constrained
// to vanish on boundary cells (velocities, test functions); Mirror suits
// fields with a natural no-flux boundary (densities).
enum class Ghost { Zero, Mirror };

// cell-measure-weighted inner product
double dot_cells(const OmegaGrid& g, const Field& a, const Field& b);

// Centered differences. With Ghost::Zero these are exactly skew-adjoint in
// the cell-weighted inner product, for periodic and walled grids alike.
void diff_x(const OmegaGrid& g, Ghost ghost, const Field& f, Field& out);
void diff_y(const OmegaGrid& g, Ghost ghost, const Field& f, Field& out);

bool on_boundary(const OmegaGrid& g, int i, int j);
// zeroes boundary cells on walled grids; no-op for periodic
void mask_boundary(const OmegaGrid& g, Field& f);

// velocity gradient, component (a,b) = d u_a / d x_b, zero ghosts
struct VelGrad {
    Field xx, xy, yx, yy;
    void resize(int n) {
        xx.assign(n, 0.0);
        xy.assign(n, 0.0);
        yx.assign(n, 0.0);
        yy.assign(n, 0.0);
    }
};
void velocity_gradient(const OmegaGrid& g, const Field& ux, const Field& uy,
                       VelGrad& out);

void div_centered(const OmegaGrid& g, const Field& ux, const Field& uy, Field& out);

// Viscous bilinear form: mu_s <D(u), D(w)> + c_b <div u, div w> with D the
// symmetric gradient. visc_apply returns its Riesz representer in the
// cell-weighted product (exact discrete adjoint of the difference stencils).
double visc_form(const OmegaGrid& g, double mu_s, double c_b, const Field& ux,
                 const Field& uy, const Field& wx, const Field& wy);
void visc_apply(const OmegaGrid& g, double mu_s, double c_b, const Field& ux,
                const Field& uy, Field& outx, Field& outy);

// Skew-symmetrized convection: (1/2) <rho (v.grad a), b> - (1/2) <rho (v.grad b), a>.
// skew_form(v, rho, u, u) vanishes identically by construction.
double skew_form(const OmegaGrid& g, const Field& rho, const Field& vx,
                 const Field& vy, const Field& ax, const Field& ay,
                 const Field& bx, const Field& by);
void skew_apply(const OmegaGrid& g, const Field& rho, const Field& vx,
                const Field& vy, const Field& ux, const Field& uy, Field& outx,
                Field& outy);

void grad_scalar(const OmegaGrid& g, Ghost ghost, const Field& f, Field& outx,
                 Field& outy);

// graph Dirichlet form of the scalar Laplacian (no-flux or periodic faces)
// and its representer: <lap_apply(f), g>_cells == lap_form(f, g)
double lap_form(const OmegaGrid& g, const Field& a, const Field& b);
void lap_apply(const OmegaGrid& g, const Field& f, Field& out);

// First-order upwind divergence of u*c with face velocity averaged from the
// adjacent cells; walled grids carry no boundary faces. Linear in c. The
// column sums vanish, so cell-weighted mass is conserved exactly.
void upwind_div_apply(const OmegaGrid& g, const Field& ux, const Field& uy,
                      const Field& c, Field& out);
void upwind_div_diag(const OmegaGrid& g, const Field& ux, const Field& uy,
                     Field& diag);

// max over cells of the absolute face divergence of u
double face_div_max(const OmegaGrid& g, const Field& ux, const Field& uy);

// Face enumeration shared by the transport and face-flux assemblies.
// x-faces join (i,j)-(i+1,j), index i*ny+j; walled grids drop the wrap faces.
int n_xfaces(const OmegaGrid& g);
int n_yfaces(const OmegaGrid& g);
void xface_cells(const OmegaGrid& g, int f, int& a, int& b);
void yface_cells(const OmegaGrid& g, int f, int& a, int& b);

// Adds to (outx,outy) the representer of w -> sum_f coeff_f * mean(w at face),
// with x-face coefficients acting on the x component and likewise for y.
void face_mean_rhs(const OmegaGrid& g, const Field& coeff_x, const Field& coeff_y,
                   Field& outx, Field& outy);

}  // namespace polyflow
