#include "polyflow/solvers.hpp"

#include <algorithm>
#include <cmath>

#include "polyflow/errors.hpp"
#include "polyflow/linsolve.hpp"
#include "polyflow/psi_ops.hpp"
#include "polyflow/regularization.hpp"

namespace polyflow {

namespace {

// One round of iterative refinement. The slab and configuration systems
// conserve their weighted masses exactly at the algebraic solution, so the
// conservation defect equals the linear residual sum; driving the residual
// a few orders below the solve tolerance keeps the mass identities at
// rounding level over long runs.
template <typename Solver>
void refine_once(const LinOp& op, const Field& rhs, Field& x,
                 const std::vector<double>* jacobi, Solver solver) {
    Field ax(rhs.size());
    op.apply(x, ax);
    Field r(rhs.size());
    double rn = 0.0;
    for (size_t i = 0; i < rhs.size(); ++i) {
        r[i] = rhs[i] - ax[i];
        rn += r[i] * r[i];
    }
    if (rn == 0.0) return;
    Field e(rhs.size(), 0.0);
    solver(op, r, e, jacobi, SolveOpts{1e-4, 0});
    for (size_t i = 0; i < x.size(); ++i) x[i] += e[i];
}

}  // namespace

void project_initial_density(const OmegaGrid& og, double alpha, const Field& rho_raw,
                             Field& rho0) {
    const int n = og.cells();
    LinOp op;
    op.n = n;
    op.apply = [&og, alpha](const Field& x, Field& out) {
        lap_apply(og, x, out);
        for (size_t c = 0; c < out.size(); ++c) out[c] = x[c] + alpha * out[c];
    };
    Field rhs = rho_raw;
    rho0 = rho_raw;
    solve_cg(op, rhs, rho0, nullptr, SolveOpts{3e-13, 0});
    refine_once(op, rhs, rho0, nullptr,
                [](const LinOp& o, const Field& b, Field& x,
                   const std::vector<double>* j, SolveOpts s) {
                    solve_cg(o, b, x, j, s);
                });
}

void project_initial_velocity(const OmegaGrid& og, const Field& rho0, double dt,
                              const Field& ux_raw, const Field& uy_raw, Field& ux0,
                              Field& uy0) {
    const int n = og.cells();
    // rho0 can vanish on cells; the dt gradient penalty keeps the operator
    // definite as long as the grid is connected, but guard the diagonal.
    Field diag(n);
    for (int c = 0; c < n; ++c) diag[c] = std::max(rho0[c], 1e-30) + dt;
    auto solve_component = [&](const Field& raw, Field& out) {
        LinOp op;
        op.n = n;
        op.apply = [&og, &rho0, dt](const Field& x, Field& o) {
            Field xm = x;
            mask_boundary(og, xm);
            lap_apply(og, xm, o);
            for (int c = 0; c < og.cells(); ++c) o[c] = rho0[c] * xm[c] + dt * o[c];
            mask_boundary(og, o);
            // keep constrained cells invertible
            if (og.bc == Bc::NoSlipNeumann)
                for (int i = 0; i < og.nx; ++i)
                    for (int j = 0; j < og.ny; ++j)
                        if (on_boundary(og, i, j)) o[og.idx(i, j)] = x[og.idx(i, j)];
        };
        Field rhs(n);
        for (int c = 0; c < n; ++c) rhs[c] = rho0[c] * raw[c];
        mask_boundary(og, rhs);
        out = raw;
        mask_boundary(og, out);
        solve_cg(op, rhs, out, &diag, SolveOpts{3e-13, 0});
        refine_once(op, rhs, out, &diag,
                    [](const LinOp& o, const Field& b, Field& x,
                       const std::vector<double>* j, SolveOpts s) {
                        solve_cg(o, b, x, j, s);
                    });
    };
    solve_component(ux_raw, ux0);
    solve_component(uy_raw, uy0);
}

void smooth_initial_psi(const OmegaGrid& og, const ConfigGrid& cg, double dt,
                        double L_cut, const Field& psi_raw, Field& psi0) {
    LinOp op;
    op.n = static_cast<int>(psi_raw.size());
    Field t1(psi_raw.size()), t2(psi_raw.size());
    op.apply = [&](const Field& x, Field& out) {
        psi_mass_apply(og, cg, x, out);
        psi_xdiff_apply(og, cg, x, t1);
        psi_qdiff_apply(og, cg, x, t2);
        for (size_t i = 0; i < out.size(); ++i) out[i] += dt * (t1[i] + t2[i]);
    };
    Field cut(psi_raw.size());
    for (size_t i = 0; i < cut.size(); ++i) cut[i] = cutoff_beta(psi_raw[i], L_cut);
    Field rhs;
    psi_mass_apply(og, cg, cut, rhs);
    Field diag;
    psi_system_diag(og, cg, dt, dt, diag);
    psi0 = cut;
    solve_cg(op, rhs, psi0, &diag, SolveOpts{3e-13, 0});
    refine_once(op, rhs, psi0, &diag,
                [](const LinOp& o, const Field& b, Field& x,
                   const std::vector<double>* j, SolveOpts s) {
                    solve_cg(o, b, x, j, s);
                });
}

SlabDensity continuity_slab(const OmegaGrid& og, const ModelParams& mp,
                            const Field& rho_prev, const Field& ux, const Field& uy,
                            double dt, int m_sub, double solver_rel_tol) {
    const int n = og.cells();
    const double dtau = dt / m_sub;
    SlabDensity slab;
    slab.rho_end = rho_prev;
    slab.face_px.assign(n_xfaces(og), 0.0);
    slab.face_py.assign(n_yfaces(og), 0.0);

    Field adv_diag;
    upwind_div_diag(og, ux, uy, adv_diag);
    // graph Laplacian diagonal: face degree over the cell measure
    Field lap_diag(n, 0.0);
    {
        const double gx = og.hy / og.hx / og.cell_w, gy = og.hx / og.hy / og.cell_w;
        int ca, cb;
        for (int f = 0; f < n_xfaces(og); ++f) {
            xface_cells(og, f, ca, cb);
            lap_diag[ca] += gx;
            lap_diag[cb] += gx;
        }
        for (int f = 0; f < n_yfaces(og); ++f) {
            yface_cells(og, f, ca, cb);
            lap_diag[ca] += gy;
            lap_diag[cb] += gy;
        }
    }
    Field diag(n);
    for (int c = 0; c < n; ++c)
        diag[c] = 1.0 + dtau * (adv_diag[c] + mp.alpha * lap_diag[c]);

    LinOp op;
    op.n = n;
    Field t1(n), t2(n);
    op.apply = [&](const Field& x, Field& out) {
        upwind_div_apply(og, ux, uy, x, t1);
        lap_apply(og, x, t2);
        out.resize(n);
        for (int c = 0; c < n; ++c)
            out[c] = x[c] + dtau * (t1[c] + mp.alpha * t2[c]);
    };

    Field rho = rho_prev, pp(n), r2(n), rg(n);
    const double half_gamma = 0.5 * mp.Gamma;
    for (int s = 0; s < m_sub; ++s) {
        const Field rhs = rho;
        SolveStats st = solve_bicgstab(op, rhs, rho, &diag, {solver_rel_tol, 0});
        slab.max_iters = std::max(slab.max_iters, st.iters);
        refine_once(op, rhs, rho, &diag,
                    [](const LinOp& o, const Field& b, Field& x,
                       const std::vector<double>* j, SolveOpts so) {
                        solve_bicgstab(o, b, x, j, so);
                    });

        for (int c = 0; c < n; ++c) {
            pp[c] = pressure_primitive_deriv(std::max(rho[c], 0.0), mp);
            const double r0 = std::max(rho[c], 0.0);
            r2[c] = r0 * r0;
            rg[c] = std::pow(r0, half_gamma);
        }
        int ca, cb;
        for (int f = 0; f < n_xfaces(og); ++f) {
            xface_cells(og, f, ca, cb);
            slab.face_px[f] +=
                0.5 * (rho[ca] + rho[cb]) * (pp[cb] - pp[ca]) / m_sub;
        }
        for (int f = 0; f < n_yfaces(og); ++f) {
            yface_cells(og, f, ca, cb);
            slab.face_py[f] +=
                0.5 * (rho[ca] + rho[cb]) * (pp[cb] - pp[ca]) / m_sub;
        }
        slab.diss_quartic += dtau * lap_form(og, r2, r2);
        slab.diss_gamma += dtau * lap_form(og, rg, rg);
    }
    slab.rho_end = rho;
    return slab;
}

void momentum_rhs(const OmegaGrid& og, const ModelParams& mp, const MomentumInput& in,
                  Field& rx, Field& ry) {
    const int n = og.cells();
    rx.assign(n, 0.0);
    ry.assign(n, 0.0);
    const double dt = in.dt;

    // inertia of the previous state and the body force
    for (int c = 0; c < n; ++c) {
        rx[c] = (*in.rho_prev)[c] * (*in.ux_prev)[c];
        ry[c] = (*in.rho_prev)[c] * (*in.uy_prev)[c];
    }
    if (in.fx) {
        for (int c = 0; c < n; ++c) {
            rx[c] += dt * (*in.rho_new)[c] * (*in.fx)[c];
            ry[c] += dt * (*in.rho_new)[c] * (*in.fy)[c];
        }
    }

    // elastic stress: divergence of the graph tensor (adjoint of the
    // zero-ghost gradient, so the pairing with any test velocity matches the
    // drag functional exactly)
    if (in.stress_graph) {
        Field t1, t2;
        const double kdt = mp.k_temp * dt;
        diff_x(og, Ghost::Zero, in.stress_graph->xx, t1);
        diff_y(og, Ghost::Zero, in.stress_graph->xy, t2);
        for (int c = 0; c < n; ++c) rx[c] += kdt * (t1[c] + t2[c]);
        diff_x(og, Ghost::Zero, in.stress_graph->yx, t1);
        diff_y(og, Ghost::Zero, in.stress_graph->yy, t2);
        for (int c = 0; c < n; ++c) ry[c] += kdt * (t1[c] + t2[c]);
    }

    // face-flux terms: pressure, number-density gradient (one per spring plus
    // one from transport), and the quadratic interaction
    Field cfx(n_xfaces(og), 0.0), cfy(n_yfaces(og), 0.0);
    int ca, cb;
    for (int f = 0; f < n_xfaces(og); ++f) {
        xface_cells(og, f, ca, cb);
        double cf = 0.0;
        if (in.face_px) cf -= dt * (*in.face_px)[f];
        if (in.varrho) {
            const double dvr = (*in.varrho)[cb] - (*in.varrho)[ca];
            cf -= dt * mp.k_temp * dvr;
            if (in.xi_bar_x) cf -= 2.0 * dt * mp.z_int * dvr * (*in.xi_bar_x)[f];
        }
        cfx[f] = cf * og.hy;
    }
    for (int f = 0; f < n_yfaces(og); ++f) {
        yface_cells(og, f, ca, cb);
        double cf = 0.0;
        if (in.face_py) cf -= dt * (*in.face_py)[f];
        if (in.varrho) {
            const double dvr = (*in.varrho)[cb] - (*in.varrho)[ca];
            cf -= dt * mp.k_temp * dvr;
            if (in.xi_bar_y) cf -= 2.0 * dt * mp.z_int * dvr * (*in.xi_bar_y)[f];
        }
        cfy[f] = cf * og.hx;
    }
    face_mean_rhs(og, cfx, cfy, rx, ry);

    mask_boundary(og, rx);
    mask_boundary(og, ry);
}

MomentumResult momentum_solve(const OmegaGrid& og, const ModelParams& mp,
                              const MomentumInput& in, const Field& ux_guess,
                              const Field& uy_guess, double solver_rel_tol) {
    const int n = og.cells();
    const double dt = in.dt;
    const double c_b = mp.mu_b - 0.5 * mp.mu_s;

    Field rx, ry;
    momentum_rhs(og, mp, in, rx, ry);
    Field rhs(2 * n);
    for (int c = 0; c < n; ++c) {
        rhs[c] = rx[c];
        rhs[n + c] = ry[c];
    }

    Field mass(n);
    for (int c = 0; c < n; ++c)
        mass[c] = 0.5 * ((*in.rho_new)[c] + (*in.rho_prev)[c]);

    LinOp op;
    op.n = 2 * n;
    Field ux(n), uy(n), vx(n), vy(n), sx(n), sy(n);
    op.apply = [&](const Field& x, Field& out) {
        for (int c = 0; c < n; ++c) {
            ux[c] = x[c];
            uy[c] = x[n + c];
        }
        mask_boundary(og, ux);
        mask_boundary(og, uy);
        visc_apply(og, mp.mu_s, c_b, ux, uy, vx, vy);
        skew_apply(og, *in.rho_prev, *in.ux_prev, *in.uy_prev, ux, uy, sx, sy);
        out.resize(2 * n);
        for (int c = 0; c < n; ++c) {
            out[c] = mass[c] * ux[c] + dt * (vx[c] + sx[c]);
            out[n + c] = mass[c] * uy[c] + dt * (vy[c] + sy[c]);
        }
        if (og.bc == Bc::NoSlipNeumann) {
            for (int i = 0; i < og.nx; ++i)
                for (int j = 0; j < og.ny; ++j)
                    if (on_boundary(og, i, j)) {
                        out[og.idx(i, j)] = x[og.idx(i, j)];
                        out[n + og.idx(i, j)] = x[n + og.idx(i, j)];
                    }
        }
    };

    Field diag(2 * n);
    const double vd = 2.0 * (mp.mu_s + std::max(c_b, 0.0)) *
                      (1.0 / (og.hx * og.hx) + 1.0 / (og.hy * og.hy));
    for (int c = 0; c < n; ++c) {
        diag[c] = mass[c] + dt * vd;
        diag[n + c] = mass[c] + dt * vd;
    }

    Field x(2 * n);
    Field gx = ux_guess, gy = uy_guess;
    mask_boundary(og, gx);
    mask_boundary(og, gy);
    for (int c = 0; c < n; ++c) {
        x[c] = gx[c];
        x[n + c] = gy[c];
    }
    SolveStats st = solve_bicgstab(op, rhs, x, &diag, {solver_rel_tol, 0});

    MomentumResult res;
    res.ux.assign(n, 0.0);
    res.uy.assign(n, 0.0);
    for (int c = 0; c < n; ++c) {
        res.ux[c] = x[c];
        res.uy[c] = x[n + c];
    }
    mask_boundary(og, res.ux);
    mask_boundary(og, res.uy);
    res.iters = st.iters;
    return res;
}

FokkerPlanckResult fokker_planck_solve(const OmegaGrid& og, const ConfigGrid& cg,
                                       const ModelParams& mp, const Field& psi_prev,
                                       const Field& ux, const Field& uy,
                                       const Field& psi_lag, double dt,
                                       const Field& psi_guess,
                                       double solver_rel_tol) {
    if (cg.chain.K != 1)
        throw AssemblyError("Fokker-Planck solve supports one spring only");
    const double qc = cg.chain.rouse[0] / (4.0 * mp.lambda);

    Field rhs;
    psi_mass_apply(og, cg, psi_prev, rhs);

    VelGrad sigma;
    velocity_gradient(og, ux, uy, sigma);
    Field forcing(psi_prev.size(), 0.0);
    psi_drag_rhs(og, cg, sigma, psi_lag, mp.L_cut, mp.delta, forcing);
    FokkerPlanckResult res;
    psi_transport_rhs(og, cg, ux, uy, psi_lag, mp.L_cut, mp.delta, forcing,
                      &res.xi_bar_x, &res.xi_bar_y);
    for (size_t i = 0; i < rhs.size(); ++i) rhs[i] += dt * forcing[i];

    LinOp op;
    op.n = static_cast<int>(psi_prev.size());
    Field t1(psi_prev.size()), t2(psi_prev.size());
    op.apply = [&](const Field& xv, Field& out) {
        psi_mass_apply(og, cg, xv, out);
        psi_xdiff_apply(og, cg, xv, t1);
        psi_qdiff_apply(og, cg, xv, t2);
        for (size_t i = 0; i < out.size(); ++i)
            out[i] += dt * (mp.eps * t1[i] + qc * t2[i]);
    };
    Field diag;
    psi_system_diag(og, cg, dt * mp.eps, dt * qc, diag);

    res.psi = psi_guess;
    SolveStats st = solve_cg(op, rhs, res.psi, &diag, {solver_rel_tol, 0});
    refine_once(op, rhs, res.psi, &diag,
                [](const LinOp& o, const Field& b, Field& x,
                   const std::vector<double>* j, SolveOpts so) {
                    solve_cg(o, b, x, j, so);
                });
    res.iters = st.iters;
    return res;
}

}  // namespace polyflow
