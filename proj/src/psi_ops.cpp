#include "polyflow/psi_ops.hpp"

#include <cmath>

#include "polyflow/errors.hpp"
#include "polyflow/regularization.hpp"

namespace polyflow {

namespace {

const SpringGrid& single_spring(const ConfigGrid& cg) {
    if (cg.chain.K != 1)
        throw AssemblyError("configuration-space operators support one spring only");
    return cg.spring[0];
}

}  // namespace

double psi_mass_form(const OmegaGrid& og, const ConfigGrid& cg, const Field& a,
                     const Field& b) {
    const SpringGrid& sg = single_spring(cg);
    const int nq = sg.nodes();
    double s = 0.0;
    for (int c = 0; c < og.cells(); ++c) {
        const int base = c * nq;
        double sc = 0.0;
        for (int q = 0; q < nq; ++q) sc += sg.w[q] * a[base + q] * b[base + q];
        s += sc;
    }
    return og.cell_w * s;
}

void psi_mass_apply(const OmegaGrid& og, const ConfigGrid& cg, const Field& psi,
                    Field& out) {
    const SpringGrid& sg = single_spring(cg);
    const int nq = sg.nodes();
    out.resize(psi.size());
    for (int c = 0; c < og.cells(); ++c) {
        const int base = c * nq;
        for (int q = 0; q < nq; ++q)
            out[base + q] = og.cell_w * sg.w[q] * psi[base + q];
    }
}

double psi_xdiff_form(const OmegaGrid& og, const ConfigGrid& cg, const Field& a,
                      const Field& b) {
    const SpringGrid& sg = single_spring(cg);
    const int nq = sg.nodes();
    const double gx = og.hy / og.hx, gy = og.hx / og.hy;
    double s = 0.0;
    int ca, cb;
    for (int f = 0; f < n_xfaces(og); ++f) {
        xface_cells(og, f, ca, cb);
        const int ba = ca * nq, bb = cb * nq;
        double sf = 0.0;
        for (int q = 0; q < nq; ++q)
            sf += sg.w[q] * (a[bb + q] - a[ba + q]) * (b[bb + q] - b[ba + q]);
        s += gx * sf;
    }
    for (int f = 0; f < n_yfaces(og); ++f) {
        yface_cells(og, f, ca, cb);
        const int ba = ca * nq, bb = cb * nq;
        double sf = 0.0;
        for (int q = 0; q < nq; ++q)
            sf += sg.w[q] * (a[bb + q] - a[ba + q]) * (b[bb + q] - b[ba + q]);
        s += gy * sf;
    }
    return s;
}

void psi_xdiff_apply(const OmegaGrid& og, const ConfigGrid& cg, const Field& psi,
                     Field& out) {
    const SpringGrid& sg = single_spring(cg);
    const int nq = sg.nodes();
    out.assign(psi.size(), 0.0);
    const double gx = og.hy / og.hx, gy = og.hx / og.hy;
    int ca, cb;
    for (int f = 0; f < n_xfaces(og); ++f) {
        xface_cells(og, f, ca, cb);
        const int ba = ca * nq, bb = cb * nq;
        for (int q = 0; q < nq; ++q) {
            const double d = gx * sg.w[q] * (psi[ba + q] - psi[bb + q]);
            out[ba + q] += d;
            out[bb + q] -= d;
        }
    }
    for (int f = 0; f < n_yfaces(og); ++f) {
        yface_cells(og, f, ca, cb);
        const int ba = ca * nq, bb = cb * nq;
        for (int q = 0; q < nq; ++q) {
            const double d = gy * sg.w[q] * (psi[ba + q] - psi[bb + q]);
            out[ba + q] += d;
            out[bb + q] -= d;
        }
    }
}

double psi_qdiff_form(const OmegaGrid& og, const ConfigGrid& cg, const Field& a,
                      const Field& b) {
    const SpringGrid& sg = single_spring(cg);
    const int nq = sg.nodes();
    double s = 0.0;
    for (int c = 0; c < og.cells(); ++c) {
        const int base = c * nq;
        double sc = 0.0;
        for (const QEdge& e : cg.edges)
            sc += e.cond * (a[base + e.b] - a[base + e.a]) *
                  (b[base + e.b] - b[base + e.a]);
        s += sc;
    }
    return og.cell_w * s;
}

void psi_qdiff_apply(const OmegaGrid& og, const ConfigGrid& cg, const Field& psi,
                     Field& out) {
    const SpringGrid& sg = single_spring(cg);
    const int nq = sg.nodes();
    out.assign(psi.size(), 0.0);
    for (int c = 0; c < og.cells(); ++c) {
        const int base = c * nq;
        for (const QEdge& e : cg.edges) {
            const double d =
                og.cell_w * e.cond * (psi[base + e.a] - psi[base + e.b]);
            out[base + e.a] += d;
            out[base + e.b] -= d;
        }
    }
}

void psi_system_diag(const OmegaGrid& og, const ConfigGrid& cg, double dt_eps,
                     double dt_qc, Field& diag) {
    const SpringGrid& sg = single_spring(cg);
    const int nq = sg.nodes();
    diag.assign(static_cast<size_t>(og.cells()) * nq, 0.0);
    // per-q-node degree of the configuration edge graph
    std::vector<double> qdeg(nq, 0.0);
    for (const QEdge& e : cg.edges) {
        qdeg[e.a] += e.cond;
        qdeg[e.b] += e.cond;
    }
    // per-cell face degree of the spatial graph
    Field xdeg(og.cells(), 0.0);
    const double gx = og.hy / og.hx, gy = og.hx / og.hy;
    int ca, cb;
    for (int f = 0; f < n_xfaces(og); ++f) {
        xface_cells(og, f, ca, cb);
        xdeg[ca] += gx;
        xdeg[cb] += gx;
    }
    for (int f = 0; f < n_yfaces(og); ++f) {
        yface_cells(og, f, ca, cb);
        xdeg[ca] += gy;
        xdeg[cb] += gy;
    }
    for (int c = 0; c < og.cells(); ++c) {
        const int base = c * nq;
        for (int q = 0; q < nq; ++q)
            diag[base + q] = og.cell_w * sg.w[q] + dt_eps * sg.w[q] * xdeg[c] +
                             dt_qc * og.cell_w * qdeg[q];
    }
}

void psi_drag_rhs(const OmegaGrid& og, const ConfigGrid& cg, const VelGrad& sigma,
                  const Field& psi_lag, double L, double delta, Field& out) {
    const SpringGrid& sg = single_spring(cg);
    const int nq = sg.nodes();
    for (int c = 0; c < og.cells(); ++c) {
        const int base = c * nq;
        const double sxx = sigma.xx[c], sxy = sigma.xy[c];
        const double syx = sigma.yx[c], syy = sigma.yy[c];
        for (const QEdge& e : cg.edges) {
            // (sigma q_e) . t_e
            const double vx = sxx * e.qex + sxy * e.qey;
            const double vy = syx * e.qex + syy * e.qey;
            const double vt = vx * e.tx + vy * e.ty;
            const double xi =
                cutoff_edge_mean(psi_lag[base + e.a], psi_lag[base + e.b], L, delta);
            const double d = og.cell_w * e.mcoef * vt * xi;
            out[base + e.b] += d;
            out[base + e.a] -= d;
        }
    }
}

void psi_transport_rhs(const OmegaGrid& og, const ConfigGrid& cg, const Field& ux,
                       const Field& uy, const Field& psi_lag, double L,
                       double delta, Field& out, Field* xi_bar_x, Field* xi_bar_y) {
    const SpringGrid& sg = single_spring(cg);
    const int nq = sg.nodes();
    if (xi_bar_x) xi_bar_x->assign(n_xfaces(og), 0.0);
    if (xi_bar_y) xi_bar_y->assign(n_yfaces(og), 0.0);
    int ca, cb;
    for (int f = 0; f < n_xfaces(og); ++f) {
        xface_cells(og, f, ca, cb);
        const int ba = ca * nq, bb = cb * nq;
        const double uf = 0.5 * (ux[ca] + ux[cb]);
        for (int q = 0; q < nq; ++q) {
            const double xi = cutoff_edge_mean(psi_lag[ba + q], psi_lag[bb + q], L, delta);
            if (xi_bar_x) (*xi_bar_x)[f] += sg.w[q] * xi;
            const double d = sg.w[q] * og.hy * uf * xi;
            out[bb + q] += d;
            out[ba + q] -= d;
        }
    }
    for (int f = 0; f < n_yfaces(og); ++f) {
        yface_cells(og, f, ca, cb);
        const int ba = ca * nq, bb = cb * nq;
        const double uf = 0.5 * (uy[ca] + uy[cb]);
        for (int q = 0; q < nq; ++q) {
            const double xi = cutoff_edge_mean(psi_lag[ba + q], psi_lag[bb + q], L, delta);
            if (xi_bar_y) (*xi_bar_y)[f] += sg.w[q] * xi;
            const double d = sg.w[q] * og.hx * uf * xi;
            out[bb + q] += d;
            out[ba + q] -= d;
        }
    }
}

void psi_marginal(const OmegaGrid& og, const ConfigGrid& cg, const Field& psi,
                  Field& varrho) {
    const SpringGrid& sg = single_spring(cg);
    const int nq = sg.nodes();
    varrho.assign(og.cells(), 0.0);
    for (int c = 0; c < og.cells(); ++c) {
        const int base = c * nq;
        double s = 0.0;
        for (int q = 0; q < nq; ++q) s += sg.w[q] * psi[base + q];
        varrho[c] = s;
    }
}

namespace {
inline double sqrt_pos(double v) { return v > 0.0 ? std::sqrt(v) : 0.0; }
}  // namespace

double psi_fisher_q(const OmegaGrid& og, const ConfigGrid& cg, const Field& psi) {
    const SpringGrid& sg = single_spring(cg);
    const int nq = sg.nodes();
    double s = 0.0;
    for (int c = 0; c < og.cells(); ++c) {
        const int base = c * nq;
        double sc = 0.0;
        for (const QEdge& e : cg.edges) {
            const double d = sqrt_pos(psi[base + e.b]) - sqrt_pos(psi[base + e.a]);
            sc += e.cond * d * d;
        }
        s += sc;
    }
    return og.cell_w * s;
}

double psi_fisher_x(const OmegaGrid& og, const ConfigGrid& cg, const Field& psi) {
    const SpringGrid& sg = single_spring(cg);
    const int nq = sg.nodes();
    const double gx = og.hy / og.hx, gy = og.hx / og.hy;
    double s = 0.0;
    int ca, cb;
    for (int f = 0; f < n_xfaces(og); ++f) {
        xface_cells(og, f, ca, cb);
        const int ba = ca * nq, bb = cb * nq;
        double sf = 0.0;
        for (int q = 0; q < nq; ++q) {
            const double d = sqrt_pos(psi[bb + q]) - sqrt_pos(psi[ba + q]);
            sf += sg.w[q] * d * d;
        }
        s += gx * sf;
    }
    for (int f = 0; f < n_yfaces(og); ++f) {
        yface_cells(og, f, ca, cb);
        const int ba = ca * nq, bb = cb * nq;
        double sf = 0.0;
        for (int q = 0; q < nq; ++q) {
            const double d = sqrt_pos(psi[bb + q]) - sqrt_pos(psi[ba + q]);
            sf += sg.w[q] * d * d;
        }
        s += gy * sf;
    }
    return s;
}

}  // namespace polyflow
