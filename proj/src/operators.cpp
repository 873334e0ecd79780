#include "polyflow/operators.hpp"

#include <cmath>

namespace polyflow {

namespace {

inline int wrap(int i, int n) { return (i + n) % n; }

// neighbor value honoring the ghost policy; (i,j) may sit outside the grid
inline double at(const OmegaGrid& g, Ghost ghost, const Field& f, int i, int j,
                 int ii, int jj) {
    if (g.bc == Bc::Periodic) return f[g.idx(wrap(ii, g.nx), wrap(jj, g.ny))];
    if (ii < 0 || ii >= g.nx || jj < 0 || jj >= g.ny)
        return ghost == Ghost::Zero ? 0.0 : f[g.idx(i, j)];
    return f[g.idx(ii, jj)];
}

}  // namespace

double dot_cells(const OmegaGrid& g, const Field& a, const Field& b) {
    double s = 0.0;
    for (int c = 0; c < g.cells(); ++c) s += a[c] * b[c];
    return g.cell_w * s;
}

void diff_x(const OmegaGrid& g, Ghost ghost, const Field& f, Field& out) {
    out.resize(f.size());
    const double inv = 1.0 / (2.0 * g.hx);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            out[g.idx(i, j)] =
                inv * (at(g, ghost, f, i, j, i + 1, j) - at(g, ghost, f, i, j, i - 1, j));
}

void diff_y(const OmegaGrid& g, Ghost ghost, const Field& f, Field& out) {
    out.resize(f.size());
    const double inv = 1.0 / (2.0 * g.hy);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            out[g.idx(i, j)] =
                inv * (at(g, ghost, f, i, j, i, j + 1) - at(g, ghost, f, i, j, i, j - 1));
}

bool on_boundary(const OmegaGrid& g, int i, int j) {
    if (g.bc == Bc::Periodic) return false;
    return i == 0 || i == g.nx - 1 || j == 0 || j == g.ny - 1;
}

void mask_boundary(const OmegaGrid& g, Field& f) {
    if (g.bc == Bc::Periodic) return;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            if (on_boundary(g, i, j)) f[g.idx(i, j)] = 0.0;
}

void velocity_gradient(const OmegaGrid& g, const Field& ux, const Field& uy,
                       VelGrad& out) {
    diff_x(g, Ghost::Zero, ux, out.xx);
    diff_y(g, Ghost::Zero, ux, out.xy);
    diff_x(g, Ghost::Zero, uy, out.yx);
    diff_y(g, Ghost::Zero, uy, out.yy);
}

void div_centered(const OmegaGrid& g, const Field& ux, const Field& uy, Field& out) {
    Field t;
    diff_x(g, Ghost::Zero, ux, out);
    diff_y(g, Ghost::Zero, uy, t);
    for (size_t c = 0; c < out.size(); ++c) out[c] += t[c];
}

double visc_form(const OmegaGrid& g, double mu_s, double c_b, const Field& ux,
                 const Field& uy, const Field& wx, const Field& wy) {
    VelGrad du, dw;
    velocity_gradient(g, ux, uy, du);
    velocity_gradient(g, wx, wy, dw);
    double s = 0.0;
    for (int c = 0; c < g.cells(); ++c) {
        const double d11u = du.xx[c], d22u = du.yy[c];
        const double d12u = 0.5 * (du.xy[c] + du.yx[c]);
        const double d11w = dw.xx[c], d22w = dw.yy[c];
        const double d12w = 0.5 * (dw.xy[c] + dw.yx[c]);
        const double divu = d11u + d22u, divw = d11w + d22w;
        s += mu_s * (d11u * d11w + d22u * d22w + 2.0 * d12u * d12w) +
             c_b * divu * divw;
    }
    return g.cell_w * s;
}

void visc_apply(const OmegaGrid& g, double mu_s, double c_b, const Field& ux,
                const Field& uy, Field& outx, Field& outy) {
    const int n = g.cells();
    VelGrad du;
    velocity_gradient(g, ux, uy, du);
    Field sxx(n), sxy(n), syy(n), t1, t2;
    for (int c = 0; c < n; ++c) {
        const double divu = du.xx[c] + du.yy[c];
        const double d12 = 0.5 * (du.xy[c] + du.yx[c]);
        sxx[c] = mu_s * du.xx[c] + c_b * divu;
        syy[c] = mu_s * du.yy[c] + c_b * divu;
        sxy[c] = mu_s * d12;
    }
    diff_x(g, Ghost::Zero, sxx, t1);
    diff_y(g, Ghost::Zero, sxy, t2);
    outx.resize(n);
    for (int c = 0; c < n; ++c) outx[c] = -(t1[c] + t2[c]);
    diff_x(g, Ghost::Zero, sxy, t1);
    diff_y(g, Ghost::Zero, syy, t2);
    outy.resize(n);
    for (int c = 0; c < n; ++c) outy[c] = -(t1[c] + t2[c]);
    mask_boundary(g, outx);
    mask_boundary(g, outy);
}

double skew_form(const OmegaGrid& g, const Field& rho, const Field& vx,
                 const Field& vy, const Field& ax, const Field& ay,
                 const Field& bx, const Field& by) {
    VelGrad da, db;
    velocity_gradient(g, ax, ay, da);
    velocity_gradient(g, bx, by, db);
    double s = 0.0;
    for (int c = 0; c < g.cells(); ++c) {
        const double cax = vx[c] * da.xx[c] + vy[c] * da.xy[c];
        const double cay = vx[c] * da.yx[c] + vy[c] * da.yy[c];
        const double cbx = vx[c] * db.xx[c] + vy[c] * db.xy[c];
        const double cby = vx[c] * db.yx[c] + vy[c] * db.yy[c];
        // grouped so identical a and b cancel bitwise, component by component
        s += rho[c] * ((cax * bx[c] - cbx * ax[c]) + (cay * by[c] - cby * ay[c]));
    }
    return 0.5 * g.cell_w * s;
}

void skew_apply(const OmegaGrid& g, const Field& rho, const Field& vx,
                const Field& vy, const Field& ux, const Field& uy, Field& outx,
                Field& outy) {
    const int n = g.cells();
    VelGrad du;
    velocity_gradient(g, ux, uy, du);
    Field gx(n), gy(n), t1, t2;
    outx.assign(n, 0.0);
    outy.assign(n, 0.0);
    // first half: (1/2) rho (v.grad u)
    for (int c = 0; c < n; ++c) {
        outx[c] = 0.5 * rho[c] * (vx[c] * du.xx[c] + vy[c] * du.xy[c]);
        outy[c] = 0.5 * rho[c] * (vx[c] * du.yx[c] + vy[c] * du.yy[c]);
    }
    // second half: adjoint of -(1/2) <rho (v.grad w), u> is +(1/2) div(rho v u)
    for (int c = 0; c < n; ++c) {
        gx[c] = rho[c] * vx[c] * ux[c];
        gy[c] = rho[c] * vy[c] * ux[c];
    }
    diff_x(g, Ghost::Zero, gx, t1);
    diff_y(g, Ghost::Zero, gy, t2);
    for (int c = 0; c < n; ++c) outx[c] += 0.5 * (t1[c] + t2[c]);
    for (int c = 0; c < n; ++c) {
        gx[c] = rho[c] * vx[c] * uy[c];
        gy[c] = rho[c] * vy[c] * uy[c];
    }
    diff_x(g, Ghost::Zero, gx, t1);
    diff_y(g, Ghost::Zero, gy, t2);
    for (int c = 0; c < n; ++c) outy[c] += 0.5 * (t1[c] + t2[c]);
    mask_boundary(g, outx);
    mask_boundary(g, outy);
}

void grad_scalar(const OmegaGrid& g, Ghost ghost, const Field& f, Field& outx,
                 Field& outy) {
    diff_x(g, ghost, f, outx);
    diff_y(g, ghost, f, outy);
}

int n_xfaces(const OmegaGrid& g) {
    return (g.bc == Bc::Periodic ? g.nx : g.nx - 1) * g.ny;
}

int n_yfaces(const OmegaGrid& g) {
    return g.nx * (g.bc == Bc::Periodic ? g.ny : g.ny - 1);
}

void xface_cells(const OmegaGrid& g, int f, int& a, int& b) {
    const int i = f / g.ny, j = f % g.ny;
    a = g.idx(i, j);
    b = g.idx(wrap(i + 1, g.nx), j);
}

void yface_cells(const OmegaGrid& g, int f, int& a, int& b) {
    const int nyf = (g.bc == Bc::Periodic ? g.ny : g.ny - 1);
    const int i = f / nyf, j = f % nyf;
    a = g.idx(i, j);
    b = g.idx(i, wrap(j + 1, g.ny));
}

double lap_form(const OmegaGrid& g, const Field& a, const Field& b) {
    double s = 0.0;
    const double gx = g.hy / g.hx, gy = g.hx / g.hy;
    int ca, cb;
    for (int f = 0; f < n_xfaces(g); ++f) {
        xface_cells(g, f, ca, cb);
        s += gx * (a[cb] - a[ca]) * (b[cb] - b[ca]);
    }
    for (int f = 0; f < n_yfaces(g); ++f) {
        yface_cells(g, f, ca, cb);
        s += gy * (a[cb] - a[ca]) * (b[cb] - b[ca]);
    }
    return s;
}

void lap_apply(const OmegaGrid& g, const Field& f, Field& out) {
    out.assign(g.cells(), 0.0);
    const double gx = g.hy / g.hx / g.cell_w, gy = g.hx / g.hy / g.cell_w;
    int ca, cb;
    for (int k = 0; k < n_xfaces(g); ++k) {
        xface_cells(g, k, ca, cb);
        const double d = gx * (f[ca] - f[cb]);
        out[ca] += d;
        out[cb] -= d;
    }
    for (int k = 0; k < n_yfaces(g); ++k) {
        yface_cells(g, k, ca, cb);
        const double d = gy * (f[ca] - f[cb]);
        out[ca] += d;
        out[cb] -= d;
    }
}

void upwind_div_apply(const OmegaGrid& g, const Field& ux, const Field& uy,
                      const Field& c, Field& out) {
    out.assign(g.cells(), 0.0);
    const double sx = g.hy / g.cell_w, sy = g.hx / g.cell_w;
    int ca, cb;
    for (int f = 0; f < n_xfaces(g); ++f) {
        xface_cells(g, f, ca, cb);
        const double uf = 0.5 * (ux[ca] + ux[cb]);
        const double flux = uf * (uf > 0.0 ? c[ca] : c[cb]) * sx;
        out[ca] += flux;
        out[cb] -= flux;
    }
    for (int f = 0; f < n_yfaces(g); ++f) {
        yface_cells(g, f, ca, cb);
        const double uf = 0.5 * (uy[ca] + uy[cb]);
        const double flux = uf * (uf > 0.0 ? c[ca] : c[cb]) * sy;
        out[ca] += flux;
        out[cb] -= flux;
    }
}

void upwind_div_diag(const OmegaGrid& g, const Field& ux, const Field& uy,
                     Field& diag) {
    diag.assign(g.cells(), 0.0);
    const double sx = g.hy / g.cell_w, sy = g.hx / g.cell_w;
    int ca, cb;
    for (int f = 0; f < n_xfaces(g); ++f) {
        xface_cells(g, f, ca, cb);
        const double uf = 0.5 * (ux[ca] + ux[cb]);
        if (uf > 0.0)
            diag[ca] += uf * sx;
        else
            diag[cb] -= uf * sx;
    }
    for (int f = 0; f < n_yfaces(g); ++f) {
        yface_cells(g, f, ca, cb);
        const double uf = 0.5 * (uy[ca] + uy[cb]);
        if (uf > 0.0)
            diag[ca] += uf * sy;
        else
            diag[cb] -= uf * sy;
    }
}

double face_div_max(const OmegaGrid& g, const Field& ux, const Field& uy) {
    Field acc(g.cells(), 0.0);
    const double sx = g.hy / g.cell_w, sy = g.hx / g.cell_w;
    int ca, cb;
    for (int f = 0; f < n_xfaces(g); ++f) {
        xface_cells(g, f, ca, cb);
        const double uf = 0.5 * (ux[ca] + ux[cb]);
        acc[ca] += uf * sx;
        acc[cb] -= uf * sx;
    }
    for (int f = 0; f < n_yfaces(g); ++f) {
        yface_cells(g, f, ca, cb);
        const double uf = 0.5 * (uy[ca] + uy[cb]);
        acc[ca] += uf * sy;
        acc[cb] -= uf * sy;
    }
    double m = 0.0;
    for (double v : acc) m = std::max(m, std::abs(v));
    return m;
}

void face_mean_rhs(const OmegaGrid& g, const Field& coeff_x, const Field& coeff_y,
                   Field& outx, Field& outy) {
    const double inv = 0.5 / g.cell_w;
    int ca, cb;
    for (int f = 0; f < n_xfaces(g); ++f) {
        xface_cells(g, f, ca, cb);
        outx[ca] += coeff_x[f] * inv;
        outx[cb] += coeff_x[f] * inv;
    }
    for (int f = 0; f < n_yfaces(g); ++f) {
        yface_cells(g, f, ca, cb);
        outy[ca] += coeff_y[f] * inv;
        outy[cb] += coeff_y[f] * inv;
    }
}

}  // namespace polyflow
