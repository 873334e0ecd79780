#include "polyflow/grid.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "polyflow/errors.hpp"
#include "polyflow/quadrature.hpp"

namespace polyflow {

OmegaGrid make_omega_grid(int nx, int ny, double lx, double ly, Bc bc) {
    std::vector<std::string> bad;
    if (nx < 4) bad.push_back("grid.nx must be at least 4");
    if (ny < 4) bad.push_back("grid.ny must be at least 4");
    if (!(lx > 0.0)) bad.push_back("grid.lx must be positive");
    if (!(ly > 0.0)) bad.push_back("grid.ly must be positive");
    if (!bad.empty()) throw ValidationError(bad);
    OmegaGrid g;
    g.nx = nx;
    g.ny = ny;
    g.lx = lx;
    g.ly = ly;
    g.bc = bc;
    g.hx = lx / nx;
    g.hy = ly / ny;
    g.cell_w = g.hx * g.hy;
    return g;
}

namespace {

// single-spring Maxwellian log value at radius r
double log_m_of_r(double r, double b, double theta, double log_z) {
    const double t = (r * r) / b;
    if (t >= 1.0) return -std::numeric_limits<double>::infinity();
    return theta * std::log1p(-t) - log_z;
}

SpringGrid build_spring_grid(const SpringChain& chain, int i, int n_r, int n_th) {
    SpringGrid g;
    g.n_r = n_r;
    g.n_th = n_th;
    g.b = chain.b[i];
    g.theta = chain.theta[i];
    const double z = chain.z[i];
    const double log_z = std::log(z);

    const auto rule = quad::gauss_jacobi01(n_r, g.theta - 1.0);
    g.t.resize(n_r);
    g.r.resize(n_r);
    g.gauss_w.resize(n_r);
    for (int j = 0; j < n_r; ++j) {
        g.t[j] = rule.node[j];
        g.r[j] = std::sqrt(g.b * g.t[j]);
        g.gauss_w[j] = rule.weight[j];
    }
    g.dth = 2.0 * std::acos(-1.0) / n_th;
    g.th.resize(n_th);
    for (int mm = 0; mm < n_th; ++mm) g.th[mm] = (mm + 0.5) * g.dth;

    const int nn = g.nodes();
    g.qx.resize(nn);
    g.qy.resize(nn);
    g.w.resize(nn);
    g.m.resize(nn);
    g.log_m.resize(nn);
    g.uprime.resize(nn);

    // The Lebesgue measure in the Gauss variable is (b/2) dt dth; dividing the
    // node weight by the Gauss weight function (1-t)^(theta-1) and multiplying
    // by the Maxwellian z^-1 (1-t)^theta leaves a single (1-t)/z factor.
    double raw = 0.0;
    for (int j = 0; j < n_r; ++j) {
        const double wj = 0.5 * g.b * g.dth * g.gauss_w[j] * (1.0 - g.t[j]) / z;
        const double log_m_j = g.theta * std::log1p(-g.t[j]) - log_z;
        const double up = 1.0 / (1.0 - g.t[j]);
        for (int mm = 0; mm < n_th; ++mm) {
            const int n = g.nidx(j, mm);
            g.qx[n] = g.r[j] * std::cos(g.th[mm]);
            g.qy[n] = g.r[j] * std::sin(g.th[mm]);
            g.w[n] = wj;
            g.log_m[n] = log_m_j;
            g.m[n] = std::exp(log_m_j);
            g.uprime[n] = up;
            raw += wj;
        }
    }
    g.raw_sum = raw;
    // grid estimate of the normalization integral, independent of z
    double s = 0.0;
    for (int j = 0; j < n_r; ++j) s += g.gauss_w[j] * (1.0 - g.t[j]);
    g.partition_estimate = 0.5 * g.b * 2.0 * std::acos(-1.0) * s;

    if (std::abs(raw - 1.0) > 1e-4)
        throw QuadratureNotConverged("configuration quadrature defect " +
                                     std::to_string(std::abs(raw - 1.0)) +
                                     " exceeds 1e-4; increase nq_r/nq_theta");
    for (double& v : g.w) v /= raw;
    return g;
}

void build_edges(const SpringGrid& g, double b, double theta, double log_z,
                 std::vector<QEdge>& edges) {
    const int n_r = g.n_r, n_th = g.n_th;
    edges.clear();
    edges.reserve(static_cast<size_t>(n_r) * n_th * 2);

    // radial edges between consecutive rings, same angle
    for (int j = 0; j + 1 < n_r; ++j) {
        const double r_mid = 0.5 * (g.r[j] + g.r[j + 1]);
        const double len = g.r[j + 1] - g.r[j];
        const double m_mid = std::exp(log_m_of_r(r_mid, b, theta, log_z));
        const double s_e = r_mid * g.dth;
        for (int mm = 0; mm < n_th; ++mm) {
            QEdge e;
            e.a = g.nidx(j, mm);
            e.b = g.nidx(j + 1, mm);
            e.cond = m_mid * s_e / len;
            e.mcoef = m_mid * s_e;
            e.tx = std::cos(g.th[mm]);
            e.ty = std::sin(g.th[mm]);
            e.qex = r_mid * e.tx;
            e.qey = r_mid * e.ty;
            edges.push_back(e);
        }
    }

    // shell widths: control volume of ring j spans the midpoints between
    // rings, closed by 0 at the center and sqrt(b) at the boundary
    std::vector<double> shell(n_r);
    for (int j = 0; j < n_r; ++j) {
        const double lo = (j == 0) ? 0.0 : 0.5 * (g.r[j - 1] + g.r[j]);
        const double hi = (j + 1 == n_r) ? std::sqrt(b) : 0.5 * (g.r[j] + g.r[j + 1]);
        shell[j] = hi - lo;
    }

    // angular edges within each ring (periodic in the angle)
    for (int j = 0; j < n_r; ++j) {
        const double m_j = std::exp(log_m_of_r(g.r[j], b, theta, log_z));
        const double len = g.r[j] * g.dth;
        for (int mm = 0; mm < n_th; ++mm) {
            const int mp = (mm + 1) % n_th;
            const double th_mid = g.th[mm] + 0.5 * g.dth;
            QEdge e;
            e.a = g.nidx(j, mm);
            e.b = g.nidx(j, mp);
            e.cond = m_j * shell[j] / len;
            e.mcoef = m_j * shell[j];
            e.tx = -std::sin(th_mid);
            e.ty = std::cos(th_mid);
            e.qex = g.r[j] * std::cos(th_mid);
            e.qey = g.r[j] * std::sin(th_mid);
            edges.push_back(e);
        }
    }
}

}  // namespace

ConfigGrid make_config_grid(const SpringChain& chain, int n_r, int n_th) {
    std::vector<std::string> bad;
    if (n_r < 4) bad.push_back("grid.nq_r must be at least 4");
    if (n_th < 8) bad.push_back("grid.nq_theta must be at least 8");
    if (n_th % 2 != 0) bad.push_back("grid.nq_theta must be even");
    if (!bad.empty()) throw ValidationError(bad);

    ConfigGrid cg;
    cg.chain = chain;
    cg.spring.reserve(chain.K);
    for (int i = 0; i < chain.K; ++i)
        cg.spring.push_back(build_spring_grid(chain, i, n_r, n_th));
    if (chain.K == 1)
        build_edges(cg.spring[0], chain.b[0], chain.theta[0], std::log(chain.z[0]),
                    cg.edges);
    return cg;
}

double grid_second_moment(const SpringGrid& g) {
    double s = 0.0;
    for (int n = 0; n < g.nodes(); ++n)
        s += g.w[n] * (g.qx[n] * g.qx[n] + g.qy[n] * g.qy[n]);
    return s;
}

}  // namespace polyflow
