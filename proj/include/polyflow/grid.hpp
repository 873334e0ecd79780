#pragma once

#include <vector>

#include "polyflow/model.hpp"

namespace polyflow {

enum class Bc { Periodic, NoSlipNeumann };

// Uniform cell-centered rectangle. Fields are row-major with x outermost:
// index = ix * ny + iy.
struct OmegaGrid {
    int nx = 0, ny = 0;
    double lx = 1.0, ly = 1.0;
    Bc bc = Bc::Periodic;
    double hx = 0.0, hy = 0.0;
    double cell_w = 0.0;  // exact cell measure hx * hy

    int cells() const { return nx * ny; }
    int idx(int i, int j) const { return i * ny + j; }
    double xc(int i) const { return (i + 0.5) * hx; }
    double yc(int j) const { return (j + 0.5) * hy; }
};

OmegaGrid make_omega_grid(int nx, int ny, double lx, double ly, Bc bc);

// Polar quadrature grid on the disc |q| < sqrt(b) for one spring.
// Radial nodes are Gauss points in t = r^2/b for the weight (1-t)^(theta-1),
// so both plain Maxwellian moments and spring-tension moments (which carry a
// 1/(1-t) factor) are integrated exactly for polynomial data. Angles are
// uniform midpoints. Node index = j * n_th + m.
struct SpringGrid {
    int n_r = 0, n_th = 0;
    double b = 0.0, theta = 0.0;
    std::vector<double> t, r;      // radial nodes (size n_r)
    std::vector<double> gauss_w;   // radial Gauss weights for (1-t)^(theta-1)
    std::vector<double> th;        // angle midpoints (size n_th)
    double dth = 0.0;
    double raw_sum = 0.0;          // weight sum before renormalization, near 1
    double partition_estimate = 0.0;  // grid value of the normalization integral

    // per-node caches (size n_r * n_th)
    std::vector<double> qx, qy;
    std::vector<double> w;       // quadrature weight incl. Maxwellian, renormalized
    std::vector<double> m;       // Maxwellian value
    std::vector<double> log_m;
    std::vector<double> uprime;  // spring tension U'(|q|^2/2)

    int nodes() const { return n_r * n_th; }
    int nidx(int j, int mm) const { return j * n_th + mm; }
};

// Edge of the polar grid graph, used by the configuration-space operators.
// cond: conductance of the Maxwellian-weighted diffusion form.
// mcoef: Maxwellian times transverse measure, the drag flux coefficient.
// (tx,ty): unit tangent along the edge from a to b; (qex,qey): edge midpoint.
struct QEdge {
    int a = 0, b = 0;
    double cond = 0.0;
    double mcoef = 0.0;
    double tx = 0.0, ty = 0.0;
    double qex = 0.0, qey = 0.0;
};

// Product quadrature over all springs plus (for single-spring chains) the
// edge graph for diffusion and drag. Weights per spring sum to 1 exactly
// after renormalization; the pre-normalization defect is guarded.
struct ConfigGrid {
    SpringChain chain;
    std::vector<SpringGrid> spring;
    std::vector<QEdge> edges;  // only populated for K = 1

    int nodes() const {
        int n = 1;
        for (const auto& s : spring) n *= s.nodes();
        return n;
    }
    // flattened-node weight (product over springs)
    double weight(int n) const {
        double v = 1.0;
        for (int i = static_cast<int>(spring.size()) - 1; i >= 0; --i) {
            const int ns = spring[i].nodes();
            v *= spring[i].w[n % ns];
            n /= ns;
        }
        return v;
    }
    // node index of spring i inside flattened node n
    int sub_node(int n, int i) const {
        for (int k = static_cast<int>(spring.size()) - 1; k > i; --k) n /= spring[k].nodes();
        return n % spring[i].nodes();
    }
};

// Builds the grid; throws ValidationError for bad sizes and
// QuadratureNotConverged if the pre-normalization weight defect exceeds 1e-4.
ConfigGrid make_config_grid(const SpringChain& chain, int n_r, int n_th);

// Grid second moment of |q_i|^2 under the Maxwellian (per spring).
double grid_second_moment(const SpringGrid& g);

}  // namespace polyflow
