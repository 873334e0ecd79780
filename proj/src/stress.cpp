#include "polyflow/stress.hpp"

#include "polyflow/errors.hpp"

namespace polyflow {

void number_density(const OmegaGrid& og, const ConfigGrid& cg, const Field& psi,
                    Field& out) {
    const int nn = cg.nodes();
    out.assign(og.cells(), 0.0);
    if (cg.chain.K == 1) {
        const SpringGrid& sg = cg.spring[0];
        for (int c = 0; c < og.cells(); ++c) {
            const int base = c * nn;
            double s = 0.0;
            for (int q = 0; q < nn; ++q) s += sg.w[q] * psi[base + q];
            out[c] = s;
        }
        return;
    }
    for (int c = 0; c < og.cells(); ++c) {
        const int base = c * nn;
        double s = 0.0;
        for (int q = 0; q < nn; ++q) s += cg.weight(q) * psi[base + q];
        out[c] = s;
    }
}

void kramers_tensor(const OmegaGrid& og, const ConfigGrid& cg, const Field& psi,
                    std::vector<SymTensorField>& c_out) {
    const int K = cg.chain.K;
    const int nn = cg.nodes();
    c_out.assign(K, {});
    for (auto& t : c_out) t.resize(og.cells());
    for (int c = 0; c < og.cells(); ++c) {
        const int base = c * nn;
        for (int q = 0; q < nn; ++q) {
            const double wpsi = cg.weight(q) * psi[base + q];
            for (int i = 0; i < K; ++i) {
                const SpringGrid& sg = cg.spring[i];
                const int s = cg.sub_node(q, i);
                const double f = wpsi * sg.uprime[s];
                c_out[i].xx[c] += f * sg.qx[s] * sg.qx[s];
                c_out[i].xy[c] += f * sg.qx[s] * sg.qy[s];
                c_out[i].yy[c] += f * sg.qy[s] * sg.qy[s];
            }
        }
    }
}

void extra_stress(const OmegaGrid& og, const ConfigGrid& cg, const Field& psi,
                  double k, double z, SymTensorField& tau) {
    const int K = cg.chain.K;
    std::vector<SymTensorField> ci;
    kramers_tensor(og, cg, psi, ci);
    Field n;
    number_density(og, cg, psi, n);
    tau.resize(og.cells());
    for (int c = 0; c < og.cells(); ++c) {
        double cxx = 0.0, cxy = 0.0, cyy = 0.0;
        for (int i = 0; i < K; ++i) {
            cxx += ci[i].xx[c];
            cxy += ci[i].xy[c];
            cyy += ci[i].yy[c];
        }
        const double iso = k * (K + 1) * n[c] + z * n[c] * n[c];
        tau.xx[c] = k * cxx - iso;
        tau.xy[c] = k * cxy;
        tau.yy[c] = k * cyy - iso;
    }
}

void elastic_stress_graph(const OmegaGrid& og, const ConfigGrid& cg,
                          const Field& psi, VelGrad& g_out) {
    if (cg.chain.K != 1)
        throw AssemblyError("graph stress assembly supports one spring only");
    const int nq = cg.spring[0].nodes();
    g_out.resize(og.cells());
    for (int c = 0; c < og.cells(); ++c) {
        const int base = c * nq;
        double gxx = 0.0, gxy = 0.0, gyx = 0.0, gyy = 0.0;
        for (const QEdge& e : cg.edges) {
            const double d = e.mcoef * (psi[base + e.b] - psi[base + e.a]);
            gxx += d * e.tx * e.qex;
            gxy += d * e.tx * e.qey;
            gyx += d * e.ty * e.qex;
            gyy += d * e.ty * e.qey;
        }
        g_out.xx[c] = gxx;
        g_out.xy[c] = gxy;
        g_out.yx[c] = gyx;
        g_out.yy[c] = gyy;
    }
}

}  // namespace polyflow
