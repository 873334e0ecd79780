#pragma once

#include <vector>

#include "polyflow/grid.hpp"
#include "polyflow/operators.hpp"

namespace polyflow {

// symmetric 2x2 tensor field
struct SymTensorField {
    Field xx, xy, yy;
    void resize(int n) {
        xx.assign(n, 0.0);
        xy.assign(n, 0.0);
        yy.assign(n, 0.0);
    }
};

// polymer number density: per-cell configuration average of psi (any K)
void number_density(const OmegaGrid& og, const ConfigGrid& cg, const Field& psi,
                    Field& out);

// Per-spring conformation tensors C_i = sum_q W_q psi U'_i q_i (x) q_i.
// With psi identically 1 each C_i is the identity (the quadrature integrates
// the tension moments of the Maxwellian exactly).
void kramers_tensor(const OmegaGrid& og, const ConfigGrid& cg, const Field& psi,
                    std::vector<SymTensorField>& c_out);

// tau = k (sum_i C_i - (K+1) n I) - z n^2 I with n the number density
void extra_stress(const OmegaGrid& og, const ConfigGrid& cg, const Field& psi,
                  double k, double z, SymTensorField& tau);

// Graph form of the elastic stress divergence pairing: the tensor
// G_ab[c] = sum_edges mcoef (psi_b - psi_a) t_a q_b, whose contraction with a
// velocity gradient reproduces the configuration drag functional tested with
// the entropy derivative. Consistent with C - nI; single-spring chains only.
void elastic_stress_graph(const OmegaGrid& og, const ConfigGrid& cg,
                          const Field& psi, VelGrad& g_out);

}  // namespace polyflow
