#include "polyflow/config.hpp"

#include <cmath>

#include "polyflow/errors.hpp"

namespace polyflow {

std::vector<std::string> config_violations(const SimConfig& c) {
    std::vector<std::string> v;
    if (!(c.gamma > 1.5)) v.push_back("model.gamma must exceed 3/2");
    if (c.eos == EosKind::Isentropic && !(c.c_p > 0.0))
        v.push_back("model.c_p must be positive");
    if (c.eos == EosKind::Tait) {
        if (!(c.tait.a0 > 0.0)) v.push_back("model.tait.a0 must be positive");
        if (!(c.tait.a1 >= 0.0)) v.push_back("model.tait.a1 must be nonnegative");
        if (!(c.tait.rho_ref > 0.0)) v.push_back("model.tait.rho_ref must be positive");
    }
    if (!(c.mu_s > 0.0)) v.push_back("model.mu_s must be positive");
    if (!(c.mu_b >= 0.0)) v.push_back("model.mu_b must be nonnegative");
    if (!(c.k_temp > 0.0)) v.push_back("model.k must be positive");
    if (!(c.z_int > 0.0)) v.push_back("model.z must be positive");
    if (!(c.eps > 0.0)) v.push_back("model.eps must be positive");
    if (!(c.lambda > 0.0)) v.push_back("model.lambda must be positive");

    if (c.d != 2) v.push_back("chain.d must be 2");
    if (c.K != 1) v.push_back("time stepping supports chain.K = 1 only");
    if (static_cast<int>(c.b.size()) != c.K)
        v.push_back("chain.b must list one extensibility bound per spring");
    for (double bi : c.b)
        if (!(bi > 2.0)) v.push_back("chain.b entries must exceed 2");
    if (c.rouse != "linear-chain")
        v.push_back("chain.rouse must be \"linear-chain\"");

    if (!(c.kappa > 0.0)) v.push_back("regularization.kappa must be positive");
    if (!(c.alpha > 0.0)) v.push_back("regularization.alpha must be positive");
    if (!(c.L_cut > 1.0)) v.push_back("regularization.L must exceed 1");
    if (!(c.delta >= 0.0 && c.delta < 1.0))
        v.push_back("regularization.delta must lie in [0, 1)");
    if (!(c.C0_LT > 0.0)) v.push_back("regularization.C0_LT must be positive");

    if (c.nx < 4) v.push_back("grid.nx must be at least 4");
    if (c.ny < 4) v.push_back("grid.ny must be at least 4");
    if (!(c.lx > 0.0)) v.push_back("grid.lx must be positive");
    if (!(c.ly > 0.0)) v.push_back("grid.ly must be positive");
    if (c.nq_r < 4) v.push_back("grid.nq_r must be at least 4");
    if (c.nq_theta < 8 || c.nq_theta % 2 != 0)
        v.push_back("grid.nq_theta must be even and at least 8");

    if (!(c.T > 0.0)) v.push_back("time.T must be positive");
    if (c.N < 1) v.push_back("time.N must be at least 1");
    if (c.m_sub < 1) v.push_back("time.m_sub must be at least 1");
    if (c.picard_max < 1) v.push_back("time.picard_max must be at least 1");
    if (!(c.picard_tol > 0.0)) v.push_back("time.picard_tol must be positive");
    if (!(c.picard_damping > 0.0 && c.picard_damping <= 1.0))
        v.push_back("time.picard_damping must lie in (0, 1]");

    if (c.rho_init == RhoInit::Table &&
        static_cast<int>(c.rho0_table.size()) != c.nx * c.ny)
        v.push_back("init.rho0.table must hold nx*ny values");
    if (c.rho_init == RhoInit::Const && !(c.rho0_value >= 0.0))
        v.push_back("init.rho0.value must be nonnegative");
    if (c.rho_init == RhoInit::Cosine &&
        !(c.rho0_value - std::abs(c.rho0_amp) >= 0.0))
        v.push_back("init.rho0 cosine profile must stay nonnegative");
    if (c.psi_init == PsiInit::Stretch && !(c.psi_amp >= 0.0 && c.psi_amp <= 1.0))
        v.push_back("init.psi0.amp must lie in [0, 1]");
    if (c.psi_init == PsiInit::Stretch &&
        !(std::abs(c.psi_x_amp) <= 1.0))
        v.push_back("init.psi0.x_amp must lie in [-1, 1]");

    if (c.forcing == ForcingKind::Table &&
        (static_cast<int>(c.f_table_x.size()) != c.nx * c.ny ||
         static_cast<int>(c.f_table_y.size()) != c.nx * c.ny))
        v.push_back("forcing tables must each hold nx*ny values");

    if (c.out_every < 1) v.push_back("output.every must be at least 1");
    if (!(c.pass_threshold >= 0.0 && c.pass_threshold <= 1.0))
        v.push_back("output.pass_threshold must lie in [0, 1]");
    if (!(c.c_q > 0.0)) v.push_back("output.c_q must be positive");
    if (!(c.solver_rel_tol > 0.0 && c.solver_rel_tol < 1e-6))
        v.push_back("solver_rel_tol must lie in (0, 1e-6)");
    return v;
}

void validate_config(const SimConfig& c) {
    auto v = config_violations(c);
    if (!v.empty()) throw ValidationError(v);
}

ModelParams make_model_params(const SimConfig& c) {
    ModelParams mp;
    mp.eos = c.eos;
    mp.c_p = c.c_p;
    mp.gamma = c.gamma;
    mp.Gamma = std::max(c.gamma, 8.0);
    mp.tait = c.tait;
    mp.kappa = c.kappa;
    mp.alpha = c.alpha;
    mp.L_cut = c.L_cut;
    mp.delta = c.delta;
    mp.eps = c.eps;
    mp.lambda = c.lambda;
    mp.k_temp = c.k_temp;
    mp.z_int = c.z_int;
    mp.mu_s = c.mu_s;
    mp.mu_b = c.mu_b;
    return mp;
}

}  // namespace polyflow
