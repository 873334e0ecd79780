#pragma once

#include <string>
#include <vector>

#include "polyflow/grid.hpp"
#include "polyflow/model.hpp"

namespace polyflow {

enum class RhoInit { Const, Cosine, Table };
enum class UInit { Zero, Const };
enum class PsiInit { Equilibrium, Stretch };
enum class ForcingKind { None, Const, Vortex, Table };

// Full run description. Defaults give a small periodic box with an
// equilibrium polymer state; see config_violations for the admissible ranges.
struct SimConfig {
    // model
    EosKind eos = EosKind::Isentropic;
    double c_p = 1.0;
    double gamma = 2.0;
    double mu_s = 0.25;
    double mu_b = 0.25;
    double k_temp = 0.5;   // polymer elastic temperature factor
    double z_int = 0.1;    // quadratic interaction coefficient
    double eps = 0.1;      // center-of-mass diffusion
    double lambda = 0.5;   // relaxation time
    TaitParams tait{2.0, 0.5, 1.0};

    // chain
    int K = 1;
    int d = 2;
    std::vector<double> b{4.0};
    std::string rouse = "linear-chain";

    // regularization
    double kappa = 0.1;
    double alpha = 0.1;
    double L_cut = 20.0;
    double delta = 0.0;
    double C0_LT = 1.0;  // step-size guard coefficient

    // grid
    int nx = 8, ny = 8;
    double lx = 1.0, ly = 1.0;
    Bc bc = Bc::Periodic;
    int nq_r = 16, nq_theta = 32;

    // time stepping
    double T = 1.0;
    int N = 200;
    int m_sub = 1;
    int picard_max = 50;
    double picard_tol = 1e-9;
    double picard_damping = 1.0;

    // initial data
    RhoInit rho_init = RhoInit::Const;
    double rho0_value = 1.0;
    double rho0_amp = 0.0;  // cosine amplitude
    std::vector<double> rho0_table;
    UInit u_init = UInit::Zero;
    double u0x = 0.0, u0y = 0.0;
    PsiInit psi_init = PsiInit::Equilibrium;
    double psi_amp = 0.0;    // radial stretch amplitude
    double psi_x_amp = 0.0;  // spatial modulation of the stretch

    // forcing
    ForcingKind forcing = ForcingKind::None;
    double f_amp = 0.0;              // vortex amplitude
    double fx_const = 0.0, fy_const = 0.0;
    std::vector<double> f_table_x, f_table_y;  // per-cell values, x outer

    // output
    int out_every = 1;
    std::string out_prefix = "run";
    bool dump_fields = false;
    double pass_threshold = 0.99;
    double c_q = 1.0;  // quadrature constant in the energy tolerance

    // linear solver accuracy (mass identities track this floor)
    double solver_rel_tol = 3e-13;
};

// Collects every violated rule (empty means valid).
std::vector<std::string> config_violations(const SimConfig& c);

// Throws ValidationError listing all violations.
void validate_config(const SimConfig& c);

// Model parameter block with Gamma = max(gamma, 8) derived.
ModelParams make_model_params(const SimConfig& c);

}  // namespace polyflow
