#pragma once

#include <vector>

namespace polyflow {

enum class EosKind { Isentropic, Tait };

// Tait-form pressure p = a0 (rho/rho_ref)^gamma - a1.
struct TaitParams {
    double a0 = 1.0;
    double a1 = 0.0;
    double rho_ref = 1.0;
};

// Fluid and coupling constants. Gamma is derived (max(gamma, 8)); the rest
// are validated at config load.
struct ModelParams {
    EosKind eos = EosKind::Isentropic;
    double c_p = 1.0;      // isentropic pressure coefficient
    double gamma = 2.0;    // adiabatic exponent, > 3/2
    double Gamma = 8.0;    // pressure augmentation exponent, = max(gamma, 8)
    TaitParams tait;
    double kappa = 0.1;    // pressure augmentation strength, in (0,1]
    double alpha = 0.1;    // density diffusion, in (0,1]
    double L_cut = 20.0;   // cutoff level, > 1
    double delta = 0.0;    // entropy floor, in [0,1); 0 disables the floor
    double eps = 0.1;      // center-of-mass diffusion
    double lambda = 0.5;   // relaxation time, > 0
    double k_temp = 0.5;   // polymer stress scale, > 0
    double z_int = 0.1;    // quadratic interaction coefficient, > 0
    double mu_s = 0.25;    // shear viscosity, > 0
    double mu_b = 0.25;    // bulk viscosity, >= 0
};

// Bead-spring chain: K springs with finite extensibility b_i > 2 in d = 2,
// coupled through a symmetric positive definite matrix. Normalization
// integrals z are computed at construction by adaptive quadrature.
struct SpringChain {
    int K = 1;
    int d = 2;
    std::vector<double> b;       // per spring
    std::vector<double> theta;   // b/2
    std::vector<double> rouse;   // K x K, row-major
    double rouse_min_eig = 0.0;  // smallest eigenvalue, > 0
    int bead_coeff = 2;          // K + 1
    std::vector<double> z;       // Maxwellian normalization per spring
};

// Nearest-neighbour coupling matrix tridiag(-1, 2, -1) of size K.
std::vector<double> linear_chain_rouse(int K);

// Smallest eigenvalue of a symmetric K x K matrix (row-major). Throws
// NotPositiveDefinite if it is <= 0, std::invalid_argument on asymmetry.
double rouse_min_eigenvalue(const std::vector<double>& a, int K);

// Validates and assembles the chain; throws ValidationError listing every
// violated rule.
SpringChain make_chain(int K, int d, std::vector<double> b, std::vector<double> rouse);

struct PotentialEval {
    double value;
    double deriv;
};

// Finitely extensible spring potential at s = |q_i|^2 / 2:
//   U(s) = -(b/2) log(1 - 2s/b),  U'(s) = (1 - 2s/b)^{-1}.
// Throws std::domain_error at or beyond full extension (s >= b/2).
PotentialEval spring_potential(double s, int i, const SpringChain& c);

// F_i(q_i) = U_i'(|q_i|^2/2) q_i, written into out[0..d).
void spring_force(const double* qi, int i, const SpringChain& c, double* out);

struct MaxwellianEval {
    double value;      // 0 exactly on the domain boundary
    double log_value;  // -inf on the boundary
};

// Normalized equilibrium weight M(q) = prod_i z_i^{-1} (1 - |q_i|^2/b_i)^{b_i/2}
// for q = (q_1, ..., q_K) with q_i in R^d, laid out contiguously.
// Throws std::domain_error outside the closed domain.
MaxwellianEval maxwellian(const double* q, const SpringChain& c);

// p_kappa(rho): base equation of state plus the augmentation
// kappa (rho^4 + rho^Gamma).
double eos_pressure(double rho, const ModelParams& mp);

// P_kappa(rho): primitive with rho P' - P = p. For the isentropic form
// P(0) = 0; the Tait primitive carries the additive constant a1 so that the
// same identity holds.
double pressure_primitive(double rho, const ModelParams& mp);

// d/drho of pressure_primitive; convex in rho (the internal-energy tester)
double pressure_primitive_deriv(double rho, const ModelParams& mp);

}  // namespace polyflow
