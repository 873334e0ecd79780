#include "polyflow/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "polyflow/errors.hpp"
#include "polyflow/quadrature.hpp"

namespace polyflow {

std::vector<double> linear_chain_rouse(int K) {
    std::vector<double> a(static_cast<size_t>(K) * K, 0.0);
    for (int i = 0; i < K; ++i) {
        a[i * K + i] = 2.0;
        if (i + 1 < K) {
            a[i * K + i + 1] = -1.0;
            a[(i + 1) * K + i] = -1.0;
        }
    }
    return a;
}

double rouse_min_eigenvalue(const std::vector<double>& a_in, int K) {
    if (K < 1 || a_in.size() != static_cast<size_t>(K) * K)
        throw std::invalid_argument("rouse_min_eigenvalue: bad matrix size");
    double scale = 0.0;
    for (double v : a_in) scale = std::max(scale, std::abs(v));
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j)
            if (std::abs(a_in[i * K + j] - a_in[j * K + i]) > 1e-12 * std::max(scale, 1.0))
                throw std::invalid_argument("rouse_min_eigenvalue: matrix not symmetric");

    // cyclic Jacobi rotations; K is small (chains of a few springs)
    std::vector<double> a = a_in;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < K; ++i)
            for (int j = i + 1; j < K; ++j) off += a[i * K + j] * a[i * K + j];
        if (std::sqrt(off) <= 1e-15 * std::max(scale, 1.0)) break;
        for (int p = 0; p < K; ++p) {
            for (int q = p + 1; q < K; ++q) {
                const double apq = a[p * K + q];
                if (std::abs(apq) <= 1e-300) continue;
                const double tau = (a[q * K + q] - a[p * K + p]) / (2.0 * apq);
                const double t = std::copysign(1.0, tau) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int k = 0; k < K; ++k) {
                    const double akp = a[k * K + p], akq = a[k * K + q];
                    a[k * K + p] = c * akp - s * akq;
                    a[k * K + q] = s * akp + c * akq;
                }
                for (int k = 0; k < K; ++k) {
                    const double apk = a[p * K + k], aqk = a[q * K + k];
                    a[p * K + k] = c * apk - s * aqk;
                    a[q * K + k] = s * apk + c * aqk;
                }
            }
        }
    }
    double mn = a[0];
    for (int i = 1; i < K; ++i) mn = std::min(mn, a[i * K + i]);
    if (!(mn > 0.0))
        throw NotPositiveDefinite("coupling matrix has smallest eigenvalue " + std::to_string(mn));
    return mn;
}

SpringChain make_chain(int K, int d, std::vector<double> b, std::vector<double> rouse) {
    std::vector<std::string> bad;
    if (K < 1) bad.push_back("chain.K: must be >= 1");
    if (d != 2) bad.push_back("chain.d: only d = 2 is supported");
    if (b.size() != static_cast<size_t>(std::max(K, 0)))
        bad.push_back("chain.b: need one extensibility value per spring");
    for (size_t i = 0; i < b.size(); ++i)
        if (!(b[i] > 2.0))
            bad.push_back("chain.b[" + std::to_string(i) + "]: must be > 2");
    if (rouse.size() != static_cast<size_t>(std::max(K, 0)) * static_cast<size_t>(std::max(K, 0)))
        bad.push_back("chain.rouse: must be K x K");
    if (!bad.empty()) throw ValidationError(std::move(bad));

    SpringChain c;
    c.K = K;
    c.d = d;
    c.b = std::move(b);
    c.rouse = std::move(rouse);
    c.bead_coeff = K + 1;
    c.theta.resize(K);
    for (int i = 0; i < K; ++i) c.theta[i] = 0.5 * c.b[i];
    c.rouse_min_eig = rouse_min_eigenvalue(c.rouse, K);  // throws if not SPD

    // z_i = integral over the disc |q| < sqrt(b) of (1 - |q|^2/b)^{b/2},
    // radially reduced with t = r^2/b.
    c.z.resize(K);
    for (int i = 0; i < K; ++i) {
        const double bi = c.b[i];
        const double th = c.theta[i];
        c.z[i] = M_PI * bi *
                 quad::adaptive([th](double t) { return std::pow(1.0 - t, th); }, 0.0, 1.0, 1e-12);
    }
    return c;
}

PotentialEval spring_potential(double s, int i, const SpringChain& c) {
    const double bi = c.b[i];
    if (s < 0.0) throw std::domain_error("spring_potential: s must be >= 0");
    const double arg = 1.0 - 2.0 * s / bi;
    if (arg <= 0.0) throw std::domain_error("spring_potential: spring at or beyond full extension");
    return {-c.theta[i] * std::log(arg), 1.0 / arg};
}

void spring_force(const double* qi, int i, const SpringChain& c, double* out) {
    double s2 = 0.0;
    for (int k = 0; k < c.d; ++k) s2 += qi[k] * qi[k];
    const double up = spring_potential(0.5 * s2, i, c).deriv;
    for (int k = 0; k < c.d; ++k) out[k] = up * qi[k];
}

MaxwellianEval maxwellian(const double* q, const SpringChain& c) {
    double logm = 0.0;
    for (int i = 0; i < c.K; ++i) {
        double s2 = 0.0;
        for (int k = 0; k < c.d; ++k) {
            const double v = q[i * c.d + k];
            s2 += v * v;
        }
        const double bi = c.b[i];
        if (s2 > bi * (1.0 + 1e-12))
            throw std::domain_error("maxwellian: configuration outside the domain");
        const double arg = std::max(1.0 - s2 / bi, 0.0);
        logm += c.theta[i] * std::log(arg) - std::log(c.z[i]);  // -inf at the boundary
    }
    return {std::exp(logm), logm};
}

double eos_pressure(double rho, const ModelParams& mp) {
    if (rho < 0.0) throw std::domain_error("eos_pressure: rho must be >= 0");
    double p;
    if (mp.eos == EosKind::Isentropic) {
        p = mp.c_p * std::pow(rho, mp.gamma);
    } else {
        p = mp.tait.a0 * std::pow(rho / mp.tait.rho_ref, mp.gamma) - mp.tait.a1;
    }
    const double r4 = rho * rho * rho * rho;
    return p + mp.kappa * (r4 + std::pow(rho, mp.Gamma));
}

double pressure_primitive(double rho, const ModelParams& mp) {
    if (rho < 0.0) throw std::domain_error("pressure_primitive: rho must be >= 0");
    double P;
    if (mp.eos == EosKind::Isentropic) {
        P = mp.c_p * std::pow(rho, mp.gamma) / (mp.gamma - 1.0);
    } else {
        P = mp.tait.a0 * std::pow(rho / mp.tait.rho_ref, mp.gamma) / (mp.gamma - 1.0) + mp.tait.a1;
    }
    const double r4 = rho * rho * rho * rho;
    return P + mp.kappa * (r4 / 3.0 + std::pow(rho, mp.Gamma) / (mp.Gamma - 1.0));
}

double pressure_primitive_deriv(double rho, const ModelParams& mp) {
    if (rho < 0.0)
        throw std::domain_error("pressure_primitive_deriv: rho must be >= 0");
    const double g = mp.gamma;
    double dP;
    if (mp.eos == EosKind::Isentropic) {
        dP = mp.c_p * g * std::pow(rho, g - 1.0) / (g - 1.0);
    } else {
        dP = mp.tait.a0 * g * std::pow(rho / mp.tait.rho_ref, g - 1.0) /
             (mp.tait.rho_ref * (g - 1.0));
    }
    return dP + mp.kappa * (4.0 * rho * rho * rho / 3.0 +
                            mp.Gamma * std::pow(rho, mp.Gamma - 1.0) / (mp.Gamma - 1.0));
}

}  // namespace polyflow
