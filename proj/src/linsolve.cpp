#include "polyflow/linsolve.hpp"

#include <cmath>
#include <string>

#include "polyflow/errors.hpp"

namespace polyflow {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void precond(const std::vector<double>* jacobi, const std::vector<double>& r,
             std::vector<double>& z) {
    if (jacobi) {
        for (size_t i = 0; i < r.size(); ++i) z[i] = r[i] / (*jacobi)[i];
    } else {
        z = r;
    }
}

int iter_cap(const SolveOpts& opts, int n) {
    if (opts.max_iter > 0) return opts.max_iter;
    return 10 * static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
}

}  // namespace

SolveStats solve_cg(const LinOp& op, const std::vector<double>& rhs,
                    std::vector<double>& x, const std::vector<double>* jacobi,
                    SolveOpts opts) {
    const int n = op.n;
    const double rhs_norm = norm(rhs);
    if (rhs_norm == 0.0) {
        x.assign(n, 0.0);
        return {0, 0.0};
    }
    std::vector<double> r(n), z(n), p(n), ap(n);
    op.apply(x, ap);
    for (int i = 0; i < n; ++i) r[i] = rhs[i] - ap[i];
    double rn = norm(r);
    if (rn <= opts.rel_tol * rhs_norm) return {0, rn / rhs_norm};

    precond(jacobi, r, z);
    p = z;
    double rz = dot(r, z);
    const int cap = iter_cap(opts, n);
    for (int it = 1; it <= cap; ++it) {
        op.apply(p, ap);
        const double pap = dot(p, ap);
        if (!(pap > 0.0))
            throw SolverError("cg breakdown: operator not positive definite");
        const double alpha = rz / pap;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        rn = norm(r);
        if (!std::isfinite(rn)) throw SolverError("cg produced non-finite residual");
        if (rn <= opts.rel_tol * rhs_norm) return {it, rn / rhs_norm};
        precond(jacobi, r, z);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw SolverError("cg did not converge in " + std::to_string(cap) +
                      " iterations; rel residual " + std::to_string(rn / rhs_norm));
}

SolveStats solve_bicgstab(const LinOp& op, const std::vector<double>& rhs,
                          std::vector<double>& x,
                          const std::vector<double>* jacobi, SolveOpts opts) {
    const int n = op.n;
    const double rhs_norm = norm(rhs);
    if (rhs_norm == 0.0) {
        x.assign(n, 0.0);
        return {0, 0.0};
    }
    std::vector<double> r(n), r0(n), p(n), v(n), s(n), t(n), ph(n), sh(n);
    op.apply(x, v);
    for (int i = 0; i < n; ++i) r[i] = rhs[i] - v[i];
    double rn = norm(r);
    if (rn <= opts.rel_tol * rhs_norm) return {0, rn / rhs_norm};
    r0 = r;
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    std::fill(p.begin(), p.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
    const int cap = iter_cap(opts, n);
    for (int it = 1; it <= cap; ++it) {
        const double rho_new = dot(r0, r);
        if (std::abs(rho_new) < 1e-300)
            throw SolverError("bicgstab breakdown: rho vanished");
        const double beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (int i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        precond(jacobi, p, ph);
        op.apply(ph, v);
        const double r0v = dot(r0, v);
        if (std::abs(r0v) < 1e-300)
            throw SolverError("bicgstab breakdown: r0.v vanished");
        alpha = rho / r0v;
        for (int i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        if (norm(s) <= opts.rel_tol * rhs_norm) {
            for (int i = 0; i < n; ++i) x[i] += alpha * ph[i];
            return {it, norm(s) / rhs_norm};
        }
        precond(jacobi, s, sh);
        op.apply(sh, t);
        const double tt = dot(t, t);
        if (tt == 0.0) throw SolverError("bicgstab breakdown: t vanished");
        omega = dot(t, s) / tt;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * ph[i] + omega * sh[i];
            r[i] = s[i] - omega * t[i];
        }
        rn = norm(r);
        if (!std::isfinite(rn))
            throw SolverError("bicgstab produced non-finite residual");
        if (rn <= opts.rel_tol * rhs_norm) return {it, rn / rhs_norm};
    }
    throw SolverError("bicgstab did not converge in " + std::to_string(cap) +
                      " iterations; rel residual " + std::to_string(rn / rhs_norm));
}

}  // namespace polyflow
