#include "polyflow/quadrature.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "polyflow/errors.hpp"

namespace polyflow::quad {

namespace {

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_rec(const std::function<double(double)>& f, double a, double b,
                    double fa, double fm, double fb, double whole, double tol,
                    int depth, int max_depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= max_depth)
        throw QuadratureNotConverged("adaptive quadrature: tolerance not met at max depth");
    return adaptive_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
           adaptive_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double adaptive(const std::function<double(double)>& f, double a, double b,
                double rel_tol, int max_depth) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = simpson(fa, fm, fb, b - a);
    const double scale = std::max(std::abs(whole), 1e-30);
    return adaptive_rec(f, a, b, fa, fm, fb, whole, rel_tol * scale, 0, max_depth);
}

// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix,
// accumulating only the first row of the eigenvector matrix (all that
// Golub-Welsch needs). diag/off are overwritten; off[n-1] is workspace.
void symtri_eigen(std::vector<double>& diag, std::vector<double>& off,
                  std::vector<double>& first_comp) {
    const int n = static_cast<int>(diag.size());
    first_comp.assign(n, 0.0);
    if (n == 0) return;
    first_comp[0] = 1.0;
    if (n == 1) return;
    off.resize(n);
    off[n - 1] = 0.0;

    const double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
                if (std::abs(off[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw SolverError("symtri_eigen: QL iteration failed to converge");
                double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
                double r = std::hypot(g, 1.0);
                g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * off[i];
                    const double bq = c * off[i];
                    r = std::hypot(f, g);
                    off[i + 1] = r;
                    if (r == 0.0) {
                        diag[i + 1] -= p;
                        off[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = diag[i + 1] - p;
                    r = (diag[i] - g) * s + 2.0 * c * bq;
                    p = s * r;
                    diag[i + 1] = g + p;
                    g = c * r - bq;
                    f = first_comp[i + 1];
                    first_comp[i + 1] = s * first_comp[i] + c * f;
                    first_comp[i] = c * first_comp[i] - s * f;
                }
                if (r == 0.0 && i >= l) continue;
                diag[l] -= p;
                off[l] = g;
                off[m] = 0.0;
            }
        } while (m != l);
    }

    // insertion sort ascending, carrying the first components
    for (int i = 1; i < n; ++i) {
        const double dv = diag[i], zv = first_comp[i];
        int j = i - 1;
        while (j >= 0 && diag[j] > dv) {
            diag[j + 1] = diag[j];
            first_comp[j + 1] = first_comp[j];
            --j;
        }
        diag[j + 1] = dv;
        first_comp[j + 1] = zv;
    }
}

GaussRule gauss_jacobi01(int n, double alpha) {
    if (n < 1) throw std::invalid_argument("gauss_jacobi01: need n >= 1");
    if (alpha <= -1.0) throw std::invalid_argument("gauss_jacobi01: need alpha > -1");

    // Monic recurrence coefficients for the Jacobi weight (1-x)^alpha on [-1,1]
    // (second parameter zero). a_k: diagonal, b_k: squared off-diagonal.
    const double bt = 0.0;
    std::vector<double> a(n), b(n);
    a[0] = (bt - alpha) / (alpha + bt + 2.0);
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + alpha + bt;
        a[k] = (bt * bt - alpha * alpha) / (s * (s + 2.0));
    }
    if (n > 1) b[1] = 4.0 * (alpha + 1.0) * (bt + 1.0) /
                      ((alpha + bt + 2.0) * (alpha + bt + 2.0) * (alpha + bt + 3.0));
    for (int k = 2; k < n; ++k) {
        const double s = 2.0 * k + alpha + bt;
        b[k] = 4.0 * k * (k + alpha) * (k + bt) * (k + alpha + bt) /
               (s * s * (s + 1.0) * (s - 1.0));
    }
    // total weight mass on [-1,1]
    const double mu0 = std::exp((alpha + bt + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                                std::lgamma(bt + 1.0) - std::lgamma(alpha + bt + 2.0));

    std::vector<double> diag = a, off(n, 0.0), z;
    for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(b[k]);
    symtri_eigen(diag, off, z);

    // map x in [-1,1] to t = (1+x)/2 in [0,1]; the weight picks up 2^-(alpha+1)
    GaussRule rule;
    rule.node.resize(n);
    rule.weight.resize(n);
    const double scale = mu0 * std::exp(-(alpha + 1.0) * std::log(2.0));
    for (int k = 0; k < n; ++k) {
        rule.node[k] = 0.5 * (1.0 + diag[k]);
        rule.weight[k] = scale * z[k] * z[k];
    }
    return rule;
}

}  // namespace polyflow::quad
