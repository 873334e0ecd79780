#pragma once

#include <functional>
#include <vector>

namespace polyflow::quad {

// Adaptive Simpson on [a,b] with Richardson acceptance. Throws
// QuadratureNotConverged if the requested relative tolerance cannot be met
// within max_depth bisection levels.
double adaptive(const std::function<double(double)>& f, double a, double b,
                double rel_tol, int max_depth = 48);

// Gauss quadrature on [0,1] with weight (1-t)^alpha, alpha > -1:
//   integral_0^1 (1-t)^alpha g(t) dt  =  sum_j weight[j] g(node[j])
// exact for polynomial g up to degree 2n-1. Nodes are interior and cluster
// away from t = 1. Built by Golub-Welsch from the three-term recurrence.
struct GaussRule {
    std::vector<double> node;
    std::vector<double> weight;
};
GaussRule gauss_jacobi01(int n, double alpha);

// Eigenvalues (ascending, into diag) and first eigenvector components (into
// first_comp) of the symmetric tridiagonal matrix with the given diagonal and
// off-diagonal. Used by gauss_jacobi01; exposed for tests.
void symtri_eigen(std::vector<double>& diag, std::vector<double>& off,
                  std::vector<double>& first_comp);

}  // namespace polyflow::quad
