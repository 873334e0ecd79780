#pragma once

#include <functional>
#include <vector>

namespace polyflow {

// Matrix-free linear operator on flat coefficient vectors.
struct LinOp {
    int n = 0;
    std::function<void(const std::vector<double>&, std::vector<double>&)> apply;
};

struct SolveOpts {
    double rel_tol = 1e-10;
    int max_iter = 0;  // 0 selects the default cap of 10 * ceil(sqrt(n))
};

struct SolveStats {
    int iters = 0;
    double rel_residual = 0.0;
};

// Conjugate gradients for symmetric positive definite systems. The initial
// guess in x is kept when its residual already meets the tolerance, so a
// stationary state costs no iterations. Optional Jacobi preconditioning via
// a positive diagonal. Throws SolverError on breakdown or stagnation.
SolveStats solve_cg(const LinOp& op, const std::vector<double>& rhs,
                    std::vector<double>& x,
                    const std::vector<double>* jacobi = nullptr,
                    SolveOpts opts = {});

// BiCGStab for general (nonsymmetric) systems, same conventions as solve_cg.
SolveStats solve_bicgstab(const LinOp& op, const std::vector<double>& rhs,
                          std::vector<double>& x,
                          const std::vector<double>* jacobi = nullptr,
                          SolveOpts opts = {});

}  // namespace polyflow
