#pragma once

// Cutoff and relative-entropy family used throughout the solver.
//
// cutoff_beta(s,L)            min(s,L), finite slope cap for the drag and
//                             transport coefficients
// cutoff_beta_delta(s,L,d)    max(cutoff_beta(s,L), d), additionally floored
//                             away from zero
// entropy_F(s)                s(log s - 1) + 1, nonnegative, convex, F(1) = 0
// entropy_FL(s,L)             C^{2,1} quadratic extension of F above s = L;
//                             second derivative is exactly 1/cutoff_beta(s,L)
// entropy_FL_delta(s,L,d)     additional quadratic extension below s = d,
//                             defined on all of R; second derivative is
//                             exactly 1/cutoff_beta_delta(s,L,d)
//
// Branch convention: at the knots s = d and s = L the lower branch applies.
// Both extensions are C^1 with matching one-sided second derivatives at the
// knots, so the convention only fixes which expression is evaluated.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polyflow/errors.hpp"

namespace polyflow {

inline double cutoff_beta(double s, double L) {
    return std::min(s, L);
}

inline double cutoff_beta_delta(double s, double L, double delta) {
    return std::max(cutoff_beta(s, L), delta);
}

inline double entropy_F(double s) {
    if (s < 0.0) throw std::domain_error("entropy_F: argument must be >= 0");
    if (s == 0.0) return 1.0;  // limit value of s log s is 0
    return s * (std::log(s) - 1.0) + 1.0;
}

struct EntropyJet {
    double value;
    double first;
    double second;
};

inline EntropyJet entropy_FL(double s, double L) {
    if (s < 0.0) throw std::domain_error("entropy_FL: argument must be >= 0");
    EntropyJet j;
    j.second = 1.0 / cutoff_beta(s, L);  // identity with the cutoff, bitwise
    if (s <= L) {
        j.value = entropy_F(s);
        j.first = std::log(s);  // -inf at s = 0, callers sample s > 0
    } else {
        j.value = (s * s - L * L) / (2.0 * L) + s * (std::log(L) - 1.0) + 1.0;
        j.first = s / L + std::log(L) - 1.0;
    }
    return j;
}

inline EntropyJet entropy_FL_delta(double s, double L, double delta) {
    if (delta == 0.0) return entropy_FL(s, L);
    EntropyJet j;
    j.second = 1.0 / cutoff_beta_delta(s, L, delta);
    if (s <= delta) {
        j.value = (s * s - delta * delta) / (2.0 * delta) + s * (std::log(delta) - 1.0) + 1.0;
        j.first = s / delta + std::log(delta) - 1.0;
    } else {
        j = entropy_FL(s, L);
        j.second = 1.0 / cutoff_beta_delta(s, L, delta);
    }
    return j;
}

// Divided-difference mean of the cutoff along an edge with endpoint states a, b:
//   (b - a) / (G(b) - G(a)) with G the first derivative of the entropy,
// which satisfies  mean * (G(b) - G(a)) = b - a  by construction. This is the
// central edge coefficient for the drag flux; it lies between the endpoint
// cutoff values and tends to cutoff(a) as b -> a. Falls back to the
// arithmetic mean of the endpoint cutoffs when the formula is unusable
// (nonpositive states with no floor, or indistinguishable endpoints).
inline double cutoff_edge_mean(double a, double b, double L, double delta) {
    const double beta_a = cutoff_beta_delta(a, L, delta);
    const double beta_b = cutoff_beta_delta(b, L, delta);
    const double scale = std::max({std::abs(a), std::abs(b), 1.0});
    if (std::abs(b - a) <= 1e-8 * scale) return 0.5 * (beta_a + beta_b);
    if (delta == 0.0 && (a <= 0.0 || b <= 0.0)) return 0.5 * (beta_a + beta_b);
    const double ga = (delta > 0.0) ? entropy_FL_delta(a, L, delta).first : entropy_FL(a, L).first;
    const double gb = (delta > 0.0) ? entropy_FL_delta(b, L, delta).first : entropy_FL(b, L).first;
    if (!(gb > ga) && !(ga > gb)) return 0.5 * (beta_a + beta_b);
    return (b - a) / (gb - ga);
}

}  // namespace polyflow
