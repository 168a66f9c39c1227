#pragma once

namespace bmdcm {

// J(sigma): mutual information of a consistent-Gaussian LLR channel whose LLR has
// mean sigma^2/2 and variance sigma^2 under the transmitted bit.
//
// Two evaluation stacks coexist on purpose:
//  * the quadrature-grade pair (j_function / j_inverse), absolute accuracy <= 1e-9,
//    backing the surrogate-matching contracts and the simulated surrogate channels;
//  * the Brannstrom two-branch polynomial pair (j_approx / j_inverse_approx),
//    the kernel customarily used inside P-EXIT threshold analyses, which is what
//    reproduces the published protograph thresholds.

// Direct certified quadrature; the oracle the table-backed j_function is tested against.
double j_quadrature(double sigma);

// Table-backed exact J (cubic Hermite over a dense grid, derivative-accurate).
double j_function(double sigma);

// Inverse of j_function by monotone bisection on the same table; the argument is
// clamped to <= 1 - 1e-12 so perfect-channel inputs stay finite inside P-EXIT.
// Throws NumericalError for i < 0 or i >= 1 beyond the clamp window.
double j_inverse(double i);

// Brannstrom/ten Brink approximation pair.
double j_approx(double sigma);
double j_inverse_approx(double i);

enum class JKernel {
    Quadrature, // exact table-backed pair
    Approx      // polynomial pair (default for threshold analysis)
};

inline double j_of(JKernel k, double sigma) {
    return k == JKernel::Approx ? j_approx(sigma) : j_function(sigma);
}
inline double jinv_of(JKernel k, double i) {
    return k == JKernel::Approx ? j_inverse_approx(i) : j_inverse(i);
}

} // namespace bmdcm
