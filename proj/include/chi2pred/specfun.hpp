#pragma once

#include "chi2pred/quadrature.hpp"

namespace chi2pred::specfun {

/// ln Gamma(x) for x > 0.  Relative error <= 1e-13.
double log_gamma(double x);

/// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a+b) for a, b > 0.
double log_beta(double a, double b);

/// Digamma function psi(x) for x > 0.  Absolute error <= 1e-12.
double digamma(double x);

/// psi(xi1) - psi(xi2) computed directly as the partial-fraction series
/// sum_{i>=0} (xi1 - xi2) / ((i + xi1)(i + xi2)) with an analytic tail
/// correction, which preserves accuracy when the two arguments are close.
double digamma_diff(double xi1, double xi2);

/// Regularized incomplete beta function I_q(alpha, beta) for q in [0, 1],
/// alpha, beta > 0.  Absolute error <= 1e-13.
double reg_inc_beta(double q, double alpha, double beta);

/// ln I_q(alpha, beta), stable for q so small that I_q underflows a double.
double log_reg_inc_beta(double q, double alpha, double beta);

/// Inverse of reg_inc_beta in its first argument: returns q in (0, 1) with
/// I_q(alpha, beta) = omega to within 1e-12 in omega-space, or to the best
/// resolution the double grid allows where the density exceeds ~1e4 (near
/// q = 1 with beta < 1, consecutive representable q values can move I_q by
/// more than 1e-12).  Safeguarded Newton iteration in ln q, seeded from the
/// small-q tail expansion, so roots many orders of magnitude below 1 are
/// still resolved; throws convergence_error if the solve stalls.
double inv_reg_inc_beta(double omega, double alpha, double beta);

/// Gauss hypergeometric function F(a, b; c; z) for a > 0, c > b > 0 and
/// z <= 0, evaluated through the Euler integral representation.  Relative
/// error <= 1e-9.  Arguments z > 0 are rejected.
double gauss_2f1_negz(double a, double b, double c, double z);

} // namespace chi2pred::specfun
